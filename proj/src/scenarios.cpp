#include "fairdag/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "fairdag/surgery.hpp"

namespace fairdag {

namespace {

void check_scenario1(const Scenario1Params& p) {
    std::size_t g = p.groups.size();
    if (g < 1 || p.group_probs.size() != g || p.mu.size() != g || p.sigma2.size() != g ||
        p.x1_shift.size() != g)
        throw ParamError("scenario 1 group parameter lengths disagree");
    double mass = 0.0;
    for (double q : p.group_probs) {
        if (q < 0.0) throw ParamError("negative group probability");
        mass += q;
    }
    if (std::abs(mass - 1.0) > 1e-9)
        throw ParamError("group probabilities must sum to 1");
    for (double s2 : p.sigma2)
        if (s2 <= 0.0) throw ParamError("credit-rating variance must be positive");
    if (p.y_noise_variance <= 0.0)
        throw ParamError("response noise variance must be positive");
    if (p.x3_variance <= 0.0)
        throw ParamError("interest-rate variance must be positive");
}

std::vector<double> dirichlet_row(std::mt19937_64& rng, std::size_t k) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> row(k);
    double total = 0.0;
    for (double& v : row) {
        v = -std::log(1.0 - unif(rng));
        total += v;
    }
    for (double& v : row) v /= total;
    return row;
}

std::vector<std::vector<double>> cpt_rows(std::mt19937_64* rng, std::size_t rows,
                                          std::vector<std::vector<double>> fixed) {
    if (!rng) return fixed;
    std::vector<std::vector<double>> out;
    std::size_t width = fixed.front().size();
    for (std::size_t i = 0; i < rows; ++i) out.push_back(dirichlet_row(*rng, width));
    return out;
}

std::vector<std::vector<double>> binary_rows(std::vector<double> p1s) {
    std::vector<std::vector<double>> out;
    for (double p1 : p1s) out.push_back({1.0 - p1, p1});
    return out;
}

const std::vector<std::string> kBinary = {"0", "1"};

}  // namespace

double scenario1_effective_sigma2(const Scenario1Params& p) {
    return p.y_noise_variance + p.x3_slope * p.x3_slope * p.x3_variance;
}

double scenario1_rho(const Scenario1Params& p, std::size_t group) {
    double b2s2 = p.beta * p.beta * p.sigma2.at(group);
    if (b2s2 == 0.0)
        throw DegenerateGroupError("rho undefined for zero-variance group");
    return b2s2 / (b2s2 + scenario1_effective_sigma2(p));
}

double scenario1_noise_ceiling(const Scenario1Params& p) {
    double c = 0.0;
    for (std::size_t g = 0; g < p.groups.size(); ++g)
        c = std::max(c, 1.0 / scenario1_rho(p, g));
    return c;
}

GaussianLinearModel build_scenario1(const Scenario1Params& p) {
    check_scenario1(p);
    NodeId a = 0, x1 = 1, x2 = 2, x3 = 3, y = 4;
    std::map<NodeId, DiscreteRoot> roots = {{a, {p.groups, p.group_probs}}};
    std::map<NodeId, std::map<std::string, Mechanism>> mechs;
    for (std::size_t g = 0; g < p.groups.size(); ++g) {
        mechs[x1][p.groups[g]] = {p.x1_shift[g], {}, p.x1_variance};
    }
    mechs[x3][""] = {p.x3_mean, {}, p.x3_variance};

    if (!p.biased_ratings) {
        Dag dag({{"A", true}, {"X1", true}, {"X2", true}, {"X3", true}, {"Y", true}},
                {{"A", "X1"}, {"A", "X2"}, {"X2", "Y"}, {"X3", "Y"}});
        for (std::size_t g = 0; g < p.groups.size(); ++g)
            mechs[x2][p.groups[g]] = {p.mu[g], {}, p.sigma2[g]};
        mechs[y][""] = {0.0, {{x2, p.beta}, {x3, p.x3_slope}}, p.y_noise_variance};
        return GaussianLinearModel(std::move(dag), std::move(roots), std::move(mechs));
    }

    // Biased ratings: X2 is an additive group shift on the true driver E2,
    // and only E2 feeds the response.
    NodeId e2 = 5;
    Dag dag({{"A", true}, {"X1", true}, {"X2", true}, {"X3", true}, {"Y", true},
             {"E2", false}},
            {{"A", "X1"}, {"A", "X2"}, {"E2", "X2"}, {"E2", "Y"}, {"X3", "Y"}});
    mechs[e2][""] = {0.0, {}, 1.0};
    for (std::size_t g = 0; g < p.groups.size(); ++g)
        mechs[x2][p.groups[g]] = {p.mu[g], {{e2, 1.0}}, 0.0};
    mechs[y][""] = {0.0, {{e2, p.beta}, {x3, p.x3_slope}}, p.y_noise_variance};
    return GaussianLinearModel(std::move(dag), std::move(roots), std::move(mechs));
}

DiscreteModel build_scenario2(std::uint64_t cpt_seed) {
    Dag dag({{"A", true}, {"X1", true}, {"Y", true}, {"X2", true}},
            {{"A", "Y"}, {"A", "X1"}, {"Y", "X2"}});
    std::mt19937_64 rng(cpt_seed);
    std::mt19937_64* r = cpt_seed ? &rng : nullptr;
    std::vector<std::vector<std::vector<double>>> cpts = {
        cpt_rows(r, 1, binary_rows({0.5})),        // A
        cpt_rows(r, 2, binary_rows({0.7, 0.2})),   // X1 | A
        cpt_rows(r, 2, binary_rows({0.3, 0.6})),   // Y | A
        cpt_rows(r, 2, binary_rows({0.2, 0.8})),   // X2 | Y
    };
    return DiscreteModel(std::move(dag), {kBinary, kBinary, kBinary, kBinary},
                         std::move(cpts));
}

DiscreteModel build_scenario2b(std::uint64_t cpt_seed) {
    Dag dag({{"A", true}, {"X1", true}, {"U", false}, {"X2", true}, {"Y", true}},
            {{"A", "U"}, {"A", "X1"}, {"U", "X2"}, {"U", "Y"}});
    std::mt19937_64 rng(cpt_seed);
    std::mt19937_64* r = cpt_seed ? &rng : nullptr;
    std::vector<std::vector<std::vector<double>>> cpts = {
        cpt_rows(r, 1, binary_rows({0.5})),          // A
        cpt_rows(r, 2, binary_rows({0.7, 0.2})),     // X1 | A
        cpt_rows(r, 2, binary_rows({0.2, 0.8})),     // U | A
        cpt_rows(r, 2, binary_rows({0.15, 0.85})),   // X2 | U
        cpt_rows(r, 2, binary_rows({0.25, 0.8})),    // Y | U
    };
    return DiscreteModel(std::move(dag),
                         {kBinary, kBinary, kBinary, kBinary, kBinary}, std::move(cpts));
}

DiscreteModel build_scenario3(const std::vector<std::string>& r_parents,
                              std::uint64_t cpt_seed) {
    std::vector<std::pair<std::string, bool>> nodes = {
        {"A", true}, {"X1", true}, {"X2", true}, {"Y", true}};
    std::vector<std::pair<std::string, std::string>> edges = {
        {"A", "X1"}, {"X1", "X2"}, {"X1", "Y"}, {"X2", "Y"}};
    for (const std::string& par : r_parents)
        if (par != "X1" && par != "X2")
            throw ParamError("scenario 3 prediction may depend on X1 and X2 only");
    if (!r_parents.empty()) {
        nodes.emplace_back("R", true);
        for (const std::string& par : r_parents) edges.emplace_back(par, "R");
    }

    std::mt19937_64 rng(cpt_seed);
    std::mt19937_64* r = cpt_seed ? &rng : nullptr;
    std::vector<std::vector<std::vector<double>>> cpts = {
        cpt_rows(r, 1, binary_rows({0.5})),                      // A
        cpt_rows(r, 2, binary_rows({0.3, 0.7})),                 // X1 | A
        cpt_rows(r, 2, binary_rows({0.2, 0.8})),                 // X2 | X1
        cpt_rows(r, 4, binary_rows({0.1, 0.4, 0.5, 0.9})),       // Y | X1, X2
    };
    std::vector<std::vector<std::string>> domains(4, kBinary);
    if (!r_parents.empty()) {
        domains.push_back(kBinary);
        std::size_t rows = std::size_t{1} << r_parents.size();
        cpts.push_back(cpt_rows(
            r, rows,
            rows == 2 ? binary_rows({0.2, 0.9}) : binary_rows({0.1, 0.6, 0.4, 0.9})));
    }
    return DiscreteModel(Dag(std::move(nodes), edges), std::move(domains),
                         std::move(cpts));
}

DiscreteModel build_scenario4(const std::vector<std::string>& r_parents,
                              std::uint64_t cpt_seed) {
    std::vector<std::pair<std::string, bool>> nodes = {
        {"U", false}, {"A", true}, {"Y", true}, {"X", true}};
    std::vector<std::pair<std::string, std::string>> edges = {
        {"U", "A"}, {"U", "Y"}, {"U", "X"}};
    for (const std::string& par : r_parents)
        if (par != "X" && par != "A")
            throw ParamError("scenario 4 prediction may depend on X and A only");
    if (!r_parents.empty()) {
        nodes.emplace_back("R", true);
        for (const std::string& par : r_parents) edges.emplace_back(par, "R");
    }

    std::mt19937_64 rng(cpt_seed);
    std::mt19937_64* r = cpt_seed ? &rng : nullptr;
    std::vector<std::vector<std::vector<double>>> cpts = {
        cpt_rows(r, 1, binary_rows({0.4})),          // U
        cpt_rows(r, 2, binary_rows({0.3, 0.7})),     // A | U
        cpt_rows(r, 2, binary_rows({0.2, 0.8})),     // Y | U
        cpt_rows(r, 2, binary_rows({0.25, 0.75})),   // X | U
    };
    std::vector<std::vector<std::string>> domains(4, kBinary);
    if (!r_parents.empty()) {
        domains.push_back(kBinary);
        std::size_t rows = std::size_t{1} << r_parents.size();
        cpts.push_back(cpt_rows(
            r, rows,
            rows == 2 ? binary_rows({0.15, 0.85}) : binary_rows({0.1, 0.6, 0.4, 0.9})));
    }
    return DiscreteModel(Dag(std::move(nodes), edges), std::move(domains),
                         std::move(cpts));
}

void apply_scenario1_predictors(Dataset& data, const Scenario1Params& p,
                                std::uint64_t seed) {
    check_scenario1(p);
    const Column& a = data.col("A");
    const Column& x2 = data.col("X2");
    const Column& x3 = data.col("X3");
    if (!a.categorical || x2.categorical || x3.categorical)
        throw ParamError("scenario 1 dataset has unexpected column types");

    double sigma2_eff = scenario1_effective_sigma2(p);
    double c = scenario1_noise_ceiling(p);
    std::vector<double> rho(p.groups.size());
    for (std::size_t g = 0; g < p.groups.size(); ++g) rho[g] = scenario1_rho(p, g);

    std::size_t n = data.rows;
    std::vector<double> naive(n), demeaned(n), enforced(n), signal(n), theta(n);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t g = static_cast<std::size_t>(a.codes[i]);
        double v2 = x2.real[i];
        theta[i] = p.beta * v2;
        naive[i] = p.beta * v2;
        signal[i] = p.beta * v2;
        demeaned[i] = p.beta * (v2 - p.mu[g]) + p.x3_slope * x3.real[i];
        double z_var = (c - 1.0 / rho[g]) * sigma2_eff;
        double z = z_var > 0.0 ? std::sqrt(z_var) * gauss(rng) : 0.0;
        enforced[i] = p.beta * (v2 - (1.0 - rho[g]) * p.mu[g]) / rho[g] + z;
    }
    data.add_real("theta", std::move(theta));
    data.add_real("R_naive", std::move(naive));
    data.add_real("R_signal", std::move(signal));
    data.add_real("R_demeaned", std::move(demeaned));
    data.add_real("R_separation", std::move(enforced));
}

GaussianLinearModel scenario1_with_separation_predictor(const Scenario1Params& p) {
    check_scenario1(p);
    if (p.biased_ratings)
        throw ParamError("separation predictor model uses the unbiased scenario");
    Dag dag({{"A", true}, {"X1", true}, {"X2", true}, {"X3", true}, {"Y", true},
             {"R", true}},
            {{"A", "X1"}, {"A", "X2"}, {"X2", "Y"}, {"X3", "Y"}, {"A", "R"},
             {"X2", "R"}});
    NodeId a = 0, x1 = 1, x2 = 2, x3 = 3, y = 4, rr = 5;
    std::map<NodeId, DiscreteRoot> roots = {{a, {p.groups, p.group_probs}}};
    std::map<NodeId, std::map<std::string, Mechanism>> mechs;
    double sigma2_eff = scenario1_effective_sigma2(p);
    double c = scenario1_noise_ceiling(p);
    for (std::size_t g = 0; g < p.groups.size(); ++g) {
        double rho = scenario1_rho(p, g);
        mechs[x1][p.groups[g]] = {p.x1_shift[g], {}, p.x1_variance};
        mechs[x2][p.groups[g]] = {p.mu[g], {}, p.sigma2[g]};
        mechs[rr][p.groups[g]] = {-p.beta * (1.0 - rho) * p.mu[g] / rho,
                                  {{x2, p.beta / rho}},
                                  (c - 1.0 / rho) * sigma2_eff};
    }
    mechs[x3][""] = {p.x3_mean, {}, p.x3_variance};
    mechs[y][""] = {0.0, {{x2, p.beta}, {x3, p.x3_slope}}, p.y_noise_variance};
    return GaussianLinearModel(std::move(dag), std::move(roots), std::move(mechs));
}

GaussianLinearModel unfaithful_fixture(double v4_on_v2) {
    Dag dag({{"V1", true}, {"V2", true}, {"V3", true}, {"V4", true}},
            {{"V1", "V2"}, {"V1", "V3"}, {"V2", "V4"}, {"V3", "V4"}});
    std::map<NodeId, std::map<std::string, Mechanism>> mechs;
    mechs[0][""] = {0.0, {}, 1.0};
    mechs[1][""] = {0.0, {{0, 3.0}}, 1.0};
    mechs[2][""] = {0.0, {{0, 2.0}}, 1.0};
    mechs[3][""] = {0.0, {{1, v4_on_v2}, {2, 3.0}}, 1.0};
    return GaussianLinearModel(std::move(dag), {}, std::move(mechs));
}

namespace {

std::string format_number(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

std::string scenario1_figure_csv(const GaussianLinearModel& model,
                                 const Scenario1Params& p, std::uint64_t seed,
                                 std::size_t display_points) {
    Dataset shown = sample(model, display_points, seed);
    const Column& a = shown.col("A");
    const Column& x2 = shown.col("X2");
    const Column& y = shown.col("Y");

    std::ostringstream csv;
    csv << "x2,y,group,line_id,band_lo,band_hi\n";
    double lo = x2.real[0], hi = x2.real[0];
    for (std::size_t i = 0; i < shown.rows; ++i) {
        lo = std::min(lo, x2.real[i]);
        hi = std::max(hi, x2.real[i]);
        csv << format_number(x2.real[i]) << ',' << format_number(y.real[i]) << ','
            << p.groups[a.codes[i]] << ",,,\n";
    }

    double sigma2_eff = scenario1_effective_sigma2(p);
    double c = scenario1_noise_ceiling(p);
    const int kSteps = 50;
    for (int s = 0; s <= kSteps; ++s) {
        double x = lo + (hi - lo) * s / kSteps;
        double reg = p.beta * x + p.x3_slope * p.x3_mean;
        csv << format_number(x) << ',' << format_number(reg) << ",,regression,,\n";
    }
    for (std::size_t g = 0; g < p.groups.size(); ++g) {
        double rho = scenario1_rho(p, g);
        double z_sd = std::sqrt(std::max(0.0, (c - 1.0 / rho) * sigma2_eff));
        for (int s = 0; s <= kSteps; ++s) {
            double x = lo + (hi - lo) * s / kSteps;
            double pred = p.beta * (x - (1.0 - rho) * p.mu[g]) / rho;
            csv << format_number(x) << ',' << format_number(pred) << ','
                << p.groups[g] << ",pred_" << p.groups[g] << ',';
            if (z_sd > 0.0)
                csv << format_number(pred - 2.0 * z_sd) << ','
                    << format_number(pred + 2.0 * z_sd);
            else
                csv << ',';
            csv << '\n';
        }
    }
    return csv.str();
}

void add_copy_column(Dataset& data, const std::string& src, const std::string& dst) {
    const Column& col = data.col(src);
    data.add_categorical(dst, col.codes, col.labels);
}

}  // namespace

ScenarioEvaluation evaluate_scenario(const std::string& id, std::size_t n,
                                     std::uint64_t seed, double alpha,
                                     bool emit_figure, const Scenario1Params& p1) {
    if (n < 1000)
        throw ParamError("scenario evaluation needs n >= 1000");
    ScenarioEvaluation out;

    if (id == "1") {
        GaussianLinearModel model = build_scenario1(p1);
        Dataset data = sample(model, n, seed);
        apply_scenario1_predictors(data, p1, seed + 1);
        out.reports.emplace_back("R_naive",
                                 test_independence(data, "R_naive", "A", alpha));
        out.reports.emplace_back(
            "R_naive", test_cond_independence(data, "R_naive", "A", {"Y"}, alpha,
                                              Criterion::Separation));
        out.reports.emplace_back("R_demeaned",
                                 test_independence(data, "R_demeaned", "A", alpha));
        out.reports.emplace_back(
            "R_separation", test_cond_independence(data, "R_separation", "A", {"Y"},
                                                   alpha, Criterion::Separation));
        out.reports.emplace_back(
            "R_signal", test_cond_independence(data, "R_signal", "A", {"theta"}, alpha,
                                               Criterion::ParityBySignal));
        if (emit_figure)
            out.figure_csv = scenario1_figure_csv(model, p1, seed + 999, 200);
        return out;
    }
    if (id == "2" || id == "2b") {
        DiscreteModel model = id == "2" ? build_scenario2() : build_scenario2b();
        Dataset data = sample(model, n, seed);
        add_copy_column(data, "X2", "R2");
        out.reports.emplace_back("R2", test_independence(data, "R2", "A", alpha));
        out.reports.emplace_back(
            "R2", test_cond_independence(data, "R2", "A", {"Y"}, alpha,
                                         Criterion::Separation));
        for (auto& rep : exact_criteria(model, "A", "X2", "Y"))
            out.reports.emplace_back("X2_exact", rep);
        return out;
    }
    if (id == "3") {
        DiscreteModel mediated = build_scenario3({"X2"}, seed);
        DiscreteModel direct = build_scenario3({"X1", "X2"}, seed);
        NodeId r = mediated.dag().index_of("R");
        NodeId a = mediated.dag().index_of("A");
        NodeId x2 = mediated.dag().index_of("X2");
        out.reports.emplace_back("R(X2)", cde_equal(mediated, r, a, {x2}, 1e-9));
        out.reports.emplace_back("R(X1,X2)",
                                 cde_equal(direct, direct.dag().index_of("R"),
                                           direct.dag().index_of("A"),
                                           {direct.dag().index_of("X2")}, 1e-9));
        return out;
    }
    if (id == "4") {
        DiscreteModel model = build_scenario4({"X"}, seed);
        out.reports.emplace_back("R(X)",
                                 te_equal(model, model.dag().index_of("R"),
                                          model.dag().index_of("A"), 1e-9));
        return out;
    }
    throw ParamError("unknown scenario id: " + id);
}

}  // namespace fairdag
