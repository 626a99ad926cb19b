#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "fairdag/scenarios.hpp"

using namespace fairdag;

namespace {

std::set<std::pair<std::string, std::string>> edge_names(const Dag& dag) {
    std::set<std::pair<std::string, std::string>> out;
    for (const auto& [from, to] : dag.edges())
        out.insert({dag.name(from), dag.name(to)});
    return out;
}

const CriterionReport& report_for(const ScenarioEvaluation& ev,
                                  const std::string& label, Criterion c) {
    for (const auto& [name, rep] : ev.reports)
        if (name == label && rep.criterion == c) return rep;
    REQUIRE(false);
    return ev.reports.front().second;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream stream(text);
    std::string line;
    while (std::getline(stream, line)) {
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) fields.push_back(field);
        while (fields.size() < 6) fields.emplace_back();
        rows.push_back(std::move(fields));
    }
    return rows;
}

}  // namespace

TEST_CASE("scenario 1 structure") {
    GaussianLinearModel model = build_scenario1();
    CHECK(edge_names(model.dag()) ==
          std::set<std::pair<std::string, std::string>>{
              {"A", "X1"}, {"A", "X2"}, {"X2", "Y"}, {"X3", "Y"}});
    for (NodeId v = 0; v < model.dag().node_count(); ++v)
        CHECK(model.dag().observed(v));

    Scenario1Params biased;
    biased.biased_ratings = true;
    GaussianLinearModel bm = build_scenario1(biased);
    CHECK(edge_names(bm.dag()) ==
          std::set<std::pair<std::string, std::string>>{
              {"A", "X1"}, {"A", "X2"}, {"E2", "X2"}, {"E2", "Y"}, {"X3", "Y"}});
    CHECK_FALSE(bm.dag().observed(bm.dag().index_of("E2")));
    // The ratings no longer drive the response: Y is independent of X2
    // given the true driver E2 by construction.
    CHECK(bm.dag().d_separated(bm.dag().index_of("X2"), bm.dag().index_of("Y"),
                               {bm.dag().index_of("E2"), bm.dag().index_of("A")}));
}

TEST_CASE("discrete scenario structures") {
    CHECK(edge_names(build_scenario2().dag()) ==
          std::set<std::pair<std::string, std::string>>{
              {"A", "Y"}, {"A", "X1"}, {"Y", "X2"}});

    DiscreteModel s2b = build_scenario2b();
    CHECK(edge_names(s2b.dag()) ==
          std::set<std::pair<std::string, std::string>>{
              {"A", "U"}, {"A", "X1"}, {"U", "X2"}, {"U", "Y"}});
    CHECK_FALSE(s2b.dag().observed(s2b.dag().index_of("U")));

    CHECK(edge_names(build_scenario3().dag()) ==
          std::set<std::pair<std::string, std::string>>{
              {"A", "X1"}, {"X1", "X2"}, {"X1", "Y"}, {"X2", "Y"}});
    CHECK(edge_names(build_scenario3({"X1", "X2"}).dag()) ==
          std::set<std::pair<std::string, std::string>>{
              {"A", "X1"}, {"X1", "X2"}, {"X1", "Y"}, {"X2", "Y"},
              {"X1", "R"}, {"X2", "R"}});

    DiscreteModel s4 = build_scenario4({"X", "A"});
    CHECK(edge_names(s4.dag()) ==
          std::set<std::pair<std::string, std::string>>{
              {"U", "A"}, {"U", "Y"}, {"U", "X"}, {"X", "R"}, {"A", "R"}});
    CHECK_FALSE(s4.dag().observed(s4.dag().index_of("U")));

    CHECK_THROWS_AS(build_scenario3({"Y"}), ParamError);
    CHECK_THROWS_AS(build_scenario4({"U"}), ParamError);
}

TEST_CASE("random CPT draws are deterministic per seed and differ from fixed") {
    DiscreteModel fixed = build_scenario2();
    DiscreteModel drawn1 = build_scenario2(123);
    DiscreteModel drawn2 = build_scenario2(123);
    for (NodeId v = 0; v < fixed.dag().node_count(); ++v)
        CHECK(drawn1.cpt(v) == drawn2.cpt(v));
    CHECK(drawn1.cpt(0) != fixed.cpt(0));
}

TEST_CASE("signal-to-total variance ratios and the noise ceiling") {
    Scenario1Params p;
    CHECK(scenario1_effective_sigma2(p) == doctest::Approx(1.0));
    CHECK(scenario1_rho(p, 0) == doctest::Approx(0.8));
    CHECK(scenario1_rho(p, 1) == doctest::Approx(0.5));
    CHECK(scenario1_noise_ceiling(p) == doctest::Approx(2.0));

    Scenario1Params bad;
    bad.group_probs = {0.4, 0.4};
    CHECK_THROWS_AS(build_scenario1(bad), ParamError);
    bad = Scenario1Params{};
    bad.sigma2 = {4.0};
    CHECK_THROWS_AS(build_scenario1(bad), ParamError);
}

TEST_CASE("enforced predictor attains the group-independent law R | Y ~ N(y, c sigma^2)") {
    Scenario1Params p;
    GaussianLinearModel model = scenario1_with_separation_predictor(p);
    const Dag& dag = model.dag();
    NodeId r = dag.index_of("R"), y = dag.index_of("Y");
    double target_var = scenario1_noise_ceiling(p) * scenario1_effective_sigma2(p);
    for (double yv : {-1.0, 0.0, 2.5}) {
        for (const std::string& group : p.groups) {
            JointGaussian jg = joint_gaussian(model, {{0, group}});
            JointGaussian cond = conditional_gaussian(jg, {r}, {{y, yv}});
            CHECK(cond.mean[0] == doctest::Approx(yv).epsilon(1e-10));
            CHECK(cond.covariance[0][0] == doctest::Approx(target_var).epsilon(1e-10));
        }
    }
}

TEST_CASE("exactly the worst group's enforced predictor is noise-free") {
    // The group attaining c = max 1/rho needs no extra noise; every other
    // group does. With the defaults that is a1 (rho 1/2) versus a0 (rho 4/5).
    Scenario1Params p;
    double c = scenario1_noise_ceiling(p);
    int noise_free = 0;
    for (std::size_t g = 0; g < p.groups.size(); ++g) {
        double z_var = (c - 1.0 / scenario1_rho(p, g)) * scenario1_effective_sigma2(p);
        if (z_var == 0.0) ++noise_free;
    }
    CHECK(noise_free == 1);
    CHECK((c - 1.0 / scenario1_rho(p, 1)) == doctest::Approx(0.0));
}

TEST_CASE("homogeneous groups need no enforcement noise at all") {
    Scenario1Params p;
    p.mu = {1.0, 1.0};
    p.sigma2 = {2.0, 2.0};
    CHECK(scenario1_rho(p, 0) == doctest::Approx(scenario1_rho(p, 1)));
    double c = scenario1_noise_ceiling(p);
    for (std::size_t g = 0; g < 2; ++g)
        CHECK((c - 1.0 / scenario1_rho(p, g)) == doctest::Approx(0.0));
    GaussianLinearModel model = scenario1_with_separation_predictor(p);
    for (const std::string& group : p.groups) {
        JointGaussian jg = joint_gaussian(model, {{0, group}});
        JointGaussian cond = conditional_gaussian(jg, {model.dag().index_of("R")},
                                                  {{model.dag().index_of("Y"), 0.3}});
        CHECK(cond.mean[0] == doctest::Approx(0.3));
        CHECK(cond.covariance[0][0] ==
              doctest::Approx(c * scenario1_effective_sigma2(p)));
    }
}

TEST_CASE("evaluate scenario 1 verdict pattern") {
    ScenarioEvaluation ev = evaluate_scenario("1", 100000, 7);
    REQUIRE(ev.reports.size() == 5);
    CHECK(report_for(ev, "R_naive", Criterion::Independence).verdict ==
          Verdict::violated);
    CHECK(report_for(ev, "R_naive", Criterion::Separation).verdict ==
          Verdict::violated);
    CHECK(report_for(ev, "R_demeaned", Criterion::Independence).verdict ==
          Verdict::satisfied);
    CHECK(report_for(ev, "R_separation", Criterion::Separation).verdict ==
          Verdict::satisfied);
    CHECK(report_for(ev, "R_signal", Criterion::ParityBySignal).verdict ==
          Verdict::satisfied);
    CHECK_FALSE(ev.figure_csv.has_value());
}

TEST_CASE("evaluate scenarios 2 and 2b verdict patterns") {
    ScenarioEvaluation ev = evaluate_scenario("2", 100000, 7);
    CHECK(report_for(ev, "R2", Criterion::Independence).verdict == Verdict::violated);
    CHECK(report_for(ev, "R2", Criterion::Separation).verdict == Verdict::satisfied);
    CHECK(report_for(ev, "X2_exact", Criterion::Separation).verdict ==
          Verdict::satisfied);
    CHECK(report_for(ev, "X2_exact", Criterion::Independence).verdict ==
          Verdict::violated);

    // Replacing the direct A -> Y edge with an unobserved mediator U breaks
    // Separation for the same predictor.
    ScenarioEvaluation evb = evaluate_scenario("2b", 100000, 7);
    CHECK(report_for(evb, "R2", Criterion::Separation).verdict == Verdict::violated);
    CHECK(report_for(evb, "X2_exact", Criterion::Separation).verdict ==
          Verdict::violated);
}

TEST_CASE("evaluate scenarios 3 and 4 verdict patterns") {
    ScenarioEvaluation ev3 = evaluate_scenario("3", 100000, 7);
    CHECK(report_for(ev3, "R(X2)", Criterion::CDEEqual).verdict == Verdict::satisfied);
    CHECK(report_for(ev3, "R(X1,X2)", Criterion::CDEEqual).verdict ==
          Verdict::violated);

    ScenarioEvaluation ev4 = evaluate_scenario("4", 100000, 7);
    CHECK(report_for(ev4, "R(X)", Criterion::TEEqual).verdict == Verdict::satisfied);
}

TEST_CASE("evaluate scenario rejects bad arguments") {
    CHECK_THROWS_AS(evaluate_scenario("1", 999, 7), ParamError);
    CHECK_THROWS_AS(evaluate_scenario("5", 100000, 7), ParamError);
}

TEST_CASE("scenario 1 figure data") {
    ScenarioEvaluation ev = evaluate_scenario("1", 1000, 7, 0.01, true);
    REQUIRE(ev.figure_csv.has_value());
    auto rows = parse_csv(*ev.figure_csv);
    REQUIRE(rows.size() == 1 + 200 + 3 * 51);
    CHECK(rows[0] == std::vector<std::string>{"x2", "y", "group", "line_id",
                                              "band_lo", "band_hi"});

    int scatter = 0, regression = 0, pred_a0 = 0, pred_a1 = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        const std::string& line = row[3];
        if (line.empty()) {
            ++scatter;
            CHECK((row[2] == "a0" || row[2] == "a1"));
            CHECK(row[4].empty());
        } else if (line == "regression") {
            ++regression;
        } else if (line == "pred_a0") {
            ++pred_a0;
            // a0 carries enforcement noise: a band of width 4 z_sd.
            double width = std::stod(row[5]) - std::stod(row[4]);
            CHECK(width == doctest::Approx(4.0 * std::sqrt(0.75)));
            double mid = (std::stod(row[5]) + std::stod(row[4])) / 2.0;
            CHECK(mid == doctest::Approx(std::stod(row[1])));
        } else if (line == "pred_a1") {
            ++pred_a1;
            CHECK(row[4].empty());  // noise-free group: no band
            // rho = 1/2: the enforced prediction is 2 x2 - mu.
            CHECK(std::stod(row[1]) == doctest::Approx(2.0 * std::stod(row[0]) - 2.0));
        } else {
            FAIL("unexpected line_id: " << line);
        }
    }
    CHECK(scatter == 200);
    CHECK(regression == 51);
    CHECK(pred_a0 == 51);
    CHECK(pred_a1 == 51);

    // Byte-for-byte reproducible for a fixed seed.
    ScenarioEvaluation again = evaluate_scenario("1", 1000, 7, 0.01, true);
    CHECK(*again.figure_csv == *ev.figure_csv);
}
