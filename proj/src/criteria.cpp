#include "fairdag/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "fairdag/stats.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fairdag {

std::string to_string(Criterion c) {
    switch (c) {
        case Criterion::DemographicParity: return "DemographicParity";
        case Criterion::Independence: return "Independence";
        case Criterion::EqualizedOdds: return "EqualizedOdds";
        case Criterion::Separation: return "Separation";
        case Criterion::Calibration: return "Calibration";
        case Criterion::CalibrationByGroup: return "CalibrationByGroup";
        case Criterion::PredictiveParity: return "PredictiveParity";
        case Criterion::Sufficiency: return "Sufficiency";
        case Criterion::ParityBySignal: return "ParityBySignal";
        case Criterion::ParityByS: return "ParityByS";
        case Criterion::ConditionalIndependence: return "ConditionalIndependence";
        case Criterion::CDEEqual: return "CDEEqual";
        case Criterion::TEEqual: return "TEEqual";
    }
    return "?";
}

std::string to_string(Method m) { return m == Method::exact ? "exact" : "empirical"; }

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::satisfied: return "satisfied";
        case Verdict::violated: return "violated";
        case Verdict::undecidable: return "undecidable";
    }
    return "?";
}

namespace {

std::vector<int> group_codes(const Column& col, std::size_t* n_groups) {
    if (!col.categorical)
        throw ParamError("sensitive column must be categorical");
    *n_groups = col.labels.size();
    return col.codes;
}

std::vector<int> binary_codes(const Column& col, const std::string& name) {
    std::vector<int> out;
    if (col.categorical) {
        if (col.labels.size() != 2)
            throw ParamError("column " + name + " must be binary");
        out = col.codes;
    } else {
        out.reserve(col.real.size());
        for (double v : col.real) {
            if (v != 0.0 && v != 1.0)
                throw ParamError("column " + name + " must be binary (0/1)");
            out.push_back(v == 1.0 ? 1 : 0);
        }
    }
    return out;
}

/// Residuals of values[rows] after a pooled least-squares fit on the listed
/// regressors (plus intercept) restricted to `rows`. Near-singular directions
/// are dropped, so constant regressors degrade to plain centering.
std::vector<double> detrended(const std::vector<double>& values,
                              const std::vector<const std::vector<double>*>& regressors,
                              const std::vector<std::size_t>& rows) {
    std::size_t k = regressors.size() + 1;
    std::vector<std::vector<double>> xtx(k, std::vector<double>(k, 0.0));
    std::vector<double> xty(k, 0.0);
    auto feat = [&](std::size_t j, std::size_t i) {
        return j == 0 ? 1.0 : (*regressors[j - 1])[i];
    };
    for (std::size_t i : rows) {
        for (std::size_t p = 0; p < k; ++p) {
            xty[p] += feat(p, i) * values[i];
            for (std::size_t q = 0; q < k; ++q) xtx[p][q] += feat(p, i) * feat(q, i);
        }
    }
    std::vector<double> diag(k);
    for (std::size_t p = 0; p < k; ++p) diag[p] = xtx[p][p];
    std::vector<double> beta(k, 0.0);
    // Gauss-Jordan with partial pivoting; tiny pivots drop the column.
    for (std::size_t p = 0; p < k; ++p) {
        std::size_t best = p;
        for (std::size_t q = p + 1; q < k; ++q)
            if (std::abs(xtx[q][p]) > std::abs(xtx[best][p])) best = q;
        std::swap(xtx[p], xtx[best]);
        std::swap(xty[p], xty[best]);
        if (std::abs(xtx[p][p]) <= 1e-12 * (diag[p] + 1.0)) {
            xtx[p][p] = 1.0;
            for (std::size_t q = 0; q < k; ++q)
                if (q != p) xtx[p][q] = 0.0;
            xty[p] = 0.0;
            continue;
        }
        for (std::size_t q = 0; q < k; ++q) {
            if (q == p) continue;
            double f = xtx[q][p] / xtx[p][p];
            for (std::size_t c = 0; c < k; ++c) xtx[q][c] -= f * xtx[p][c];
            xty[q] -= f * xty[p];
        }
    }
    for (std::size_t p = 0; p < k; ++p) beta[p] = xty[p] / xtx[p][p];

    std::vector<double> resid;
    resid.reserve(rows.size());
    for (std::size_t i : rows) {
        double fit = 0.0;
        for (std::size_t p = 0; p < k; ++p) fit += beta[p] * feat(p, i);
        resid.push_back(values[i] - fit);
    }
    return resid;
}

Verdict by_p(double p, double alpha) {
    return p >= alpha ? Verdict::satisfied : Verdict::violated;
}

double max_pairwise_gap(const std::vector<double>& rates, std::size_t* lo,
                        std::size_t* hi) {
    double best = 0.0;
    *lo = *hi = 0;
    for (std::size_t i = 0; i < rates.size(); ++i)
        for (std::size_t j = i + 1; j < rates.size(); ++j) {
            double g = std::abs(rates[i] - rates[j]);
            if (g >= best) {
                best = g;
                *lo = i;
                *hi = j;
            }
        }
    return best;
}

}  // namespace

std::vector<CriterionReport> audit_binary(const Dataset& data, const std::string& a_col,
                                          const std::string& r_col,
                                          const std::string& y_col, double alpha) {
    std::size_t ng = 0;
    std::vector<int> a = group_codes(data.col(a_col), &ng);
    std::vector<int> r = binary_codes(data.col(r_col), r_col);
    std::vector<int> y = binary_codes(data.col(y_col), y_col);
    if (ng < 2)
        throw EmptyGroupError("sensitive column has fewer than two levels");

    // cells[g][y][r]
    std::vector<std::array<std::array<double, 2>, 2>> cells(
        ng, {{{0.0, 0.0}, {0.0, 0.0}}});
    for (std::size_t i = 0; i < data.rows; ++i)
        cells[a[i]][y[i]][r[i]] += 1.0;

    std::vector<double> n(ng, 0.0);
    std::vector<std::array<double, 2>> n_y(ng, {0.0, 0.0}), n_r(ng, {0.0, 0.0});
    for (std::size_t g = 0; g < ng; ++g)
        for (int yy = 0; yy < 2; ++yy)
            for (int rr = 0; rr < 2; ++rr) {
                n[g] += cells[g][yy][rr];
                n_y[g][yy] += cells[g][yy][rr];
                n_r[g][rr] += cells[g][yy][rr];
            }
    for (std::size_t g = 0; g < ng; ++g)
        if (n[g] == 0.0)
            throw EmptyGroupError("group with zero rows in audit");

    std::vector<CriterionReport> out;

    {  // Demographic Parity
        CriterionReport rep;
        rep.criterion = Criterion::DemographicParity;
        rep.threshold = alpha;
        std::vector<double> rate(ng);
        for (std::size_t g = 0; g < ng; ++g)
            rate[g] = (cells[g][0][1] + cells[g][1][1]) / n[g];
        std::size_t lo, hi;
        double gap = max_pairwise_gap(rate, &lo, &hi);
        rep.gaps = {{"rate_gap", gap}};
        rep.p_value = stats::two_proportion_p(rate[lo] * n[lo], n[lo], rate[hi] * n[hi], n[hi]);
        rep.verdict = by_p(*rep.p_value, alpha);
        out.push_back(std::move(rep));
    }

    {  // Equalized Odds
        CriterionReport rep;
        rep.criterion = Criterion::EqualizedOdds;
        rep.threshold = alpha;
        bool empty = false;
        std::vector<double> pvals;
        const char* names[2] = {"fpr_gap", "tpr_gap"};
        for (int yy = 0; yy < 2; ++yy) {
            std::vector<double> rate(ng, 0.0);
            for (std::size_t g = 0; g < ng; ++g) {
                if (n_y[g][yy] == 0.0) {
                    empty = true;
                    break;
                }
                rate[g] = cells[g][yy][1] / n_y[g][yy];
            }
            if (empty) break;
            std::size_t lo, hi;
            rep.gaps.emplace_back(names[yy], max_pairwise_gap(rate, &lo, &hi));
            pvals.push_back(stats::two_proportion_p(cells[lo][yy][1], n_y[lo][yy],
                                                    cells[hi][yy][1], n_y[hi][yy]));
        }
        if (empty) {
            rep.verdict = Verdict::undecidable;
            rep.note = "empty (a, y) cell";
            rep.gaps.clear();
        } else {
            rep.p_value = stats::fisher_combine(pvals);
            rep.verdict = by_p(*rep.p_value, alpha);
        }
        out.push_back(std::move(rep));
    }

    {  // Predictive Parity
        CriterionReport rep;
        rep.criterion = Criterion::PredictiveParity;
        rep.threshold = alpha;
        bool empty = false;
        std::vector<double> pvals;
        const char* names[2] = {"y1_given_r0_gap", "y1_given_r1_gap"};
        for (int rr = 0; rr < 2; ++rr) {
            std::vector<double> rate(ng, 0.0);
            for (std::size_t g = 0; g < ng; ++g) {
                if (n_r[g][rr] == 0.0) {
                    empty = true;
                    break;
                }
                rate[g] = cells[g][1][rr] / n_r[g][rr];
            }
            if (empty) break;
            std::size_t lo, hi;
            rep.gaps.emplace_back(names[rr], max_pairwise_gap(rate, &lo, &hi));
            pvals.push_back(stats::two_proportion_p(cells[lo][1][rr], n_r[lo][rr],
                                                    cells[hi][1][rr], n_r[hi][rr]));
        }
        if (empty) {
            rep.verdict = Verdict::undecidable;
            rep.note = "empty (a, r) cell";
            rep.gaps.clear();
        } else {
            rep.p_value = stats::fisher_combine(pvals);
            rep.verdict = by_p(*rep.p_value, alpha);
        }
        out.push_back(std::move(rep));
    }

    {  // Calibration by Group (R plays the predicted probability, values 0/1)
        CriterionReport rep;
        rep.criterion = Criterion::CalibrationByGroup;
        rep.threshold = alpha;
        bool empty = false;
        std::vector<double> pvals;
        const char* names[2] = {"cal_r0_gap", "cal_r1_gap"};
        for (int rr = 0; rr < 2 && !empty; ++rr) {
            double worst = 0.0;
            for (std::size_t g = 0; g < ng; ++g) {
                if (n_r[g][rr] == 0.0) {
                    empty = true;
                    break;
                }
                double phat = cells[g][1][rr] / n_r[g][rr];
                worst = std::max(worst, std::abs(phat - static_cast<double>(rr)));
                pvals.push_back(stats::one_proportion_p(cells[g][1][rr], n_r[g][rr],
                                                        static_cast<double>(rr)));
            }
            if (!empty) rep.gaps.emplace_back(names[rr], worst);
        }
        if (empty) {
            rep.verdict = Verdict::undecidable;
            rep.note = "empty (a, r) cell";
            rep.gaps.clear();
        } else {
            rep.p_value = stats::fisher_combine(pvals);
            rep.verdict = by_p(*rep.p_value, alpha);
        }
        out.push_back(std::move(rep));
    }
    return out;
}

CriterionReport test_independence(const Dataset& data, const std::string& r_col,
                                  const std::string& a_col, double alpha) {
    std::size_t ng = 0;
    std::vector<int> a = group_codes(data.col(a_col), &ng);
    if (ng < 2)
        throw EmptyGroupError("sensitive column has fewer than two levels");
    const Column& r = data.col(r_col);

    CriterionReport rep;
    rep.criterion = Criterion::Independence;
    rep.threshold = alpha;

    if (r.categorical) {
        std::vector<std::vector<double>> counts(ng, std::vector<double>(r.labels.size(), 0.0));
        for (std::size_t i = 0; i < data.rows; ++i) counts[a[i]][r.codes[i]] += 1.0;
        std::vector<double> row(ng, 0.0);
        for (std::size_t g = 0; g < ng; ++g)
            for (double c : counts[g]) row[g] += c;
        double worst = 0.0;
        for (std::size_t k = 0; k < r.labels.size(); ++k) {
            std::vector<double> rate(ng, 0.0);
            for (std::size_t g = 0; g < ng; ++g)
                if (row[g] > 0.0) rate[g] = counts[g][k] / row[g];
            std::size_t lo, hi;
            worst = std::max(worst, max_pairwise_gap(rate, &lo, &hi));
        }
        rep.gaps.emplace_back("max_rate_gap", worst);
        auto g = stats::g_test(counts);
        rep.p_value = g.dof > 0.0 ? stats::chi2_sf(g.stat, g.dof) : 1.0;
    } else {
        bool constant = std::all_of(r.real.begin(), r.real.end(),
                                    [&](double v) { return v == r.real.front(); });
        std::vector<std::vector<double>> groups(ng);
        for (std::size_t i = 0; i < data.rows; ++i) groups[a[i]].push_back(r.real[i]);
        std::vector<double> mean(ng, 0.0), sd(ng, 0.0);
        for (std::size_t g = 0; g < ng; ++g) {
            if (groups[g].empty())
                throw EmptyGroupError("group with zero rows in independence test");
            for (double v : groups[g]) mean[g] += v;
            mean[g] /= static_cast<double>(groups[g].size());
            for (double v : groups[g]) sd[g] += (v - mean[g]) * (v - mean[g]);
            sd[g] = std::sqrt(sd[g] / static_cast<double>(groups[g].size()));
        }
        std::size_t lo, hi;
        rep.gaps.emplace_back("mean_gap", max_pairwise_gap(mean, &lo, &hi));
        rep.gaps.emplace_back("sd_gap", max_pairwise_gap(sd, &lo, &hi));
        if (constant) {
            rep.p_value = 1.0;
        } else {
            auto kw = stats::kruskal_wallis(groups);
            rep.p_value = kw.dof > 0.0 ? stats::chi2_sf(kw.stat, kw.dof) : 1.0;
        }
    }
    rep.verdict = by_p(*rep.p_value, alpha);
    return rep;
}

CriterionReport test_cond_independence(const Dataset& data, const std::string& r_col,
                                       const std::string& a_col,
                                       const std::vector<std::string>& cond_cols,
                                       double alpha, Criterion criterion, int bins) {
    if (cond_cols.empty())
        throw ParamError("conditioning columns must be nonempty");
    std::size_t ng = 0;
    std::vector<int> a = group_codes(data.col(a_col), &ng);
    if (ng < 2)
        throw EmptyGroupError("sensitive column has fewer than two levels");
    const Column& r = data.col(r_col);

    // Stratum key per row from categorical values and equal-frequency bins.
    std::vector<std::vector<int>> keys(cond_cols.size());
    std::vector<const std::vector<double>*> cont_conds;
    for (std::size_t c = 0; c < cond_cols.size(); ++c) {
        const Column& col = data.col(cond_cols[c]);
        if (col.categorical) {
            keys[c] = col.codes;
        } else {
            keys[c] = stats::equal_frequency_bins(col.real, bins);
            cont_conds.push_back(&col.real);
        }
    }
    std::map<std::vector<int>, std::vector<std::size_t>> strata;
    std::vector<int> key(cond_cols.size());
    for (std::size_t i = 0; i < data.rows; ++i) {
        for (std::size_t c = 0; c < cond_cols.size(); ++c) key[c] = keys[c][i];
        strata[key].push_back(i);
    }

    CriterionReport rep;
    rep.criterion = criterion;
    rep.threshold = alpha;

    double g_stat = 0.0, g_dof = 0.0;
    std::vector<double> pvals;
    std::size_t used = 0;
    constexpr std::size_t kMinStratum = 10;
    for (auto& [k, rows] : strata) {
        if (rows.size() < kMinStratum) continue;
        std::size_t distinct = 0;
        {
            std::vector<bool> seen(ng, false);
            for (std::size_t i : rows)
                if (!seen[a[i]]) {
                    seen[a[i]] = true;
                    ++distinct;
                }
        }
        if (distinct < 2) continue;
        if (r.categorical) {
            std::vector<std::vector<double>> counts(ng,
                                                    std::vector<double>(r.labels.size(), 0.0));
            for (std::size_t i : rows) counts[a[i]][r.codes[i]] += 1.0;
            auto g = stats::g_test(counts);
            if (g.dof <= 0.0) continue;
            g_stat += g.stat;
            g_dof += g.dof;
        } else {
            // Binning a continuous conditioner leaves a within-stratum trend
            // that differs across groups in their conditioner distributions;
            // remove the pooled linear trend before comparing groups so a
            // prediction truly independent of A given the conditioners is not
            // rejected for the bin width. Group-specific offsets survive the
            // pooled fit, so genuine violations still register.
            std::vector<double> resid = detrended(r.real, cont_conds, rows);
            double scale = 0.0, resid_ss = 0.0;
            for (std::size_t k2 = 0; k2 < rows.size(); ++k2) {
                scale = std::max(scale, std::abs(r.real[rows[k2]]));
                resid_ss += resid[k2] * resid[k2];
            }
            if (resid_ss <= rows.size() * 1e-16 * (scale * scale + 1.0)) {
                pvals.push_back(1.0);  // deterministic in the conditioners
            } else {
                std::vector<std::vector<double>> groups(ng);
                for (std::size_t k2 = 0; k2 < rows.size(); ++k2)
                    groups[a[rows[k2]]].push_back(resid[k2]);
                auto kw = stats::kruskal_wallis(groups);
                if (kw.dof <= 0.0) continue;
                pvals.push_back(stats::chi2_sf(kw.stat, kw.dof));
            }
        }
        ++used;
    }

    rep.gaps.emplace_back("strata_used", static_cast<double>(used));
    if (r.categorical ? g_dof <= 0.0 : pvals.empty()) {
        bool constant_r =
            !r.categorical && !r.real.empty() &&
            std::all_of(r.real.begin(), r.real.end(),
                        [&](double v) { return v == r.real.front(); });
        bool constant_cat =
            r.categorical && !r.codes.empty() &&
            std::all_of(r.codes.begin(), r.codes.end(),
                        [&](int v) { return v == r.codes.front(); });
        if (constant_r || constant_cat) {
            rep.p_value = 1.0;
            rep.verdict = Verdict::satisfied;
            rep.note = "constant prediction";
        } else {
            rep.verdict = Verdict::undecidable;
            rep.note = "insufficient strata";
        }
        return rep;
    }
    if (r.categorical) {
        rep.gaps.emplace_back("g_stat", g_stat);
        rep.p_value = stats::chi2_sf(g_stat, g_dof);
    } else {
        rep.p_value = stats::fisher_combine(pvals);
    }
    rep.verdict = by_p(*rep.p_value, alpha);
    return rep;
}

std::vector<CriterionReport> exact_criteria(const DiscreteModel& model,
                                            const std::string& a, const std::string& r,
                                            const std::string& y,
                                            const std::optional<std::string>& s,
                                            double tol, std::size_t size_cap) {
    const Dag& dag = model.dag();
    NodeId av = dag.index_of(a), rv = dag.index_of(r), yv = dag.index_of(y);

    auto make = [&](Criterion c, NodeId x1, NodeId x2, std::vector<NodeId> cond) {
        CriterionReport rep;
        rep.criterion = c;
        rep.method = Method::exact;
        rep.threshold = tol;
        double gap = ci_gap(model, x1, x2, cond, size_cap);
        rep.gaps.emplace_back("max_cell_gap", gap);
        rep.verdict = gap <= tol ? Verdict::satisfied : Verdict::violated;
        return rep;
    };

    std::vector<CriterionReport> out;
    out.push_back(make(Criterion::Independence, rv, av, {}));
    out.push_back(make(Criterion::Separation, rv, av, {yv}));
    out.push_back(make(Criterion::Sufficiency, yv, av, {rv}));
    if (s) {
        NodeId sv = dag.index_of(*s);
        out.push_back(make(Criterion::ParityByS, rv, av, {sv}));
    }
    return out;
}

namespace {

struct TrialOutcome {
    bool accepted = false;
    bool satisfying = false;
    double dep_gap = 0.0;
    double bound = 0.0;
    std::size_t na = 0, nr = 0, ny = 0;
    std::vector<double> joint;
};

TrialOutcome incompat_trial(std::uint64_t trial_seed, double tol) {
    std::mt19937_64 rng(trial_seed);
    std::uniform_int_distribution<std::size_t> dim(2, 3);
    TrialOutcome t;
    t.na = dim(rng);
    t.nr = dim(rng);
    t.ny = dim(rng);
    std::size_t cells = t.na * t.nr * t.ny;
    t.joint.resize(cells);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double total = 0.0;
    for (double& c : t.joint) {
        c = -std::log(1.0 - unif(rng));  // Dirichlet(1) via normalized Exp(1)
        total += c;
    }
    for (double& c : t.joint) {
        c /= total;
        if (c < 10.0 * tol) return t;  // positivity rejection
    }
    t.accepted = true;

    auto p = [&](std::size_t a, std::size_t r, std::size_t y) {
        return t.joint[(a * t.nr + r) * t.ny + y];
    };

    // Separation: cell gaps of P(A,R | y) against its marginal product.
    double sep_gap = 0.0;
    for (std::size_t y = 0; y < t.ny; ++y) {
        double mass = 0.0;
        for (std::size_t a = 0; a < t.na; ++a)
            for (std::size_t r = 0; r < t.nr; ++r) mass += p(a, r, y);
        for (std::size_t a = 0; a < t.na; ++a)
            for (std::size_t r = 0; r < t.nr; ++r) {
                double pa = 0.0, pr = 0.0;
                for (std::size_t rr = 0; rr < t.nr; ++rr) pa += p(a, rr, y);
                for (std::size_t aa = 0; aa < t.na; ++aa) pr += p(aa, r, y);
                sep_gap = std::max(
                    sep_gap, std::abs(p(a, r, y) / mass - (pa / mass) * (pr / mass)));
            }
    }
    // Sufficiency: same with roles of R and Y swapped (Y vs A given r).
    double suf_gap = 0.0;
    for (std::size_t r = 0; r < t.nr; ++r) {
        double mass = 0.0;
        for (std::size_t a = 0; a < t.na; ++a)
            for (std::size_t y = 0; y < t.ny; ++y) mass += p(a, r, y);
        for (std::size_t a = 0; a < t.na; ++a)
            for (std::size_t y = 0; y < t.ny; ++y) {
                double pa = 0.0, py = 0.0;
                for (std::size_t yy = 0; yy < t.ny; ++yy) pa += p(a, r, yy);
                for (std::size_t aa = 0; aa < t.na; ++aa) py += p(aa, r, y);
                suf_gap = std::max(
                    suf_gap, std::abs(p(a, r, y) / mass - (pa / mass) * (py / mass)));
            }
    }
    if (sep_gap > tol || suf_gap > tol) return t;
    t.satisfying = true;

    std::vector<double> pa(t.na, 0.0), py(t.ny, 0.0), pr(t.nr, 0.0);
    std::vector<double> pay(t.na * t.ny, 0.0);
    std::vector<double> pry(t.nr * t.ny, 0.0);
    for (std::size_t a = 0; a < t.na; ++a)
        for (std::size_t r = 0; r < t.nr; ++r)
            for (std::size_t y = 0; y < t.ny; ++y) {
                double v = p(a, r, y);
                pa[a] += v;
                pr[r] += v;
                py[y] += v;
                pay[a * t.ny + y] += v;
                pry[r * t.ny + y] += v;
            }
    for (std::size_t a = 0; a < t.na; ++a)
        for (std::size_t y = 0; y < t.ny; ++y)
            t.dep_gap = std::max(t.dep_gap, std::abs(pay[a * t.ny + y] - pa[a] * py[y]));

    // Analytic consequence of near-Separation plus near-Sufficiency:
    // |P(a,y) - P(a)P(y)| <= 2 tol max_y (1/P(r0|y) + 1/P(y|r0)), any r0.
    double bound = std::numeric_limits<double>::infinity();
    for (std::size_t r0 = 0; r0 < t.nr; ++r0) {
        double worst = 0.0;
        for (std::size_t y = 0; y < t.ny; ++y) {
            double pr_given_y = pry[r0 * t.ny + y] / py[y];
            double py_given_r = pry[r0 * t.ny + y] / pr[r0];
            worst = std::max(worst, 1.0 / pr_given_y + 1.0 / py_given_r);
        }
        bound = std::min(bound, 2.0 * tol * worst);
    }
    t.bound = bound;
    return t;
}

void fold_outcome(IncompatResult& res, const TrialOutcome& t, std::uint64_t trial) {
    if (!t.accepted) return;
    ++res.accepted;
    if (!t.satisfying) return;
    ++res.satisfying;
    res.max_dependence_gap = std::max(res.max_dependence_gap, t.dep_gap);
    if (t.bound > 0.0)
        res.max_gap_to_bound_ratio =
            std::max(res.max_gap_to_bound_ratio, t.dep_gap / t.bound);
    if (t.dep_gap > res.dependence_threshold) {
        if (!res.counterexample || trial < res.counterexample->trial) {
            IncompatCounterexample ce;
            ce.trial = trial;
            ce.na = t.na;
            ce.nr = t.nr;
            ce.ny = t.ny;
            ce.joint = t.joint;
            ce.dependence_gap = t.dep_gap;
            res.counterexample = std::move(ce);
        }
    }
}

}  // namespace

IncompatResult incompatibility_search_serial(std::uint64_t trials, double tol,
                                             std::uint64_t seed,
                                             double dependence_threshold) {
    IncompatResult res;
    res.trials = trials;
    res.tol = tol;
    res.dependence_threshold = dependence_threshold;
    for (std::uint64_t i = 0; i < trials; ++i)
        fold_outcome(res, incompat_trial(seed + i, tol), i);
    return res;
}

IncompatResult incompatibility_search(std::uint64_t trials, double tol,
                                      std::uint64_t seed, double dependence_threshold) {
#ifndef _OPENMP
    return incompatibility_search_serial(trials, tol, seed, dependence_threshold);
#else
    IncompatResult res;
    res.trials = trials;
    res.tol = tol;
    res.dependence_threshold = dependence_threshold;
#pragma omp parallel
    {
        IncompatResult local;
        local.dependence_threshold = dependence_threshold;
#pragma omp for schedule(static)
        for (long long i = 0; i < static_cast<long long>(trials); ++i)
            fold_outcome(local, incompat_trial(seed + static_cast<std::uint64_t>(i), tol),
                         static_cast<std::uint64_t>(i));
#pragma omp critical
        {
            res.accepted += local.accepted;
            res.satisfying += local.satisfying;
            res.max_dependence_gap =
                std::max(res.max_dependence_gap, local.max_dependence_gap);
            res.max_gap_to_bound_ratio =
                std::max(res.max_gap_to_bound_ratio, local.max_gap_to_bound_ratio);
            if (local.counterexample &&
                (!res.counterexample ||
                 local.counterexample->trial < res.counterexample->trial))
                res.counterexample = local.counterexample;
        }
    }
    return res;
#endif
}

}  // namespace fairdag
