#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairdag/dataset.hpp"
#include "fairdag/discrete.hpp"

namespace fairdag {

enum class Criterion {
    DemographicParity,
    Independence,
    EqualizedOdds,
    Separation,
    Calibration,
    CalibrationByGroup,
    PredictiveParity,
    Sufficiency,
    ParityBySignal,
    ParityByS,
    ConditionalIndependence,
    CDEEqual,
    TEEqual,
};

enum class Method { exact, empirical };
enum class Verdict { satisfied, violated, undecidable };

std::string to_string(Criterion c);
std::string to_string(Method m);
std::string to_string(Verdict v);

struct CriterionReport {
    Criterion criterion;
    Method method = Method::empirical;
    std::vector<std::pair<std::string, double>> gaps;
    double threshold = 0.0;
    std::optional<double> p_value;
    Verdict verdict = Verdict::undecidable;
    std::string note;
};

/// Binary-classification audit: Demographic Parity, Equalized Odds,
/// Predictive Parity and Calibration by Group from plug-in frequencies,
/// with proportion-test p-values. Empty cells downgrade the affected
/// criterion to undecidable.
std::vector<CriterionReport> audit_binary(const Dataset& data,
                                          const std::string& a_col,
                                          const std::string& r_col,
                                          const std::string& y_col,
                                          double alpha = 0.01);

/// Independence (R independent of A); G-test for categorical R,
/// Kruskal-Wallis for real R, with first-two-moment gaps reported alongside.
CriterionReport test_independence(const Dataset& data, const std::string& r_col,
                                  const std::string& a_col, double alpha = 0.01);

/// Conditional independence of R and A given the conditioning columns;
/// continuous conditioners are discretized into equal-frequency bins.
/// Per-stratum G statistics are summed; Kruskal-Wallis p-values are combined
/// via Fisher's method. `criterion` labels the caller's intent.
CriterionReport test_cond_independence(const Dataset& data, const std::string& r_col,
                                       const std::string& a_col,
                                       const std::vector<std::string>& cond_cols,
                                       double alpha = 0.01,
                                       Criterion criterion = Criterion::ConditionalIndependence,
                                       int bins = 10);

/// Exact verdicts on a discrete model for Independence, Separation,
/// Sufficiency, and Parity by S when `s` is given.
std::vector<CriterionReport> exact_criteria(const DiscreteModel& model,
                                            const std::string& a, const std::string& r,
                                            const std::string& y,
                                            const std::optional<std::string>& s = {},
                                            double tol = 1e-9,
                                            std::size_t size_cap = kDefaultSizeCap);

struct IncompatCounterexample {
    std::uint64_t trial = 0;
    std::size_t na = 0, nr = 0, ny = 0;
    std::vector<double> joint;  // index = (a * nr + r) * ny + y
    double dependence_gap = 0.0;
};

struct IncompatResult {
    std::optional<IncompatCounterexample> counterexample;
    std::uint64_t trials = 0;
    std::uint64_t accepted = 0;    // trials passing the positivity rejection
    std::uint64_t satisfying = 0;  // accepted tables meeting both criteria at tol
    double max_dependence_gap = 0.0;  // among satisfying tables
    double max_gap_to_bound_ratio = 0.0;
    double tol = 0.0;
    double dependence_threshold = 0.0;
};

/// Random search for a joint over (A, R, Y) satisfying Separation and
/// Sufficiency at tol while A and Y stay marginally dependent beyond the
/// threshold. Per-trial seeds are seed + trial, so the serial and parallel
/// paths return identical results.
IncompatResult incompatibility_search_serial(std::uint64_t trials, double tol,
                                             std::uint64_t seed,
                                             double dependence_threshold = 1e-3);

/// OpenMP-parallel version of the same search.
IncompatResult incompatibility_search(std::uint64_t trials, double tol,
                                      std::uint64_t seed,
                                      double dependence_threshold = 1e-3);

}  // namespace fairdag
