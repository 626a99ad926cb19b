#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairdag/criteria.hpp"
#include "fairdag/discrete.hpp"
#include "fairdag/gaussian.hpp"

namespace fairdag {

/// Loan-repayment scenario parameters. The interest rate X3 feeds the
/// response with its own slope, so the conditional response variance is
/// sigma_eff^2 = y_noise_variance + x3_slope^2 * x3_variance; the closed
/// forms below (rho, c, the enforced predictor) use sigma_eff^2 throughout.
struct Scenario1Params {
    std::vector<std::string> groups = {"a0", "a1"};
    std::vector<double> group_probs = {0.5, 0.5};
    std::vector<double> mu = {0.0, 2.0};        // credit-rating mean per group
    std::vector<double> sigma2 = {4.0, 1.0};    // credit-rating variance per group
    double beta = 1.0;                          // repayment slope on X2
    double y_noise_variance = 0.75;             // exogenous response noise
    double x3_mean = 0.0;                       // interest-rate law
    double x3_variance = 1.0;
    double x3_slope = 0.5;
    std::vector<double> x1_shift = {0.0, 1.0};  // hair-color group shift
    double x1_variance = 1.0;
    bool biased_ratings = false;  // ratings = additive group shift on the true driver
};

double scenario1_effective_sigma2(const Scenario1Params& p);
double scenario1_rho(const Scenario1Params& p, std::size_t group);
double scenario1_noise_ceiling(const Scenario1Params& p);  // c = max 1/rho_a

GaussianLinearModel build_scenario1(const Scenario1Params& p = {});

DiscreteModel build_scenario2(std::uint64_t cpt_seed = 0);
DiscreteModel build_scenario2b(std::uint64_t cpt_seed = 0);
DiscreteModel build_scenario3(const std::vector<std::string>& r_parents = {},
                              std::uint64_t cpt_seed = 0);
DiscreteModel build_scenario4(const std::vector<std::string>& r_parents = {},
                              std::uint64_t cpt_seed = 0);

/// Appends the four Scenario-1 prediction columns (plus the signal column
/// "theta" = beta * X2) to a dataset sampled from build_scenario1:
/// R_naive, R_signal, R_demeaned, R_separation.
void apply_scenario1_predictors(Dataset& data, const Scenario1Params& p,
                                std::uint64_t seed);

/// Scenario 1 extended with the Separation-enforcing predictor R as a model
/// node (inputs A, X2 and the added noise Z), for closed-form verification.
GaussianLinearModel scenario1_with_separation_predictor(const Scenario1Params& p = {});

/// Path-cancellation fixture: V2 = 3 V1 + e2, V3 = 2 V1 + e3,
/// V4 = v4_on_v2 V2 + 3 V3 + e4.
/// At the default coefficient the V1 -> V4 path effects cancel exactly.
GaussianLinearModel unfaithful_fixture(double v4_on_v2 = -2.0);

struct ScenarioEvaluation {
    std::vector<std::pair<std::string, CriterionReport>> reports;
    std::optional<std::string> figure_csv;
};

ScenarioEvaluation evaluate_scenario(const std::string& id, std::size_t n,
                                     std::uint64_t seed, double alpha = 0.01,
                                     bool emit_figure = false,
                                     const Scenario1Params& p1 = {});

}  // namespace fairdag
