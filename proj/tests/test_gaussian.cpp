#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "fairdag/gaussian.hpp"
#include "fairdag/scenarios.hpp"

using namespace fairdag;

namespace {

std::size_t pos_of(const JointGaussian& jg, NodeId v) {
    auto it = std::find(jg.variables.begin(), jg.variables.end(), v);
    REQUIRE(it != jg.variables.end());
    return static_cast<std::size_t>(it - jg.variables.begin());
}

/// Cholesky of m + floor*I succeeds iff smallest eigenvalue >= -floor.
bool psd_within(const std::vector<std::vector<double>>& m, double floor) {
    std::size_t n = m.size();
    std::vector<std::vector<double>> a = m;
    for (std::size_t i = 0; i < n; ++i) a[i][i] += floor;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = a[i][j];
            for (std::size_t k = 0; k < j; ++k) sum -= a[i][k] * a[j][k];
            if (i == j) {
                if (sum < 0.0) return false;
                a[i][i] = std::sqrt(sum);
            } else {
                a[i][j] = a[j][j] > 0.0 ? sum / a[j][j] : 0.0;
            }
        }
    }
    return true;
}

}  // namespace

TEST_CASE("single node and chain propagation") {
    Dag single = build_dag({{"V", true}}, {});
    GaussianLinearModel one(single, {}, {{0, {{"", {1.5, {}, 2.25}}}}});
    JointGaussian jg = joint_gaussian(one, {});
    CHECK(jg.mean[0] == doctest::Approx(1.5));
    CHECK(jg.covariance[0][0] == doctest::Approx(2.25));

    Dag chain = build_dag({{"V1", true}, {"V2", true}}, {{"V1", "V2"}});
    GaussianLinearModel two(chain, {},
                            {{0, {{"", {0.0, {}, 1.0}}}},
                             {1, {{"", {0.0, {{0, 1.0}}, 1.0}}}}});
    JointGaussian j2 = joint_gaussian(two, {});
    CHECK(j2.covariance[0][0] == doctest::Approx(1.0));
    CHECK(j2.covariance[0][1] == doctest::Approx(1.0));
    CHECK(j2.covariance[1][0] == doctest::Approx(1.0));
    CHECK(j2.covariance[1][1] == doctest::Approx(2.0));
}

TEST_CASE("scenario 1 joint moments per group") {
    Scenario1Params p;
    GaussianLinearModel model = build_scenario1(p);
    NodeId x2 = model.dag().index_of("X2"), y = model.dag().index_of("Y");
    double sigma2 = scenario1_effective_sigma2(p);
    CHECK(sigma2 == doctest::Approx(1.0));

    for (std::size_t g = 0; g < 2; ++g) {
        JointGaussian jg = joint_gaussian(model, {{0, p.groups[g]}});
        std::size_t ix = pos_of(jg, x2), iy = pos_of(jg, y);
        CHECK(jg.mean[ix] == doctest::Approx(p.mu[g]));
        CHECK(jg.mean[iy] == doctest::Approx(p.beta * p.mu[g]));
        CHECK(jg.covariance[ix][ix] == doctest::Approx(p.sigma2[g]));
        CHECK(jg.covariance[ix][iy] == doctest::Approx(p.beta * p.sigma2[g]));
        CHECK(jg.covariance[iy][iy] ==
              doctest::Approx(p.beta * p.beta * p.sigma2[g] + sigma2));
        CHECK(psd_within(jg.covariance, 1e-10));
    }
}

TEST_CASE("conditioning: independent pair unchanged") {
    Dag pair = build_dag({{"V1", true}, {"V2", true}}, {});
    GaussianLinearModel model(pair, {},
                              {{0, {{"", {1.0, {}, 2.0}}}},
                               {1, {{"", {-1.0, {}, 3.0}}}}});
    JointGaussian jg = joint_gaussian(model, {});
    JointGaussian cond = conditional_gaussian(jg, {0}, {{1, 5.0}});
    CHECK(cond.mean[0] == doctest::Approx(1.0));
    CHECK(cond.covariance[0][0] == doctest::Approx(2.0));
}

TEST_CASE("scenario 1 conditional law of X2 given Y and A") {
    // The printed conditional variance form and the derived Schur form
    // coincide at beta=1; the derived form holds for general beta.
    Scenario1Params p;  // beta = 1, effective sigma^2 = 1
    GaussianLinearModel model = build_scenario1(p);
    NodeId x2 = model.dag().index_of("X2"), y = model.dag().index_of("Y");
    for (std::size_t g = 0; g < 2; ++g) {
        double rho = scenario1_rho(p, g);
        JointGaussian jg = joint_gaussian(model, {{0, p.groups[g]}});
        double yv = 1.3;
        JointGaussian cond = conditional_gaussian(jg, {x2}, {{y, yv}});
        CHECK(cond.mean[0] ==
              doctest::Approx((1.0 - rho) * p.mu[g] + rho * yv / p.beta));
        CHECK(cond.covariance[0][0] == doctest::Approx(p.sigma2[g] * (1.0 - rho)));
        // At beta = 1 this equals the sigma^2 rho form.
        CHECK(cond.covariance[0][0] == doctest::Approx(1.0 * rho));
    }

    Scenario1Params q;
    q.beta = 2.0;
    q.sigma2 = {1.0, 1.0};
    GaussianLinearModel model2 = build_scenario1(q);
    double rho = scenario1_rho(q, 0);
    CHECK(rho == doctest::Approx(0.8));
    JointGaussian jg = joint_gaussian(model2, {{0, q.groups[0]}});
    JointGaussian cond = conditional_gaussian(jg, {model2.dag().index_of("X2")},
                                              {{model2.dag().index_of("Y"), 0.4}});
    CHECK(cond.covariance[0][0] == doctest::Approx(0.2));
}

TEST_CASE("sequential conditioning equals one-shot") {
    Scenario1Params p;
    GaussianLinearModel model = build_scenario1(p);
    const Dag& dag = model.dag();
    NodeId x1 = dag.index_of("X1"), x2 = dag.index_of("X2"), y = dag.index_of("Y");
    JointGaussian jg = joint_gaussian(model, {{0, "a0"}});
    JointGaussian once = conditional_gaussian(jg, {x2}, {{y, 0.7}, {x1, -0.2}});
    JointGaussian step1 = conditional_gaussian(jg, {x2, x1}, {{y, 0.7}});
    JointGaussian twice = conditional_gaussian(step1, {x2}, {{x1, -0.2}});
    CHECK(twice.mean[0] == doctest::Approx(once.mean[0]).epsilon(1e-10));
    CHECK(twice.covariance[0][0] ==
          doctest::Approx(once.covariance[0][0]).epsilon(1e-10));
}

TEST_CASE("singular conditioning is rejected") {
    Dag chain = build_dag({{"V1", true}, {"V2", true}}, {{"V1", "V2"}});
    GaussianLinearModel degenerate(chain, {},
                                   {{0, {{"", {0.0, {}, 0.0}}}},
                                    {1, {{"", {0.0, {{0, 1.0}}, 1.0}}}}});
    JointGaussian jg = joint_gaussian(degenerate, {});
    CHECK_THROWS_AS(conditional_gaussian(jg, {1}, {{0, 0.0}}),
                    SingularConditioningError);
}

TEST_CASE("unfaithful fixture cancels exactly") {
    GaussianLinearModel model = unfaithful_fixture();
    JointGaussian jg = joint_gaussian(model, {});
    std::size_t i1 = pos_of(jg, 0), i4 = pos_of(jg, 3);
    CHECK(jg.covariance[i1][i4] == 0.0);
    CHECK_FALSE(model.dag().d_separated(0, 3, {}));
    // V4 = 3 e3 - 2 e2 + e4: Var = 9 + 4 + 1.
    CHECK(jg.covariance[i4][i4] == doctest::Approx(14.0));

    JointGaussian perturbed = joint_gaussian(unfaithful_fixture(-2.1), {});
    CHECK(std::abs(perturbed.covariance[i1][i4]) > 0.01);
}

TEST_CASE("sampling determinism and degenerate model") {
    Scenario1Params p;
    GaussianLinearModel model = build_scenario1(p);
    Dataset d1 = sample(model, 100, 42);
    Dataset d2 = sample(model, 100, 42);
    CHECK(d1.col("X2").real == d2.col("X2").real);
    CHECK(d1.col("A").codes == d2.col("A").codes);

    Dag chain = build_dag({{"V1", true}, {"V2", true}}, {{"V1", "V2"}});
    GaussianLinearModel fixed(chain, {},
                              {{0, {{"", {2.0, {}, 0.0}}}},
                               {1, {{"", {1.0, {{0, 3.0}}, 0.0}}}}});
    Dataset d3 = sample(fixed, 5, 1);
    for (double v : d3.col("V1").real) CHECK(v == doctest::Approx(2.0));
    for (double v : d3.col("V2").real) CHECK(v == doctest::Approx(7.0));
}

TEST_CASE("sampling agrees with analytic moments") {
    Scenario1Params p;
    GaussianLinearModel model = build_scenario1(p);
    std::size_t n = 200000;
    Dataset data = sample(model, n, 17);
    const Column& a = data.col("A");
    const Column& x2 = data.col("X2");
    for (std::size_t g = 0; g < 2; ++g) {
        double sum = 0.0, count = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (static_cast<std::size_t>(a.codes[i]) == g) {
                sum += x2.real[i];
                count += 1.0;
            }
        double mean = sum / count;
        double se = std::sqrt(p.sigma2[g] / count);
        CHECK(std::abs(mean - p.mu[g]) < 5.0 * se);
    }
}

TEST_CASE("model validation") {
    Dag chain = build_dag({{"V1", true}, {"V2", true}}, {{"V1", "V2"}});
    // Discrete node with a parent is rejected.
    CHECK_THROWS_AS(
        GaussianLinearModel(chain, {{1, {{"l", "r"}, {0.5, 0.5}}}},
                            {{0, {{"", {0.0, {}, 1.0}}}}}),
        ParamError);
    // Mechanism referencing a non-parent is rejected.
    Dag pair = build_dag({{"V1", true}, {"V2", true}}, {});
    CHECK_THROWS_AS(
        GaussianLinearModel(pair, {},
                            {{0, {{"", {0.0, {}, 1.0}}}},
                             {1, {{"", {0.0, {{0, 1.0}}, 1.0}}}}}),
        ParamError);
}
