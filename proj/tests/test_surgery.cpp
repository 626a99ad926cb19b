#include "doctest.h"

#include <cmath>
#include <random>
#include <variant>

#include "fairdag/scenarios.hpp"
#include "fairdag/surgery.hpp"

using namespace fairdag;

namespace {

const std::vector<std::string> kBin = {"0", "1"};

DiscreteModel confounded_triangle() {
    // Unobserved confounder V1 of V2 and V3, plus the direct edge V2 -> V3.
    Dag dag = build_dag({{"V1", false}, {"V2", true}, {"V3", true}},
                        {{"V1", "V2"}, {"V1", "V3"}, {"V2", "V3"}});
    return DiscreteModel(dag, {kBin, kBin, kBin},
                         {{{0.4, 0.6}},
                          {{0.3, 0.7}, {0.8, 0.2}},
                          {{0.1, 0.9}, {0.6, 0.4}, {0.5, 0.5}, {0.9, 0.1}}});
}

}  // namespace

TEST_CASE("intervention mutilates the graph and pins the value") {
    DiscreteModel model = build_scenario3({"X2"});
    const Dag& dag = model.dag();
    Intervention iv;
    iv.discrete_assignments[dag.index_of("A")] = "1";
    iv.discrete_assignments[dag.index_of("X2")] = "0";
    DiscreteModel cut = intervene(model, iv);

    CHECK(cut.dag().parents(dag.index_of("X2")).empty());  // X1 -> X2 deleted
    CHECK(cut.dag().parents(dag.index_of("X1")) ==
          std::vector<NodeId>{dag.index_of("A")});  // A -> X1 untouched
    CHECK(cut.cpt(dag.index_of("A"))[0] == std::vector<double>{0.0, 1.0});
    CHECK(cut.cpt(dag.index_of("X2"))[0] == std::vector<double>{1.0, 0.0});
}

TEST_CASE("mutilation idempotence") {
    DiscreteModel model = confounded_triangle();
    Intervention iv;
    iv.discrete_assignments[1] = "1";
    DiscreteModel once = intervene(model, iv);
    DiscreteModel twice = intervene(once, iv);
    CHECK(once.dag().edges() == twice.dag().edges());
    for (NodeId v = 0; v < once.dag().node_count(); ++v)
        CHECK(once.cpt(v) == twice.cpt(v));
}

TEST_CASE("intervening on a fork's root makes the branches independent") {
    Dag fork = build_dag({{"V1", true}, {"V2", true}, {"V3", true}},
                         {{"V2", "V1"}, {"V2", "V3"}});
    DiscreteModel model(fork, {kBin, kBin, kBin},
                        {{{0.3, 0.7}, {0.8, 0.2}},
                         {{0.5, 0.5}},
                         {{0.1, 0.9}, {0.6, 0.4}}});
    Intervention iv;
    iv.discrete_assignments[1] = "0";
    DiscreteModel cut = intervene(model, iv);
    CHECK(conditional_independent(cut, 0, 2, {}, 1e-12));
}

TEST_CASE("root intervention equals conditioning") {
    std::mt19937_64 rng(41);
    DiscreteModel model = build_scenario2(9001);
    const Dag& dag = model.dag();
    NodeId a = dag.index_of("A");
    JointTable joint = joint_distribution(model);
    for (NodeId target = 0; target < dag.node_count(); ++target) {
        if (target == a) continue;
        for (std::size_t k = 0; k < 2; ++k) {
            Intervention iv;
            iv.discrete_assignments[a] = kBin[k];
            DoResult res = do_distribution(model, target, iv);
            REQUIRE(std::holds_alternative<JointTable>(res));
            JointTable done = std::get<JointTable>(res);
            JointTable seen = query(joint, {target}, {{a, k}});
            for (std::size_t c = 0; c < 2; ++c)
                CHECK(std::abs(done.probabilities[c] - seen.probabilities[c]) <
                      1e-12);
        }
    }
}

TEST_CASE("unobserved confounder blocks identification") {
    DiscreteModel model = confounded_triangle();
    Intervention iv;
    iv.discrete_assignments[1] = "1";  // do(V2)
    DoResult res = do_distribution(model, 2, iv);
    CHECK(std::holds_alternative<Unidentifiable>(res));
}

TEST_CASE("Scenario 4: do(A) on R is identifiable despite unobserved U") {
    DiscreteModel model = build_scenario4({"X"});
    const Dag& dag = model.dag();
    NodeId a = dag.index_of("A"), r = dag.index_of("R");
    std::vector<std::vector<double>> dists;
    for (const std::string& label : kBin) {
        Intervention iv;
        iv.discrete_assignments[a] = label;
        DoResult res = do_distribution(model, r, iv);
        REQUIRE(std::holds_alternative<JointTable>(res));
        dists.push_back(std::get<JointTable>(res).probabilities);
    }
    CHECK(std::abs(dists[0][0] - dists[1][0]) < 1e-12);
    CHECK(std::abs(dists[0][1] - dists[1][1]) < 1e-12);
}

TEST_CASE("controlled direct effect on Scenario 3") {
    for (std::uint64_t seed : {0ull, 5ull, 123ull}) {
        DiscreteModel mediated = build_scenario3({"X2"}, seed);
        const Dag& dag = mediated.dag();
        CriterionReport rep = cde_equal(mediated, dag.index_of("R"),
                                        dag.index_of("A"), {dag.index_of("X2")},
                                        1e-9);
        CHECK(rep.criterion == Criterion::CDEEqual);
        CHECK(rep.verdict == Verdict::satisfied);

        DiscreteModel direct = build_scenario3({"X1", "X2"}, seed);
        CriterionReport rep2 = cde_equal(direct, direct.dag().index_of("R"),
                                         direct.dag().index_of("A"),
                                         {direct.dag().index_of("X2")}, 1e-9);
        CHECK(rep2.verdict == Verdict::violated);
    }
}

TEST_CASE("cde verdict coincides with exact conditional independence") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        for (auto parents : {std::vector<std::string>{"X2"},
                             std::vector<std::string>{"X1", "X2"}}) {
            DiscreteModel model = build_scenario3(parents, seed);
            const Dag& dag = model.dag();
            CriterionReport cde = cde_equal(model, dag.index_of("R"),
                                            dag.index_of("A"),
                                            {dag.index_of("X2")}, 1e-9);
            bool ci = conditional_independent(model, dag.index_of("R"),
                                              dag.index_of("A"),
                                              {dag.index_of("X2")}, 1e-9);
            CHECK((cde.verdict == Verdict::satisfied) == ci);
        }
    }
}

TEST_CASE("total effect equality") {
    DiscreteModel model = build_scenario4({"X"});
    const Dag& dag = model.dag();
    CriterionReport te = te_equal(model, dag.index_of("R"), dag.index_of("A"), 1e-9);
    CHECK(te.verdict == Verdict::satisfied);

    // R a direct child of A with a non-vacuous CPT.
    Dag d2 = build_dag({{"A", true}, {"R", true}}, {{"A", "R"}});
    DiscreteModel child(d2, {kBin, kBin},
                        {{{0.5, 0.5}}, {{0.2, 0.8}, {0.9, 0.1}}});
    CHECK(te_equal(child, 1, 0, 1e-9).verdict == Verdict::violated);

    // R with no ancestors.
    Dag d3 = build_dag({{"A", true}, {"R", true}}, {});
    DiscreteModel lone(d3, {kBin, kBin}, {{{0.5, 0.5}}, {{0.4, 0.6}}});
    CHECK(te_equal(lone, 1, 0, 1e-9).verdict == Verdict::satisfied);
}

TEST_CASE("mutilated-graph d-separation implies total-effect equality") {
    std::mt19937_64 rng(77);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        DiscreteModel model = build_scenario4({"X"}, seed);
        const Dag& dag = model.dag();
        NodeId a = dag.index_of("A"), r = dag.index_of("R");
        Dag cut = dag.without_incoming({a});
        if (cut.d_separated(a, r, {}))
            CHECK(te_equal(model, r, a, 1e-9).verdict == Verdict::satisfied);
    }
}

TEST_CASE("Gaussian total-effect equality") {
    Scenario1Params p;
    GaussianLinearModel model = build_scenario1(p);
    NodeId a = model.dag().index_of("A");
    // A shifts X2 and hence Y.
    CriterionReport y_te = te_equal(model, model.dag().index_of("Y"), a, 1e-9);
    CHECK(y_te.verdict == Verdict::violated);
    // X3 is disconnected from A.
    CriterionReport x3_te = te_equal(model, model.dag().index_of("X3"), a, 1e-9);
    CHECK(x3_te.verdict == Verdict::satisfied);
}

TEST_CASE("Gaussian interventions") {
    Scenario1Params p;
    GaussianLinearModel model = build_scenario1(p);
    const Dag& dag = model.dag();
    Intervention iv;
    iv.continuous_assignments[dag.index_of("X2")] = 1.5;
    GaussianLinearModel cut = intervene(model, iv);
    CHECK(cut.dag().parents(dag.index_of("X2")).empty());
    JointGaussian jg = joint_gaussian(cut, {{dag.index_of("A"), "a0"}});
    std::size_t ix = 0;
    for (std::size_t i = 0; i < jg.variables.size(); ++i)
        if (jg.variables[i] == dag.index_of("X2")) ix = i;
    CHECK(jg.mean[ix] == doctest::Approx(1.5));
    CHECK(jg.covariance[ix][ix] == doctest::Approx(0.0));

    Intervention bad;
    bad.continuous_assignments[dag.index_of("A")] = 1.0;
    CHECK_THROWS_AS(intervene(model, bad), DomainError);
}
