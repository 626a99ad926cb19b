#include "fairdag/surgery.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace fairdag {

namespace {

std::vector<NodeId> intervened_nodes(const Intervention& iv) {
    std::vector<NodeId> out;
    for (auto& [v, label] : iv.discrete_assignments) out.push_back(v);
    for (auto& [v, value] : iv.continuous_assignments) out.push_back(v);
    return out;
}

// True if an unblocked (given the empty set) backdoor path from v to target
// exists in `dag` passing through at least one unobserved node. Unblocked
// backdoor paths have the shape v <- ... <- top -> ... -> target, so the DFS
// climbs parent edges and may switch once to descending child edges.
bool open_unobserved_backdoor(const Dag& dag, NodeId v, NodeId target) {
    std::vector<bool> on_path(dag.node_count(), false);
    on_path[v] = true;

    std::function<bool(NodeId, bool, bool)> dfs = [&](NodeId u, bool descending,
                                                      bool unobserved_seen) -> bool {
        if (u == target) return unobserved_seen;
        if (!dag.observed(u)) unobserved_seen = true;
        if (!descending) {
            for (NodeId p : dag.parents(u)) {
                if (on_path[p]) continue;
                on_path[p] = true;
                bool hit = dfs(p, false, unobserved_seen);
                on_path[p] = false;
                if (hit) return true;
            }
        }
        for (NodeId c : dag.children(u)) {
            if (on_path[c]) continue;
            if (c == v) continue;
            on_path[c] = true;
            bool hit = dfs(c, true, unobserved_seen);
            on_path[c] = false;
            if (hit) return true;
        }
        return false;
    };

    for (NodeId p : dag.parents(v)) {
        if (p == target) {
            if (!dag.observed(p)) return true;
            continue;
        }
        on_path[p] = true;
        bool hit = dfs(p, false, false);
        on_path[p] = false;
        if (hit) return true;
    }
    return false;
}

}  // namespace

DiscreteModel intervene(const DiscreteModel& model, const Intervention& iv) {
    if (!iv.continuous_assignments.empty())
        throw DomainError("continuous assignment on a discrete model");
    std::vector<NodeId> targets = intervened_nodes(iv);
    Dag mutilated = model.dag().without_incoming(targets);

    std::vector<std::vector<std::string>> domains;
    std::vector<std::vector<std::vector<double>>> cpts;
    for (NodeId v = 0; v < model.dag().node_count(); ++v) {
        domains.push_back(model.domain(v));
        auto it = iv.discrete_assignments.find(v);
        if (it == iv.discrete_assignments.end()) {
            cpts.push_back(model.cpt(v));
        } else {
            std::size_t k = model.label_index(v, it->second);
            std::vector<double> row(model.domain(v).size(), 0.0);
            row[k] = 1.0;
            cpts.push_back({row});
        }
    }
    return DiscreteModel(std::move(mutilated), std::move(domains), std::move(cpts));
}

GaussianLinearModel intervene(const GaussianLinearModel& model, const Intervention& iv) {
    std::vector<NodeId> targets = intervened_nodes(iv);
    for (auto& [v, label] : iv.discrete_assignments) {
        if (!model.is_discrete(v))
            throw DomainError("categorical assignment on continuous node " +
                              model.dag().name(v));
    }
    for (auto& [v, value] : iv.continuous_assignments)
        if (model.is_discrete(v))
            throw DomainError("real assignment on discrete node " + model.dag().name(v));

    Dag mutilated = model.dag().without_incoming(targets);
    std::map<NodeId, DiscreteRoot> roots = model.discrete_roots();
    for (auto& [v, label] : iv.discrete_assignments) {
        DiscreteRoot& root = roots.at(v);
        auto it = std::find(root.labels.begin(), root.labels.end(), label);
        if (it == root.labels.end())
            throw DomainError("label '" + label + "' not in domain of " +
                              model.dag().name(v));
        std::fill(root.probs.begin(), root.probs.end(), 0.0);
        root.probs[static_cast<std::size_t>(it - root.labels.begin())] = 1.0;
    }
    std::map<NodeId, std::map<std::string, Mechanism>> mechs = model.mechanisms();
    for (auto& [v, value] : iv.continuous_assignments) {
        Mechanism point;
        point.intercept = value;
        point.noise_variance = 0.0;
        mechs[v] = {{"", point}};
    }
    return GaussianLinearModel(std::move(mutilated), std::move(roots), std::move(mechs));
}

DoResult do_distribution(const DiscreteModel& model, NodeId target,
                         const Intervention& iv, std::size_t size_cap) {
    std::vector<NodeId> targets = intervened_nodes(iv);
    DiscreteModel mutilated = intervene(model, iv);

    for (NodeId v : targets) {
        if (v == target) continue;  // point mass on the target itself
        std::vector<NodeId> others;
        for (NodeId u : targets)
            if (u != v && u != target) others.push_back(u);
        if (mutilated.dag().d_separated(v, target, others)) continue;
        if (open_unobserved_backdoor(model.dag(), v, target))
            return Unidentifiable{"unblocked backdoor through an unobserved node from " +
                                  model.dag().name(v) + " to " + model.dag().name(target)};
    }

    JointTable joint = joint_distribution(mutilated, size_cap);
    return query(joint, {target}, {});
}

namespace {

CriterionReport do_equality(const DiscreteModel& model, NodeId r, NodeId a,
                            const std::vector<NodeId>& mediators, Criterion criterion,
                            double tol, std::size_t size_cap) {
    CriterionReport rep;
    rep.criterion = criterion;
    rep.method = Method::exact;
    rep.threshold = tol;

    const auto& a_domain = model.domain(a);
    std::vector<std::size_t> med_cards;
    for (NodeId m : mediators) med_cards.push_back(model.domain(m).size());
    std::size_t med_configs = 1;
    for (std::size_t c : med_cards) med_configs *= c;

    double worst = 0.0;
    std::vector<std::size_t> med_idx(mediators.size(), 0);
    for (std::size_t cfg = 0; cfg < med_configs; ++cfg) {
        std::vector<std::vector<double>> dists;
        for (const std::string& label : a_domain) {
            Intervention iv;
            iv.discrete_assignments[a] = label;
            for (std::size_t m = 0; m < mediators.size(); ++m)
                iv.discrete_assignments[mediators[m]] =
                    model.domain(mediators[m])[med_idx[m]];
            DoResult res = do_distribution(model, r, iv, size_cap);
            if (std::holds_alternative<Unidentifiable>(res)) {
                rep.verdict = Verdict::undecidable;
                rep.note = std::get<Unidentifiable>(res).reason;
                return rep;
            }
            dists.push_back(std::get<JointTable>(res).probabilities);
        }
        for (std::size_t i = 0; i < dists.size(); ++i)
            for (std::size_t j = i + 1; j < dists.size(); ++j)
                for (std::size_t k = 0; k < dists[i].size(); ++k)
                    worst = std::max(worst, std::abs(dists[i][k] - dists[j][k]));
        for (int m = static_cast<int>(mediators.size()) - 1; m >= 0; --m) {
            if (++med_idx[m] < med_cards[m]) break;
            med_idx[m] = 0;
        }
    }
    rep.gaps.emplace_back("max_cell_gap", worst);
    rep.verdict = worst <= tol ? Verdict::satisfied : Verdict::violated;
    return rep;
}

}  // namespace

CriterionReport cde_equal(const DiscreteModel& model, NodeId r, NodeId a,
                          const std::vector<NodeId>& mediators, double tol,
                          std::size_t size_cap) {
    return do_equality(model, r, a, mediators, Criterion::CDEEqual, tol, size_cap);
}

CriterionReport te_equal(const DiscreteModel& model, NodeId r, NodeId a, double tol,
                         std::size_t size_cap) {
    return do_equality(model, r, a, {}, Criterion::TEEqual, tol, size_cap);
}

CriterionReport te_equal(const GaussianLinearModel& model, NodeId r, NodeId a,
                         double tol) {
    CriterionReport rep;
    rep.criterion = Criterion::TEEqual;
    rep.method = Method::exact;
    rep.threshold = tol;
    if (!model.is_discrete(a))
        throw DomainError("Gaussian total-effect check requires a discrete root");

    // Mixture moments of r over the remaining discrete roots, per level of a.
    std::vector<NodeId> others;
    for (auto& [v, root] : model.discrete_roots())
        if (v != a) others.push_back(v);

    auto moments_for = [&](const std::string& a_label) {
        std::vector<std::map<NodeId, std::string>> configs = {{{a, a_label}}};
        std::vector<double> weights = {1.0};
        for (NodeId v : others) {
            const DiscreteRoot& root = model.discrete_roots().at(v);
            std::vector<std::map<NodeId, std::string>> next_c;
            std::vector<double> next_w;
            for (std::size_t i = 0; i < configs.size(); ++i)
                for (std::size_t k = 0; k < root.labels.size(); ++k) {
                    auto c = configs[i];
                    c[v] = root.labels[k];
                    next_c.push_back(std::move(c));
                    next_w.push_back(weights[i] * root.probs[k]);
                }
            configs = std::move(next_c);
            weights = std::move(next_w);
        }
        double mean = 0.0, second = 0.0;
        for (std::size_t i = 0; i < configs.size(); ++i) {
            JointGaussian jg = joint_gaussian(model, configs[i]);
            auto it = std::find(jg.variables.begin(), jg.variables.end(), r);
            if (it == jg.variables.end())
                throw UnknownNodeError("target is not a continuous node");
            std::size_t idx = static_cast<std::size_t>(it - jg.variables.begin());
            mean += weights[i] * jg.mean[idx];
            second += weights[i] * (jg.covariance[idx][idx] + jg.mean[idx] * jg.mean[idx]);
        }
        return std::pair<double, double>{mean, second - mean * mean};
    };

    const DiscreteRoot& a_root = model.discrete_roots().at(a);
    double mean_gap = 0.0, var_gap = 0.0;
    std::vector<std::pair<double, double>> per_level;
    for (const std::string& label : a_root.labels) per_level.push_back(moments_for(label));
    for (std::size_t i = 0; i < per_level.size(); ++i)
        for (std::size_t j = i + 1; j < per_level.size(); ++j) {
            mean_gap = std::max(mean_gap,
                                std::abs(per_level[i].first - per_level[j].first));
            var_gap = std::max(var_gap,
                               std::abs(per_level[i].second - per_level[j].second));
        }
    rep.gaps.emplace_back("mean_gap", mean_gap);
    rep.gaps.emplace_back("var_gap", var_gap);
    rep.verdict = std::max(mean_gap, var_gap) <= tol ? Verdict::satisfied
                                                     : Verdict::violated;
    return rep;
}

}  // namespace fairdag
