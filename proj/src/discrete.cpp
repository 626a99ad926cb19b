#include "fairdag/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fairdag/dataset.hpp"

namespace fairdag {

namespace {

constexpr double kRowTol = 1e-9;

std::size_t product_cards(const std::vector<std::size_t>& cards, std::size_t cap) {
    std::size_t total = 1;
    for (std::size_t c : cards) {
        if (c != 0 && total > cap / c)
            throw SizeCapError("joint table exceeds the size cap");
        total *= c;
    }
    return total;
}

}  // namespace

std::size_t JointTable::index_of(const std::vector<std::size_t>& assignment) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < variables.size(); ++i)
        idx = idx * cards[i] + assignment[i];
    return idx;
}

DiscreteModel::DiscreteModel(Dag dag,
                             std::vector<std::vector<std::string>> domains,
                             std::vector<std::vector<std::vector<double>>> cpts)
    : dag_(std::move(dag)), domains_(std::move(domains)), cpts_(std::move(cpts)) {
    const int n = dag_.node_count();
    if (static_cast<int>(domains_.size()) != n || static_cast<int>(cpts_.size()) != n)
        throw ParamError("domains/cpts must cover every node");
    for (NodeId v = 0; v < n; ++v) {
        if (domains_[v].size() < 2)
            throw DomainError("domain of " + dag_.name(v) + " must have >= 2 labels");
        std::size_t rows = 1;
        for (NodeId p : dag_.parents(v)) rows *= domains_[p].size();
        if (cpts_[v].size() != rows)
            throw ParamError("CPT of " + dag_.name(v) + " has wrong row count");
        for (const auto& row : cpts_[v]) {
            if (row.size() != domains_[v].size())
                throw ParamError("CPT row of " + dag_.name(v) + " has wrong width");
            double mass = 0.0;
            for (double p : row) {
                if (p < 0.0)
                    throw ParamError("negative probability in CPT of " + dag_.name(v));
                mass += p;
            }
            if (std::abs(mass - 1.0) > kRowTol)
                throw ParamError("CPT row of " + dag_.name(v) + " does not sum to 1");
        }
    }
}

std::size_t DiscreteModel::label_index(NodeId v, const std::string& label) const {
    const auto& dom = domains_[v];
    auto it = std::find(dom.begin(), dom.end(), label);
    if (it == dom.end())
        throw DomainError("label '" + label + "' not in domain of " + dag_.name(v));
    return static_cast<std::size_t>(it - dom.begin());
}

JointTable joint_distribution(const DiscreteModel& model, std::size_t size_cap) {
    const Dag& dag = model.dag();
    const int n = dag.node_count();
    JointTable joint;
    joint.variables.resize(n);
    joint.cards.resize(n);
    for (NodeId v = 0; v < n; ++v) {
        joint.variables[v] = v;
        joint.cards[v] = model.domain(v).size();
    }
    std::size_t total = product_cards(joint.cards, size_cap);
    joint.probabilities.assign(total, 0.0);

    std::vector<std::size_t> assignment(n, 0);
    for (std::size_t cell = 0; cell < total; ++cell) {
        double p = 1.0;
        for (NodeId v = 0; v < n && p > 0.0; ++v) {
            std::size_t row = 0;
            for (NodeId par : dag.parents(v))
                row = row * model.domain(par).size() + assignment[par];
            p *= model.cpt(v)[row][assignment[v]];
        }
        joint.probabilities[joint.index_of(assignment)] = p;
        for (int v = n - 1; v >= 0; --v) {
            if (++assignment[v] < joint.cards[v]) break;
            assignment[v] = 0;
        }
    }
    return joint;
}

JointTable query(const JointTable& joint, const std::vector<NodeId>& targets,
                 const std::vector<std::pair<NodeId, std::size_t>>& given) {
    std::vector<int> pos(joint.variables.size());
    auto position = [&](NodeId v) {
        auto it = std::find(joint.variables.begin(), joint.variables.end(), v);
        if (it == joint.variables.end())
            throw UnknownNodeError("variable not in joint table");
        return static_cast<std::size_t>(it - joint.variables.begin());
    };

    std::vector<std::size_t> target_pos;
    for (NodeId t : targets) {
        std::size_t tp = position(t);
        for (auto& [g, val] : given)
            if (g == t)
                throw OverlapError("target overlaps conditioning evidence");
        target_pos.push_back(tp);
    }
    std::vector<std::pair<std::size_t, std::size_t>> given_pos;
    for (auto& [g, val] : given) {
        std::size_t gp = position(g);
        if (val >= joint.cards[gp])
            throw DomainError("evidence value out of range");
        given_pos.emplace_back(gp, val);
    }

    JointTable out;
    out.variables = targets;
    std::size_t out_cells = 1;
    for (std::size_t tp : target_pos) {
        out.cards.push_back(joint.cards[tp]);
        out_cells *= joint.cards[tp];
    }
    out.probabilities.assign(out_cells, 0.0);

    std::vector<std::size_t> assignment(joint.variables.size(), 0);
    double evidence_mass = 0.0;
    for (std::size_t cell = 0; cell < joint.cell_count(); ++cell) {
        bool match = true;
        for (auto& [gp, val] : given_pos)
            if (assignment[gp] != val) {
                match = false;
                break;
            }
        if (match) {
            double p = joint.probabilities[joint.index_of(assignment)];
            evidence_mass += p;
            std::size_t out_idx = 0;
            for (std::size_t i = 0; i < target_pos.size(); ++i)
                out_idx = out_idx * out.cards[i] + assignment[target_pos[i]];
            out.probabilities[out_idx] += p;
        }
        for (int v = static_cast<int>(assignment.size()) - 1; v >= 0; --v) {
            if (++assignment[v] < joint.cards[v]) break;
            assignment[v] = 0;
        }
    }
    if (evidence_mass <= 0.0)
        throw ZeroProbabilityEvidenceError("conditioning event has zero probability");
    for (double& p : out.probabilities) p /= evidence_mass;
    return out;
}

double ci_gap(const DiscreteModel& model, NodeId x, NodeId y,
              const std::vector<NodeId>& s, std::size_t size_cap) {
    if (x == y)
        throw OverlapError("ci_gap requires x != y");
    for (NodeId c : s)
        if (c == x || c == y)
            throw OverlapError("conditioning set overlaps query nodes");

    JointTable joint = joint_distribution(model, size_cap);
    std::vector<NodeId> vars = {x, y};
    vars.insert(vars.end(), s.begin(), s.end());
    JointTable sub = query(joint, vars, {});

    std::size_t nx = sub.cards[0], ny = sub.cards[1];
    std::size_t ns = 1;
    for (std::size_t i = 2; i < sub.cards.size(); ++i) ns *= sub.cards[i];

    double worst = 0.0;
    std::vector<double> pxy(nx * ny);
    for (std::size_t sc = 0; sc < ns; ++sc) {
        double mass = 0.0;
        for (std::size_t i = 0; i < nx; ++i)
            for (std::size_t j = 0; j < ny; ++j) {
                pxy[i * ny + j] = sub.probabilities[(i * ny + j) * ns + sc];
                mass += pxy[i * ny + j];
            }
        if (mass <= 0.0) continue;
        std::vector<double> px(nx, 0.0), py(ny, 0.0);
        for (std::size_t i = 0; i < nx; ++i)
            for (std::size_t j = 0; j < ny; ++j) {
                pxy[i * ny + j] /= mass;
                px[i] += pxy[i * ny + j];
                py[j] += pxy[i * ny + j];
            }
        for (std::size_t i = 0; i < nx; ++i)
            for (std::size_t j = 0; j < ny; ++j)
                worst = std::max(worst, std::abs(pxy[i * ny + j] - px[i] * py[j]));
    }
    return worst;
}

bool conditional_independent(const DiscreteModel& model, NodeId x, NodeId y,
                             const std::vector<NodeId>& s, double tol,
                             std::size_t size_cap) {
    return ci_gap(model, x, y, s, size_cap) <= tol;
}

std::vector<FaithfulnessViolation> faithfulness_report(const DiscreteModel& model,
                                                       double tol,
                                                       std::size_t size_cap) {
    const int n = model.dag().node_count();
    if (n > 8)
        throw SizeCapError("faithfulness_report enumerates triples; capped at 8 nodes");
    std::vector<FaithfulnessViolation> out;
    for (NodeId x = 0; x < n; ++x) {
        for (NodeId y = x + 1; y < n; ++y) {
            std::vector<NodeId> rest;
            for (NodeId v = 0; v < n; ++v)
                if (v != x && v != y) rest.push_back(v);
            for (std::size_t mask = 0; mask < (std::size_t{1} << rest.size()); ++mask) {
                std::vector<NodeId> s;
                for (std::size_t b = 0; b < rest.size(); ++b)
                    if (mask & (std::size_t{1} << b)) s.push_back(rest[b]);
                if (model.dag().d_separated(x, y, s)) continue;
                if (ci_gap(model, x, y, s, size_cap) <= tol)
                    out.push_back({x, y, s, true, true});
            }
        }
    }
    return out;
}

Dataset sample(const DiscreteModel& model, std::size_t n, std::uint64_t seed) {
    const Dag& dag = model.dag();
    const auto& order = dag.topological_order();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    std::vector<std::vector<int>> values(dag.node_count(), std::vector<int>(n));
    std::vector<std::size_t> current(dag.node_count());
    for (std::size_t row = 0; row < n; ++row) {
        for (NodeId v : order) {
            std::size_t cfg = 0;
            for (NodeId p : dag.parents(v))
                cfg = cfg * model.domain(p).size() + current[p];
            const auto& probs = model.cpt(v)[cfg];
            double u = unif(rng), cum = 0.0;
            std::size_t pick = probs.size() - 1;
            for (std::size_t k = 0; k < probs.size(); ++k) {
                cum += probs[k];
                if (u < cum) {
                    pick = k;
                    break;
                }
            }
            current[v] = pick;
            values[v][row] = static_cast<int>(pick);
        }
    }
    Dataset data;
    for (NodeId v = 0; v < dag.node_count(); ++v)
        data.add_categorical(dag.name(v), std::move(values[v]), model.domain(v));
    return data;
}

}  // namespace fairdag
