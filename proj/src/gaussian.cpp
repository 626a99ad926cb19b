#include "fairdag/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace fairdag {

namespace {

// Solve M x = b by Gaussian elimination with partial pivoting.
// Throws when the pivot scale indicates a singular conditioning block.
std::vector<double> solve(std::vector<std::vector<double>> m, std::vector<double> b) {
    const std::size_t n = m.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
        if (std::abs(m[pivot][col]) < 1e-12)
            throw SingularConditioningError("conditioning covariance block is singular");
        std::swap(m[col], m[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            double f = m[r][col] / m[col][col];
            for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / m[i][i];
    return x;
}

}  // namespace

GaussianLinearModel::GaussianLinearModel(
    Dag dag, std::map<NodeId, DiscreteRoot> discrete_roots,
    std::map<NodeId, std::map<std::string, Mechanism>> mechanisms)
    : dag_(std::move(dag)),
      discrete_roots_(std::move(discrete_roots)),
      mechanisms_(std::move(mechanisms)) {
    for (auto& [v, root] : discrete_roots_) {
        if (!dag_.parents(v).empty())
            throw ParamError("discrete node " + dag_.name(v) + " must be a root");
        if (root.labels.size() < 2 || root.labels.size() != root.probs.size())
            throw ParamError("bad categorical distribution for " + dag_.name(v));
        double mass = 0.0;
        for (double p : root.probs) {
            if (p < 0.0)
                throw ParamError("negative probability for " + dag_.name(v));
            mass += p;
        }
        if (std::abs(mass - 1.0) > 1e-9)
            throw ParamError("categorical probs of " + dag_.name(v) + " must sum to 1");
    }
    for (NodeId v = 0; v < dag_.node_count(); ++v) {
        if (is_discrete(v)) continue;
        auto it = mechanisms_.find(v);
        if (it == mechanisms_.end())
            throw ParamError("missing mechanism for continuous node " + dag_.name(v));
        for (auto& [key, mech] : it->second) {
            if (mech.noise_variance < 0.0)
                throw ParamError("negative noise variance for " + dag_.name(v));
            for (auto& [p, coef] : mech.coefficients) {
                const auto& par = dag_.parents(v);
                if (std::find(par.begin(), par.end(), p) == par.end())
                    throw ParamError("mechanism of " + dag_.name(v) +
                                     " references non-parent " + dag_.name(p));
                if (is_discrete(p))
                    throw ParamError("coefficient on discrete parent of " + dag_.name(v));
            }
        }
    }
}

std::vector<NodeId> GaussianLinearModel::continuous_nodes() const {
    std::vector<NodeId> out;
    for (NodeId v : dag_.topological_order())
        if (!is_discrete(v)) out.push_back(v);
    return out;
}

std::string GaussianLinearModel::config_key(
    const std::map<NodeId, std::string>& config) const {
    std::string key;
    bool first = true;
    for (auto& [v, root] : discrete_roots_) {
        auto it = config.find(v);
        if (it == config.end())
            throw ParamError("configuration missing discrete root " + dag_.name(v));
        if (std::find(root.labels.begin(), root.labels.end(), it->second) ==
            root.labels.end())
            throw DomainError("label '" + it->second + "' not in domain of " + dag_.name(v));
        if (!first) key += ",";
        key += it->second;
        first = false;
    }
    return key;
}

const Mechanism& GaussianLinearModel::mechanism(NodeId v, const std::string& key) const {
    const auto& per_config = mechanisms_.at(v);
    auto it = per_config.find(key);
    if (it != per_config.end()) return it->second;
    it = per_config.find("");
    if (it != per_config.end()) return it->second;
    throw ParamError("no mechanism for node " + dag_.name(v) + " under config '" + key + "'");
}

JointGaussian joint_gaussian(const GaussianLinearModel& model,
                             const std::map<NodeId, std::string>& config) {
    std::string key = model.config_key(config);
    std::vector<NodeId> nodes = model.continuous_nodes();
    std::vector<int> pos(model.dag().node_count(), -1);
    for (std::size_t i = 0; i < nodes.size(); ++i) pos[nodes[i]] = static_cast<int>(i);

    JointGaussian out;
    out.variables = nodes;
    out.mean.assign(nodes.size(), 0.0);
    out.covariance.assign(nodes.size(), std::vector<double>(nodes.size(), 0.0));

    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Mechanism& mech = model.mechanism(nodes[i], key);
        double mu = mech.intercept;
        for (auto& [p, coef] : mech.coefficients) mu += coef * out.mean[pos[p]];
        out.mean[i] = mu;
        for (std::size_t j = 0; j < i; ++j) {
            double cov = 0.0;
            for (auto& [p, coef] : mech.coefficients)
                cov += coef * out.covariance[pos[p]][j];
            out.covariance[i][j] = out.covariance[j][i] = cov;
        }
        double var = mech.noise_variance;
        for (auto& [p, coef] : mech.coefficients)
            for (auto& [q, coef2] : mech.coefficients)
                var += coef * coef2 * out.covariance[pos[p]][pos[q]];
        out.covariance[i][i] = var;
    }
    return out;
}

JointGaussian conditional_gaussian(const JointGaussian& joint,
                                   const std::vector<NodeId>& targets,
                                   const std::vector<std::pair<NodeId, double>>& given) {
    auto position = [&](NodeId v) {
        auto it = std::find(joint.variables.begin(), joint.variables.end(), v);
        if (it == joint.variables.end())
            throw UnknownNodeError("variable not in joint Gaussian");
        return static_cast<std::size_t>(it - joint.variables.begin());
    };
    std::vector<std::size_t> tp, gp;
    std::vector<double> gv;
    for (NodeId t : targets) tp.push_back(position(t));
    for (auto& [g, val] : given) {
        gp.push_back(position(g));
        gv.push_back(val);
    }

    JointGaussian out;
    out.variables = targets;
    out.mean.assign(tp.size(), 0.0);
    out.covariance.assign(tp.size(), std::vector<double>(tp.size(), 0.0));

    if (gp.empty()) {
        for (std::size_t i = 0; i < tp.size(); ++i) {
            out.mean[i] = joint.mean[tp[i]];
            for (std::size_t j = 0; j < tp.size(); ++j)
                out.covariance[i][j] = joint.covariance[tp[i]][tp[j]];
        }
        return out;
    }

    // Schur complement: mu_t + S_tg S_gg^-1 (x - mu_g), S_tt - S_tg S_gg^-1 S_gt.
    std::vector<std::vector<double>> sgg(gp.size(), std::vector<double>(gp.size()));
    for (std::size_t i = 0; i < gp.size(); ++i)
        for (std::size_t j = 0; j < gp.size(); ++j)
            sgg[i][j] = joint.covariance[gp[i]][gp[j]];

    std::vector<double> resid(gp.size());
    for (std::size_t i = 0; i < gp.size(); ++i) resid[i] = gv[i] - joint.mean[gp[i]];
    std::vector<double> w = solve(sgg, resid);
    for (std::size_t i = 0; i < tp.size(); ++i) {
        double m = joint.mean[tp[i]];
        for (std::size_t j = 0; j < gp.size(); ++j)
            m += joint.covariance[tp[i]][gp[j]] * w[j];
        out.mean[i] = m;
    }
    for (std::size_t j = 0; j < tp.size(); ++j) {
        std::vector<double> col(gp.size());
        for (std::size_t i = 0; i < gp.size(); ++i)
            col[i] = joint.covariance[gp[i]][tp[j]];
        std::vector<double> u = solve(sgg, col);
        for (std::size_t i = 0; i < tp.size(); ++i) {
            double c = joint.covariance[tp[i]][tp[j]];
            for (std::size_t k = 0; k < gp.size(); ++k)
                c -= joint.covariance[tp[i]][gp[k]] * u[k];
            out.covariance[i][j] = c;
        }
    }
    return out;
}

Dataset sample(const GaussianLinearModel& model, std::size_t n, std::uint64_t seed) {
    const Dag& dag = model.dag();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<std::vector<double>> reals(dag.node_count());
    std::vector<std::vector<int>> cats(dag.node_count());
    for (NodeId v = 0; v < dag.node_count(); ++v) {
        if (model.is_discrete(v))
            cats[v].resize(n);
        else
            reals[v].resize(n);
    }

    std::vector<double> value(dag.node_count(), 0.0);
    std::map<NodeId, std::string> config;
    for (std::size_t row = 0; row < n; ++row) {
        config.clear();
        for (auto& [v, root] : model.discrete_roots()) {
            double u = unif(rng), cum = 0.0;
            std::size_t pick = root.probs.size() - 1;
            for (std::size_t k = 0; k < root.probs.size(); ++k) {
                cum += root.probs[k];
                if (u < cum) {
                    pick = k;
                    break;
                }
            }
            cats[v][row] = static_cast<int>(pick);
            config[v] = root.labels[pick];
        }
        std::string key = model.config_key(config);
        for (NodeId v : dag.topological_order()) {
            if (model.is_discrete(v)) continue;
            const Mechanism& mech = model.mechanism(v, key);
            double x = mech.intercept;
            for (auto& [p, coef] : mech.coefficients) x += coef * value[p];
            if (mech.noise_variance > 0.0)
                x += std::sqrt(mech.noise_variance) * gauss(rng);
            value[v] = x;
            reals[v][row] = x;
        }
    }

    Dataset data;
    for (NodeId v = 0; v < dag.node_count(); ++v) {
        if (model.is_discrete(v))
            data.add_categorical(dag.name(v), std::move(cats[v]),
                                 model.discrete_roots().at(v).labels);
        else
            data.add_real(dag.name(v), std::move(reals[v]));
    }
    return data;
}

}  // namespace fairdag
