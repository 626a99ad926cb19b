#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fairdag/dataset.hpp"
#include "fairdag/graph.hpp"

namespace fairdag {

struct DiscreteRoot {
    std::vector<std::string> labels;
    std::vector<double> probs;
};

/// Linear mechanism of one continuous node under one discrete-root
/// configuration: v = intercept + sum(coef * parent) + N(0, noise_variance).
struct Mechanism {
    double intercept = 0.0;
    std::vector<std::pair<NodeId, double>> coefficients;
    double noise_variance = 0.0;
};

struct JointGaussian {
    std::vector<NodeId> variables;
    std::vector<double> mean;
    std::vector<std::vector<double>> covariance;
};

/// Linear-Gaussian structural model whose discrete variables are roots with
/// categorical distributions; continuous mechanisms may vary per discrete
/// configuration (config key = comma-joined root labels in declaration order,
/// "" matches every configuration).
class GaussianLinearModel {
public:
    GaussianLinearModel(Dag dag, std::map<NodeId, DiscreteRoot> discrete_roots,
                        std::map<NodeId, std::map<std::string, Mechanism>> mechanisms);

    const Dag& dag() const { return dag_; }
    const std::map<NodeId, DiscreteRoot>& discrete_roots() const { return discrete_roots_; }
    const std::map<NodeId, std::map<std::string, Mechanism>>& mechanisms() const {
        return mechanisms_;
    }
    bool is_discrete(NodeId v) const { return discrete_roots_.count(v) > 0; }
    std::vector<NodeId> continuous_nodes() const;

    std::string config_key(const std::map<NodeId, std::string>& config) const;
    const Mechanism& mechanism(NodeId v, const std::string& key) const;

private:
    Dag dag_;
    std::map<NodeId, DiscreteRoot> discrete_roots_;
    std::map<NodeId, std::map<std::string, Mechanism>> mechanisms_;
};

/// Exact mean/covariance of the continuous nodes under one discrete-root
/// configuration, by topological linear propagation.
JointGaussian joint_gaussian(const GaussianLinearModel& model,
                             const std::map<NodeId, std::string>& config);

/// Standard Gaussian conditioning via the Schur complement.
JointGaussian conditional_gaussian(const JointGaussian& joint,
                                   const std::vector<NodeId>& targets,
                                   const std::vector<std::pair<NodeId, double>>& given);

/// Ancestral sampling; identical (model, n, seed) gives identical output.
/// For concurrent sampling derive distinct seeds as seed_i = base_seed + i.
Dataset sample(const GaussianLinearModel& model, std::size_t n, std::uint64_t seed);

}  // namespace fairdag
