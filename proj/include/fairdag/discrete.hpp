#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairdag/graph.hpp"

namespace fairdag {

inline constexpr std::size_t kDefaultSizeCap = 10'000'000;

/// Dense table over the cartesian product of the listed variables' domains.
/// Cell index is mixed-radix with the first variable most significant.
struct JointTable {
    std::vector<NodeId> variables;
    std::vector<std::size_t> cards;
    std::vector<double> probabilities;

    std::size_t cell_count() const { return probabilities.size(); }
    std::size_t index_of(const std::vector<std::size_t>& assignment) const;
};

/// Finite-domain PDAG model: a Dag plus per-node CPTs.
/// CPT rows are indexed by the mixed-radix parent configuration (parents in
/// declared edge order, first parent most significant); roots have one row.
class DiscreteModel {
public:
    DiscreteModel(Dag dag,
                  std::vector<std::vector<std::string>> domains,
                  std::vector<std::vector<std::vector<double>>> cpts);

    const Dag& dag() const { return dag_; }
    const std::vector<std::string>& domain(NodeId v) const { return domains_[v]; }
    const std::vector<std::vector<double>>& cpt(NodeId v) const { return cpts_[v]; }
    std::size_t label_index(NodeId v, const std::string& label) const;

private:
    Dag dag_;
    std::vector<std::vector<std::string>> domains_;
    std::vector<std::vector<std::vector<double>>> cpts_;
};

JointTable joint_distribution(const DiscreteModel& model,
                              std::size_t size_cap = kDefaultSizeCap);

/// Normalized conditional-marginal table over `targets` given the evidence.
JointTable query(const JointTable& joint, const std::vector<NodeId>& targets,
                 const std::vector<std::pair<NodeId, std::size_t>>& given);

/// Worst-case cell gap |P(x,y|s) - P(x|s)P(y|s)| over positive-mass s-configs.
double ci_gap(const DiscreteModel& model, NodeId x, NodeId y,
              const std::vector<NodeId>& s, std::size_t size_cap = kDefaultSizeCap);

bool conditional_independent(const DiscreteModel& model, NodeId x, NodeId y,
                             const std::vector<NodeId>& s, double tol,
                             std::size_t size_cap = kDefaultSizeCap);

struct FaithfulnessViolation {
    NodeId x;
    NodeId y;
    std::vector<NodeId> s;
    bool d_connected = true;
    bool independent = true;
};

/// Every d-connected triple that is nonetheless conditionally independent at
/// tol. Empty result means the model is faithful at tol.
std::vector<FaithfulnessViolation> faithfulness_report(const DiscreteModel& model,
                                                       double tol,
                                                       std::size_t size_cap = kDefaultSizeCap);

struct Dataset;  // gaussian.hpp

Dataset sample(const DiscreteModel& model, std::size_t n, std::uint64_t seed);

}  // namespace fairdag
