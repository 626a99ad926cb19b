#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fairdag/criteria.hpp"
#include "fairdag/discrete.hpp"
#include "fairdag/gaussian.hpp"

namespace fairdag {

/// do()-style assignment: node -> category label (discrete) or real value.
struct Intervention {
    std::map<NodeId, std::string> discrete_assignments;
    std::map<NodeId, double> continuous_assignments;
};

/// Graph mutilation: incoming edges of each assigned node are removed and its
/// distribution becomes a point mass at the assigned value.
DiscreteModel intervene(const DiscreteModel& model, const Intervention& iv);
GaussianLinearModel intervene(const GaussianLinearModel& model, const Intervention& iv);

struct Unidentifiable {
    std::string reason;
};

using DoResult = std::variant<JointTable, Unidentifiable>;

/// Target's marginal in the mutilated model, or Unidentifiable under the
/// conservative rule: some intervened node still influences the target in the
/// mutilated graph while an unblocked backdoor path through an unobserved
/// node links it to the target in the original graph.
DoResult do_distribution(const DiscreteModel& model, NodeId target,
                         const Intervention& iv,
                         std::size_t size_cap = kDefaultSizeCap);

/// Controlled-direct-effect equality: P(r | do(a), do(mediators = x)) equal
/// across levels of `a` for every mediator configuration x.
CriterionReport cde_equal(const DiscreteModel& model, NodeId r, NodeId a,
                          const std::vector<NodeId>& mediators, double tol,
                          std::size_t size_cap = kDefaultSizeCap);

/// Total-effect equality: P(r | do(a)) equal across levels of `a`.
CriterionReport te_equal(const DiscreteModel& model, NodeId r, NodeId a, double tol,
                         std::size_t size_cap = kDefaultSizeCap);

/// Gaussian variant: total-effect equality decided by comparing the target's
/// first two moments across levels of the intervened discrete root.
CriterionReport te_equal(const GaussianLinearModel& model, NodeId r, NodeId a,
                         double tol);

}  // namespace fairdag
