#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fairdag/errors.hpp"

namespace fairdag {

// Dense handle assigned in declaration order.
using NodeId = int;

struct NodeRelations {
    std::vector<NodeId> parents;
    std::vector<NodeId> ancestors;
    std::vector<NodeId> descendants;
    bool is_root = false;
    bool is_leaf = false;
};

/// Immutable directed acyclic graph with observed/unobserved marking.
/// Acyclicity, duplicate edges and unknown endpoints are rejected at
/// construction; all queries are pure and safe for concurrent readers.
class Dag {
public:
    Dag() = default;
    Dag(std::vector<std::pair<std::string, bool>> node_names,
        const std::vector<std::pair<std::string, std::string>>& edges);

    int node_count() const { return static_cast<int>(names_.size()); }
    NodeId index_of(const std::string& name) const;
    bool has_node(const std::string& name) const;
    const std::string& name(NodeId v) const;
    bool observed(NodeId v) const;

    const std::vector<NodeId>& parents(NodeId v) const;
    const std::vector<NodeId>& children(NodeId v) const;
    const std::vector<std::pair<NodeId, NodeId>>& edges() const { return edges_; }
    const std::vector<NodeId>& topological_order() const { return topo_; }

    std::vector<NodeId> ancestors(NodeId v) const;
    std::vector<NodeId> descendants(NodeId v) const;
    NodeRelations relations(NodeId v) const;
    bool is_root(NodeId v) const;
    bool is_leaf(NodeId v) const;

    /// Reachability-based d-separation decision (no path enumeration).
    bool d_separated(NodeId x, NodeId y, const std::vector<NodeId>& s) const;

    /// New graph with the incoming edges of each listed node removed.
    Dag without_incoming(const std::vector<NodeId>& targets) const;

private:
    void check_node(NodeId v) const;
    void compute_topo_order();

    std::vector<std::string> names_;
    std::vector<bool> observed_;
    std::vector<std::vector<NodeId>> parents_;
    std::vector<std::vector<NodeId>> children_;
    std::vector<std::pair<NodeId, NodeId>> edges_;
    std::vector<NodeId> topo_;
};

Dag build_dag(const std::vector<std::pair<std::string, bool>>& node_names,
              const std::vector<std::pair<std::string, std::string>>& edges);

}  // namespace fairdag
