#include "fairdag/graph.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

namespace fairdag {

Dag::Dag(std::vector<std::pair<std::string, bool>> node_names,
         const std::vector<std::pair<std::string, std::string>>& edges) {
    std::unordered_map<std::string, NodeId> index;
    names_.reserve(node_names.size());
    for (auto& [name, obs] : node_names) {
        if (index.count(name))
            throw DuplicateError("duplicate node name: " + name);
        index.emplace(name, static_cast<NodeId>(names_.size()));
        names_.push_back(name);
        observed_.push_back(obs);
    }
    parents_.resize(names_.size());
    children_.resize(names_.size());

    std::unordered_set<long long> seen;
    for (auto& [from, to] : edges) {
        auto fi = index.find(from);
        auto ti = index.find(to);
        if (fi == index.end())
            throw UnknownNodeError("unknown edge endpoint: " + from);
        if (ti == index.end())
            throw UnknownNodeError("unknown edge endpoint: " + to);
        NodeId u = fi->second, v = ti->second;
        if (u == v)
            throw DuplicateError("self-edge on node: " + from);
        long long key = static_cast<long long>(u) * static_cast<long long>(names_.size()) + v;
        if (!seen.insert(key).second)
            throw DuplicateError("duplicate edge: " + from + " -> " + to);
        parents_[v].push_back(u);
        children_[u].push_back(v);
        edges_.emplace_back(u, v);
    }
    compute_topo_order();
}

void Dag::compute_topo_order() {
    // Kahn's algorithm; doubles as the acyclicity check.
    std::vector<int> indeg(names_.size());
    for (NodeId v = 0; v < node_count(); ++v)
        indeg[v] = static_cast<int>(parents_[v].size());
    std::deque<NodeId> ready;
    for (NodeId v = 0; v < node_count(); ++v)
        if (indeg[v] == 0) ready.push_back(v);
    topo_.clear();
    while (!ready.empty()) {
        NodeId v = ready.front();
        ready.pop_front();
        topo_.push_back(v);
        for (NodeId c : children_[v])
            if (--indeg[c] == 0) ready.push_back(c);
    }
    if (topo_.size() != names_.size())
        throw CycleError("edge set admits a directed cycle");
}

void Dag::check_node(NodeId v) const {
    if (v < 0 || v >= node_count())
        throw UnknownNodeError("node id out of range: " + std::to_string(v));
}

NodeId Dag::index_of(const std::string& name) const {
    for (NodeId v = 0; v < node_count(); ++v)
        if (names_[v] == name) return v;
    throw UnknownNodeError("unknown node name: " + name);
}

bool Dag::has_node(const std::string& name) const {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

const std::string& Dag::name(NodeId v) const {
    check_node(v);
    return names_[v];
}

bool Dag::observed(NodeId v) const {
    check_node(v);
    return observed_[v];
}

const std::vector<NodeId>& Dag::parents(NodeId v) const {
    check_node(v);
    return parents_[v];
}

const std::vector<NodeId>& Dag::children(NodeId v) const {
    check_node(v);
    return children_[v];
}

std::vector<NodeId> Dag::ancestors(NodeId v) const {
    check_node(v);
    std::vector<bool> mark(names_.size(), false);
    std::deque<NodeId> queue(parents_[v].begin(), parents_[v].end());
    while (!queue.empty()) {
        NodeId u = queue.front();
        queue.pop_front();
        if (mark[u]) continue;
        mark[u] = true;
        for (NodeId p : parents_[u]) queue.push_back(p);
    }
    std::vector<NodeId> out;
    for (NodeId u = 0; u < node_count(); ++u)
        if (mark[u]) out.push_back(u);
    return out;
}

std::vector<NodeId> Dag::descendants(NodeId v) const {
    check_node(v);
    std::vector<bool> mark(names_.size(), false);
    std::deque<NodeId> queue(children_[v].begin(), children_[v].end());
    while (!queue.empty()) {
        NodeId u = queue.front();
        queue.pop_front();
        if (mark[u]) continue;
        mark[u] = true;
        for (NodeId c : children_[u]) queue.push_back(c);
    }
    std::vector<NodeId> out;
    for (NodeId u = 0; u < node_count(); ++u)
        if (mark[u]) out.push_back(u);
    return out;
}

NodeRelations Dag::relations(NodeId v) const {
    check_node(v);
    NodeRelations r;
    r.parents = parents_[v];
    r.ancestors = ancestors(v);
    r.descendants = descendants(v);
    r.is_root = r.ancestors.empty();
    r.is_leaf = r.descendants.empty();
    return r;
}

bool Dag::is_root(NodeId v) const { return ancestors(v).empty(); }
bool Dag::is_leaf(NodeId v) const { return descendants(v).empty(); }

bool Dag::d_separated(NodeId x, NodeId y, const std::vector<NodeId>& s) const {
    check_node(x);
    check_node(y);
    for (NodeId c : s) check_node(c);
    if (x == y)
        throw OverlapError("d-separation query requires x != y");
    for (NodeId c : s)
        if (c == x || c == y)
            throw OverlapError("conditioning set overlaps query nodes");

    std::vector<bool> in_s(names_.size(), false);
    for (NodeId c : s) in_s[c] = true;

    // Descendant-closure of s: a collider is active iff it lies in this set.
    std::vector<bool> anc_of_s(names_.size(), false);
    {
        std::deque<NodeId> queue(s.begin(), s.end());
        while (!queue.empty()) {
            NodeId v = queue.front();
            queue.pop_front();
            if (anc_of_s[v]) continue;
            anc_of_s[v] = true;
            for (NodeId p : parents_[v]) queue.push_back(p);
        }
    }

    // Active-trail reachability over (node, arrival direction) states.
    enum Dir { FromChild = 0, FromParent = 1 };
    std::vector<bool> visited(names_.size() * 2, false);
    std::deque<std::pair<NodeId, Dir>> queue;
    queue.emplace_back(x, FromChild);
    while (!queue.empty()) {
        auto [v, dir] = queue.front();
        queue.pop_front();
        if (visited[v * 2 + dir]) continue;
        visited[v * 2 + dir] = true;
        if (v == y) return false;
        if (dir == FromChild) {
            if (!in_s[v]) {
                for (NodeId p : parents_[v]) queue.emplace_back(p, FromChild);
                for (NodeId c : children_[v]) queue.emplace_back(c, FromParent);
            }
        } else {
            if (!in_s[v])
                for (NodeId c : children_[v]) queue.emplace_back(c, FromParent);
            if (anc_of_s[v])
                for (NodeId p : parents_[v]) queue.emplace_back(p, FromChild);
        }
    }
    return true;
}

Dag Dag::without_incoming(const std::vector<NodeId>& targets) const {
    std::vector<bool> cut(names_.size(), false);
    for (NodeId v : targets) {
        check_node(v);
        cut[v] = true;
    }
    std::vector<std::pair<std::string, bool>> nodes;
    nodes.reserve(names_.size());
    for (NodeId v = 0; v < node_count(); ++v)
        nodes.emplace_back(names_[v], observed_[v]);
    std::vector<std::pair<std::string, std::string>> kept;
    for (auto& [u, v] : edges_)
        if (!cut[v]) kept.emplace_back(names_[u], names_[v]);
    return Dag(std::move(nodes), kept);
}

Dag build_dag(const std::vector<std::pair<std::string, bool>>& node_names,
              const std::vector<std::pair<std::string, std::string>>& edges) {
    return Dag(node_names, edges);
}

}  // namespace fairdag
