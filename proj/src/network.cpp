#include "bncut/network.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <sstream>

namespace bncut {

namespace {
constexpr double kRowTolerance = 1e-9;
}

std::size_t Cpt::row_index(const std::vector<std::size_t>& parent_values,
                           const std::vector<std::size_t>& parent_cards) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < parent_values.size(); ++i) {
    idx = idx * parent_cards[i] + parent_values[i];
  }
  return idx;
}

const NodeDef& BeliefNetwork::node(NodeId id) const {
  if (id >= nodes_.size()) {
    fail(ErrorCode::UnknownNode, "no node with id " + std::to_string(id));
  }
  return nodes_[id];
}

std::optional<NodeId> BeliefNetwork::find_node(std::string_view name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

NodeId BeliefNetwork::node_or_fail(std::string_view name) const {
  auto id = find_node(name);
  if (!id) fail(ErrorCode::UnknownNode, "unknown node '" + std::string(name) + "'");
  return *id;
}

const std::vector<NodeId>& BeliefNetwork::parents(NodeId id) const {
  node(id);
  return parents_[id];
}

const std::vector<NodeId>& BeliefNetwork::children(NodeId id) const {
  node(id);
  return children_[id];
}

const Cpt& BeliefNetwork::cpt(NodeId id) const {
  node(id);
  return cpts_[id];
}

std::size_t BeliefNetwork::arc_index(NodeId parent, NodeId child) const {
  auto it = arc_index_.find({parent, child});
  if (it == arc_index_.end()) {
    fail(ErrorCode::DanglingArc, "no arc " + std::to_string(parent) + " -> " +
                                     std::to_string(child));
  }
  return it->second;
}

std::vector<NodeId> BeliefNetwork::undirected_neighbors(NodeId id) const {
  node(id);
  std::set<NodeId> out(parents_[id].begin(), parents_[id].end());
  out.insert(children_[id].begin(), children_[id].end());
  return {out.begin(), out.end()};
}

bool BeliefNetwork::is_singly_connected() const {
  // Acyclic skeleton <=> arc count == node count - connected components.
  std::vector<int> comp(nodes_.size(), -1);
  int components = 0;
  for (NodeId start = 0; start < nodes_.size(); ++start) {
    if (comp[start] >= 0) continue;
    ++components;
    std::deque<NodeId> queue{start};
    comp[start] = components;
    while (!queue.empty()) {
      NodeId u = queue.front();
      queue.pop_front();
      for (NodeId v : undirected_neighbors(u)) {
        if (comp[v] < 0) {
          comp[v] = components;
          queue.push_back(v);
        }
      }
    }
  }
  return arcs_.size() == nodes_.size() - static_cast<std::size_t>(components);
}

namespace {

// Reports one directed cycle by name, for the CycleDetected message.
std::string describe_cycle(const std::vector<NodeDef>& defs,
                           const std::vector<std::vector<NodeId>>& children) {
  const std::size_t n = defs.size();
  std::vector<int> state(n, 0);  // 0 unseen, 1 on stack, 2 done
  std::vector<NodeId> stack;
  std::string result;
  auto dfs = [&](auto&& self, NodeId u) -> bool {
    state[u] = 1;
    stack.push_back(u);
    for (NodeId v : children[u]) {
      if (state[v] == 1) {
        std::ostringstream os;
        auto it = std::find(stack.begin(), stack.end(), v);
        for (; it != stack.end(); ++it) os << defs[*it].name << " -> ";
        os << defs[v].name;
        result = os.str();
        return true;
      }
      if (state[v] == 0 && self(self, v)) return true;
    }
    state[u] = 2;
    stack.pop_back();
    return false;
  };
  for (NodeId u = 0; u < n; ++u) {
    if (state[u] == 0 && dfs(dfs, u)) return result;
  }
  return "";
}

}  // namespace

BeliefNetwork build_network(const std::vector<NodeDef>& defs,
                            const std::vector<ArcSpec>& arcs,
                            const std::vector<CptSpec>& cpts) {
  BeliefNetwork net;
  const std::size_t n = defs.size();

  for (NodeId id = 0; id < n; ++id) {
    const NodeDef& def = defs[id];
    if (!net.by_name_.emplace(def.name, id).second) {
      fail(ErrorCode::DuplicateName, "duplicate node name '" + def.name + "'");
    }
    if (def.values.size() < 2) {
      fail(ErrorCode::CptShapeMismatch,
           "node '" + def.name + "' needs at least 2 values");
    }
    std::set<std::string> seen;
    for (const auto& v : def.values) {
      if (!seen.insert(v).second) {
        fail(ErrorCode::DuplicateName,
             "node '" + def.name + "' repeats value '" + v + "'");
      }
    }
  }
  net.nodes_ = defs;
  net.parents_.resize(n);
  net.children_.resize(n);
  net.cpts_.resize(n);

  auto resolve = [&](const std::string& name) -> NodeId {
    auto it = net.by_name_.find(name);
    if (it == net.by_name_.end()) {
      fail(ErrorCode::DanglingArc, "arc or cpt references undeclared node '" +
                                       name + "'");
    }
    return it->second;
  };

  std::set<std::pair<NodeId, NodeId>> arc_set;
  for (const ArcSpec& a : arcs) {
    NodeId p = resolve(a.parent);
    NodeId c = resolve(a.child);
    if (p == c) {
      fail(ErrorCode::CycleDetected,
           "self-arc on node '" + defs[p].name + "'");
    }
    if (!arc_set.insert({p, c}).second) {
      fail(ErrorCode::DuplicateArc,
           "duplicate arc " + a.parent + " -> " + a.child);
    }
    net.arc_index_[{p, c}] = net.arcs_.size();
    net.arcs_.push_back({p, c});
    net.children_[p].push_back(c);
  }

  // CPTs: exactly one per node; its parent list fixes the canonical parent
  // order and must equal the node's in-neighbors as a set.
  std::vector<bool> has_cpt(n, false);
  for (const CptSpec& spec : cpts) {
    NodeId child = resolve(spec.child);
    if (has_cpt[child]) {
      fail(ErrorCode::CptShapeMismatch,
           "node '" + spec.child + "' has more than one cpt");
    }
    has_cpt[child] = true;
    Cpt cpt;
    cpt.child = child;
    std::set<NodeId> declared;
    for (const auto& pname : spec.parents) {
      NodeId p = resolve(pname);
      if (!declared.insert(p).second) {
        fail(ErrorCode::CptShapeMismatch,
             "cpt of '" + spec.child + "' repeats parent '" + pname + "'");
      }
      if (!arc_set.count({p, child})) {
        fail(ErrorCode::CptShapeMismatch, "cpt of '" + spec.child +
                                              "' lists non-parent '" + pname +
                                              "'");
      }
      cpt.parents.push_back(p);
    }
    std::size_t expected_rows = 1;
    for (NodeId p : cpt.parents) expected_rows *= defs[p].values.size();
    std::size_t in_degree = 0;
    for (const auto& [pc, idx] : net.arc_index_) {
      (void)idx;
      if (pc.second == child) ++in_degree;
    }
    if (in_degree != cpt.parents.size()) {
      fail(ErrorCode::CptShapeMismatch,
           "cpt of '" + spec.child + "' lists " +
               std::to_string(cpt.parents.size()) + " parents but node has " +
               std::to_string(in_degree));
    }
    if (spec.rows.size() != expected_rows) {
      fail(ErrorCode::CptShapeMismatch,
           "cpt of '" + spec.child + "' has " +
               std::to_string(spec.rows.size()) + " rows, expected " +
               std::to_string(expected_rows));
    }
    const std::size_t card = defs[child].values.size();
    for (std::size_t r = 0; r < spec.rows.size(); ++r) {
      const auto& row = spec.rows[r];
      if (row.size() != card) {
        fail(ErrorCode::CptShapeMismatch,
             "cpt of '" + spec.child + "' row " + std::to_string(r) +
                 " has " + std::to_string(row.size()) + " entries, expected " +
                 std::to_string(card));
      }
      double sum = 0.0;
      for (double v : row) {
        if (v < 0.0) {
          fail(ErrorCode::CptRowNotNormalized,
               "cpt of '" + spec.child + "' row " + std::to_string(r) +
                   " has a negative entry");
        }
        sum += v;
      }
      if (std::abs(sum - 1.0) > kRowTolerance) {
        fail(ErrorCode::CptRowNotNormalized,
             "cpt of '" + spec.child + "' row " + std::to_string(r) +
                 " sums to " + std::to_string(sum));
      }
    }
    cpt.rows = spec.rows;
    net.cpts_[child] = std::move(cpt);
    net.parents_[child] = net.cpts_[child].parents;
  }
  for (NodeId id = 0; id < n; ++id) {
    if (!has_cpt[id]) {
      fail(ErrorCode::CptShapeMismatch,
           "node '" + defs[id].name + "' has no cpt");
    }
  }

  // Topological order; its absence is a cycle.
  std::vector<std::size_t> in_deg(n, 0);
  for (const Arc& a : net.arcs_) ++in_deg[a.child];
  std::deque<NodeId> ready;
  for (NodeId id = 0; id < n; ++id) {
    if (in_deg[id] == 0) ready.push_back(id);
  }
  while (!ready.empty()) {
    NodeId u = ready.front();
    ready.pop_front();
    net.topo_.push_back(u);
    for (NodeId c : net.children_[u]) {
      if (--in_deg[c] == 0) ready.push_back(c);
    }
  }
  if (net.topo_.size() != n) {
    fail(ErrorCode::CycleDetected,
         "cycle: " + describe_cycle(defs, net.children_));
  }
  return net;
}

void EvidenceSet::set(const BeliefNetwork& net, NodeId node,
                      std::size_t value) {
  if (value >= net.cardinality(node)) {
    fail(ErrorCode::UnknownNode,
         "value index " + std::to_string(value) + " out of range for node '" +
             net.node(node).name + "'");
  }
  auto [it, inserted] = findings_.emplace(node, value);
  (void)it;
  if (!inserted) {
    fail(ErrorCode::AlreadyInstantiated,
         "node '" + net.node(node).name + "' already has evidence");
  }
}

std::optional<std::size_t> EvidenceSet::value(NodeId node) const {
  auto it = findings_.find(node);
  if (it == findings_.end()) return std::nullopt;
  return it->second;
}

}  // namespace bncut
