#include "bncut/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace bncut {

void validate_graph(const UndirectedGraph& g) {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (auto [a, b] : g.edges) {
    if (a >= g.vertices.size() || b >= g.vertices.size()) {
      fail(ErrorCode::DanglingArc, "edge references unknown vertex");
    }
    if (a == b) fail(ErrorCode::DuplicateArc, "self-edge is not allowed");
    auto key = std::minmax(a, b);
    if (!seen.insert(key).second) {
      fail(ErrorCode::DuplicateArc, "duplicate edge");
    }
  }
}

namespace oracle {

std::pair<std::vector<NodeId>, std::vector<NodeId>> Loop::pathways(
    NodeId x, NodeId y) const {
  auto ix = std::find(cycle.begin(), cycle.end(), x);
  auto iy = std::find(cycle.begin(), cycle.end(), y);
  if (ix == cycle.end() || iy == cycle.end() || x == y) {
    fail(ErrorCode::UnknownNode, "pathway endpoints must be on the loop");
  }
  std::size_t px = static_cast<std::size_t>(ix - cycle.begin());
  std::size_t py = static_cast<std::size_t>(iy - cycle.begin());
  std::vector<NodeId> forward, backward;
  for (std::size_t i = px;; i = (i + 1) % cycle.size()) {
    forward.push_back(cycle[i]);
    if (i == py) break;
  }
  for (std::size_t i = px;; i = (i + cycle.size() - 1) % cycle.size()) {
    backward.push_back(cycle[i]);
    if (i == py) break;
  }
  return {forward, backward};
}

PosteriorTable joint_enumeration_posterior(const BeliefNetwork& net,
                                           const EvidenceSet& evidence,
                                           const std::vector<NodeId>& queries,
                                           const Caps& caps) {
  const std::size_t n = net.node_count();
  std::uint64_t states = 1;
  for (NodeId id = 0; id < n; ++id) {
    states *= net.cardinality(id);
    if (states > caps.max_joint_states) {
      fail(ErrorCode::StateSpaceTooLarge,
           "joint state space exceeds the oracle cap");
    }
  }

  PosteriorTable table;
  for (NodeId q : queries) {
    net.node(q);
    table.posterior[q] = std::vector<double>(net.cardinality(q), 0.0);
  }

  std::vector<std::size_t> assignment(n, 0);
  // Evidence digits stay clamped; only free nodes enumerate.
  std::vector<NodeId> free_nodes;
  for (NodeId id = 0; id < n; ++id) {
    if (auto v = evidence.value(id)) {
      assignment[id] = *v;
    } else {
      free_nodes.push_back(id);
    }
  }

  double total = 0.0;
  bool more = true;
  while (more) {
    double weight = 1.0;
    for (NodeId id = 0; id < n && weight > 0.0; ++id) {
      const Cpt& cpt = net.cpt(id);
      std::size_t row = 0;
      for (NodeId p : cpt.parents) {
        row = row * net.cardinality(p) + assignment[p];
      }
      weight *= cpt.rows[row][assignment[id]];
    }
    total += weight;
    if (weight > 0.0) {
      for (auto& [q, vec] : table.posterior) vec[assignment[q]] += weight;
    }
    more = false;
    for (std::size_t i = free_nodes.size(); i-- > 0;) {
      NodeId id = free_nodes[i];
      if (++assignment[id] < net.cardinality(id)) {
        more = true;
        break;
      }
      assignment[id] = 0;
    }
  }

  if (total <= 0.0) {
    fail(ErrorCode::ImpossibleEvidence, "evidence has probability zero");
  }
  table.p_evidence = total;
  for (auto& [q, vec] : table.posterior) {
    (void)q;
    for (double& v : vec) v /= total;
  }
  return table;
}

std::vector<Loop> enumerate_loops(const BeliefNetwork& net, const Caps& caps) {
  const std::size_t n = net.node_count();
  if (n > caps.max_loop_nodes) {
    fail(ErrorCode::StateSpaceTooLarge,
         "too many nodes for exhaustive loop enumeration");
  }
  std::vector<std::vector<NodeId>> adj(n);
  for (NodeId id = 0; id < n; ++id) adj[id] = net.undirected_neighbors(id);

  std::vector<Loop> loops;
  std::vector<NodeId> path;
  std::vector<bool> on_path(n, false);

  // Cycles are emitted with their smallest node first; requiring the second
  // node to be smaller than the last removes the reflected duplicate.
  auto dfs = [&](auto&& self, NodeId start, NodeId u) -> void {
    for (NodeId v : adj[u]) {
      if (v == start && path.size() >= 3) {
        if (path[1] < path.back()) loops.push_back(Loop{path});
        continue;
      }
      if (v <= start || on_path[v]) continue;
      path.push_back(v);
      on_path[v] = true;
      self(self, start, v);
      on_path[v] = false;
      path.pop_back();
    }
  };
  for (NodeId start = 0; start < n; ++start) {
    path = {start};
    on_path.assign(n, false);
    on_path[start] = true;
    dfs(dfs, start, start);
  }
  return loops;
}

namespace {

// Loop members eligible to satisfy the cutset condition: at most one parent
// within the loop's node set.
std::set<NodeId> eligible_members(const BeliefNetwork& net, const Loop& loop) {
  std::set<NodeId> nodes = loop.node_set();
  std::set<NodeId> eligible;
  for (NodeId id : nodes) {
    std::size_t in_loop_parents = 0;
    for (NodeId p : net.parents(id)) {
      if (nodes.count(p)) ++in_loop_parents;
    }
    if (in_loop_parents <= 1) eligible.insert(id);
  }
  return eligible;
}

}  // namespace

CutsetCheck verify_cutset_condition(const BeliefNetwork& net,
                                    const std::set<NodeId>& cutset,
                                    const Caps& caps) {
  CutsetCheck check;
  for (const Loop& loop : enumerate_loops(net, caps)) {
    std::set<NodeId> nodes = loop.node_set();
    bool has_member = false;
    bool satisfied = false;
    std::set<NodeId> eligible = eligible_members(net, loop);
    for (NodeId id : nodes) {
      if (!cutset.count(id)) continue;
      has_member = true;
      if (eligible.count(id)) {
        satisfied = true;
        break;
      }
    }
    if (!satisfied) {
      check.ok = false;
      check.violating_loop = loop;
      check.reason = has_member ? CutsetViolation::MemberHasTwoLoopParents
                                : CutsetViolation::NoMemberInLoop;
      return check;
    }
  }
  return check;
}

std::set<NodeId> minimal_cutset_exhaustive(const BeliefNetwork& net,
                                           const Caps& caps) {
  const std::size_t n = net.node_count();
  if (n > 16) {
    fail(ErrorCode::StateSpaceTooLarge,
         "too many nodes for exhaustive cutset search");
  }
  std::vector<Loop> loops = enumerate_loops(net, caps);
  std::vector<std::uint32_t> eligible_masks;
  eligible_masks.reserve(loops.size());
  for (const Loop& loop : loops) {
    std::uint32_t mask = 0;
    for (NodeId id : eligible_members(net, loop)) mask |= 1u << id;
    eligible_masks.push_back(mask);
  }

  auto members_of = [&](std::uint32_t mask) {
    std::set<NodeId> out;
    for (NodeId id = 0; id < n; ++id) {
      if (mask & (1u << id)) out.insert(id);
    }
    return out;
  };

  std::optional<std::uint32_t> best;
  double best_product = 0.0;
  const std::uint32_t limit = n >= 32 ? 0xffffffffu : (1u << n);
  for (std::uint32_t mask = 0;; ++mask) {
    bool valid = true;
    for (std::uint32_t em : eligible_masks) {
      if ((mask & em) == 0) {
        valid = false;
        break;
      }
    }
    if (valid) {
      double product = 1.0;
      for (NodeId id = 0; id < n; ++id) {
        if (mask & (1u << id)) product *= net.cardinality(id);
      }
      bool take = false;
      if (!best || product < best_product) {
        take = true;
      } else if (product == best_product) {
        std::set<NodeId> cur = members_of(mask);
        std::set<NodeId> prev = members_of(*best);
        take = std::lexicographical_compare(cur.begin(), cur.end(),
                                            prev.begin(), prev.end());
      }
      if (take) {
        best = mask;
        best_product = product;
      }
    }
    if (mask + 1 == limit) break;
  }
  // The full node set always satisfies the condition when every loop has an
  // eligible member; otherwise no cutset exists at all.
  if (!best) {
    fail(ErrorCode::NoEligibleCandidate,
         "some loop has no node with at most one in-loop parent");
  }
  return members_of(*best);
}

std::set<std::size_t> minimal_vertex_cover_exhaustive(
    const UndirectedGraph& graph, const Caps& caps) {
  (void)caps;
  validate_graph(graph);
  const std::size_t n = graph.vertices.size();
  if (n > 16) {
    fail(ErrorCode::StateSpaceTooLarge,
         "too many vertices for exhaustive cover search");
  }
  std::optional<std::uint32_t> best;
  const std::uint32_t limit = n >= 32 ? 0xffffffffu : (1u << n);
  auto members_of = [&](std::uint32_t mask) {
    std::set<std::size_t> out;
    for (std::size_t v = 0; v < n; ++v) {
      if (mask & (1u << v)) out.insert(v);
    }
    return out;
  };
  for (std::uint32_t mask = 0;; ++mask) {
    bool covers = true;
    for (auto [a, b] : graph.edges) {
      if (!(mask & (1u << a)) && !(mask & (1u << b))) {
        covers = false;
        break;
      }
    }
    if (covers) {
      bool take = false;
      if (!best) {
        take = true;
      } else {
        int cur = std::popcount(mask);
        int prev = std::popcount(*best);
        if (cur < prev) {
          take = true;
        } else if (cur == prev) {
          auto cm = members_of(mask);
          auto pm = members_of(*best);
          take = std::lexicographical_compare(cm.begin(), cm.end(),
                                              pm.begin(), pm.end());
        }
      }
      if (take) best = mask;
    }
    if (mask + 1 == limit) break;
  }
  return members_of(*best);
}

}  // namespace oracle
}  // namespace bncut
