#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "bncut/graph.hpp"
#include "bncut/network.hpp"

namespace bncut {
namespace oracle {

/// Per-node posterior vectors, each summing to 1.
struct PosteriorTable {
  std::map<NodeId, std::vector<double>> posterior;
  double p_evidence = 1.0;
};

/// A simple undirected cycle, stored as the canonical node sequence
/// (smallest id first, direction fixed by the smaller second vertex).
struct Loop {
  std::vector<NodeId> cycle;

  std::set<NodeId> node_set() const {
    return {cycle.begin(), cycle.end()};
  }
  /// Splits the cycle into its two endpoint-to-endpoint pathways; x and y
  /// must both lie on the cycle. Each pathway includes both endpoints.
  std::pair<std::vector<NodeId>, std::vector<NodeId>> pathways(
      NodeId x, NodeId y) const;
};

struct Caps {
  std::uint64_t max_joint_states = std::uint64_t{1} << 24;
  std::size_t max_loop_nodes = 16;
};

/// Ground truth by full joint enumeration: sums CPT-factor products over
/// every assignment consistent with the evidence.
PosteriorTable joint_enumeration_posterior(const BeliefNetwork& net,
                                           const EvidenceSet& evidence,
                                           const std::vector<NodeId>& queries,
                                           const Caps& caps = {});

/// All simple undirected cycles of the skeleton, deduplicated up to
/// rotation and reflection.
std::vector<Loop> enumerate_loops(const BeliefNetwork& net,
                                  const Caps& caps = {});

enum class CutsetViolation { None, NoMemberInLoop, MemberHasTwoLoopParents };

struct CutsetCheck {
  bool ok = true;
  std::optional<Loop> violating_loop;
  CutsetViolation reason = CutsetViolation::None;
};

/// True iff every loop contains a cutset member with at most one parent
/// inside that loop's node set.
CutsetCheck verify_cutset_condition(const BeliefNetwork& net,
                                    const std::set<NodeId>& cutset,
                                    const Caps& caps = {});

/// Exhaustive search for the cutset minimizing the product of member
/// cardinalities; ties broken by the lexicographically smallest sorted
/// member list.
std::set<NodeId> minimal_cutset_exhaustive(const BeliefNetwork& net,
                                           const Caps& caps = {});

/// Exhaustive minimum-cardinality vertex cover; ties lexicographic.
std::set<std::size_t> minimal_vertex_cover_exhaustive(
    const UndirectedGraph& graph, const Caps& caps = {});

}  // namespace oracle
}  // namespace bncut
