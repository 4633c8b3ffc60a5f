#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "bncut/network.hpp"

namespace bncut {

/// Working copy of the network skeleton during cutset search. Tracks which
/// nodes are still live together with live parent / neighbor counts.
class ReducedGraph {
 public:
  explicit ReducedGraph(const BeliefNetwork& net);

  bool alive(NodeId id) const { return alive_[id]; }
  std::size_t live_node_count() const { return live_count_; }
  bool empty() const { return live_count_ == 0; }
  std::size_t live_neighbor_count(NodeId id) const { return neighbors_[id]; }
  std::size_t live_parent_count(NodeId id) const { return parent_count_[id]; }
  const BeliefNetwork& network() const { return *net_; }

  /// Removes a live node and its incident arcs, updating counts.
  void remove(NodeId id);

 private:
  const BeliefNetwork* net_;
  std::vector<bool> alive_;
  std::vector<std::size_t> neighbors_;
  std::vector<std::size_t> parent_count_;
  std::size_t live_count_ = 0;
};

struct CandidateScore {
  NodeId node = 0;
  std::size_t live_neighbors = 0;
  std::size_t cardinality = 0;
  friend bool operator==(const CandidateScore&, const CandidateScore&) =
      default;
};

/// Returns true when `a` is a strictly better cutset candidate than `b`.
/// The default rule is lexicographic: most live neighbors, then fewest
/// values, then smallest id.
using ScoreFn =
    std::function<bool(const CandidateScore& a, const CandidateScore& b)>;

bool default_candidate_better(const CandidateScore& a,
                              const CandidateScore& b);

struct TraceStep {
  std::vector<NodeId> pruned;                // deletion order
  std::vector<CandidateScore> candidates;    // eligible nodes, ascending id
  std::optional<NodeId> chosen;
};

struct CutsetResult {
  std::vector<NodeId> members;               // selection order
  std::vector<std::size_t> cardinalities;    // aligned with members
  std::uint64_t instantiation_count = 1;     // product of cardinalities
  std::vector<TraceStep> trace;
  std::uint64_t work = 0;                    // elementary prune/scan steps
};

/// Deletes live nodes with at most one live neighbor, FIFO worklist seeded
/// in NodeId order, until none remain. Returns deletion order.
std::vector<NodeId> prune_singly_connected(ReducedGraph& graph,
                                           std::uint64_t* work = nullptr);

/// Among live nodes with at most one live parent, picks the best candidate
/// under `better`. Requires a nonempty fully pruned graph.
NodeId select_candidate(const ReducedGraph& graph,
                        const ScoreFn& better = {},
                        std::vector<CandidateScore>* scores = nullptr,
                        std::uint64_t* work = nullptr);

/// The two-step heuristic: alternate pruning and candidate selection until
/// the reduced graph is empty.
CutsetResult find_loop_cutset(const BeliefNetwork& net,
                              const ScoreFn& better = {});

/// Assembles a CutsetResult for an explicitly chosen member list (no trace).
CutsetResult make_cutset(const BeliefNetwork& net,
                         const std::vector<NodeId>& members);

}  // namespace bncut
