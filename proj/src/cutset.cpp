#include "bncut/cutset.hpp"

#include <deque>

namespace bncut {

ReducedGraph::ReducedGraph(const BeliefNetwork& net)
    : net_(&net),
      alive_(net.node_count(), true),
      neighbors_(net.node_count(), 0),
      parent_count_(net.node_count(), 0),
      live_count_(net.node_count()) {
  for (NodeId id = 0; id < net.node_count(); ++id) {
    neighbors_[id] = net.undirected_neighbors(id).size();
    parent_count_[id] = net.parents(id).size();
  }
}

void ReducedGraph::remove(NodeId id) {
  if (!alive_[id]) return;
  alive_[id] = false;
  --live_count_;
  for (NodeId c : net_->children(id)) {
    if (alive_[c]) {
      --neighbors_[c];
      --parent_count_[c];
    }
  }
  for (NodeId p : net_->parents(id)) {
    if (alive_[p]) --neighbors_[p];
  }
}

bool default_candidate_better(const CandidateScore& a,
                              const CandidateScore& b) {
  if (a.live_neighbors != b.live_neighbors) {
    return a.live_neighbors > b.live_neighbors;
  }
  if (a.cardinality != b.cardinality) return a.cardinality < b.cardinality;
  return a.node < b.node;
}

std::vector<NodeId> prune_singly_connected(ReducedGraph& graph,
                                           std::uint64_t* work) {
  const BeliefNetwork& net = graph.network();
  std::vector<NodeId> order;
  std::deque<NodeId> queue;
  std::vector<bool> queued(net.node_count(), false);
  for (NodeId id = 0; id < net.node_count(); ++id) {
    if (graph.alive(id) && graph.live_neighbor_count(id) <= 1) {
      queue.push_back(id);
      queued[id] = true;
    }
    if (work) ++*work;
  }
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop_front();
    queued[u] = false;
    if (work) ++*work;
    if (!graph.alive(u) || graph.live_neighbor_count(u) > 1) continue;
    graph.remove(u);
    order.push_back(u);
    // Follow the deleted node's arcs: an ex-neighbor may now qualify.
    for (NodeId v : net.undirected_neighbors(u)) {
      if (work) ++*work;
      if (graph.alive(v) && graph.live_neighbor_count(v) <= 1 && !queued[v]) {
        queue.push_back(v);
        queued[v] = true;
      }
    }
  }
  return order;
}

NodeId select_candidate(const ReducedGraph& graph, const ScoreFn& better,
                        std::vector<CandidateScore>* scores,
                        std::uint64_t* work) {
  const BeliefNetwork& net = graph.network();
  const ScoreFn& cmp = better ? better : ScoreFn(default_candidate_better);
  std::optional<CandidateScore> best;
  for (NodeId id = 0; id < net.node_count(); ++id) {
    if (work) ++*work;
    if (!graph.alive(id)) continue;
    if (graph.live_parent_count(id) > 1) continue;
    CandidateScore score{id, graph.live_neighbor_count(id),
                         net.cardinality(id)};
    if (scores) scores->push_back(score);
    if (!best || cmp(score, *best)) best = score;
  }
  if (!best) {
    fail(ErrorCode::NoEligibleCandidate,
         "every remaining node has two or more live parents");
  }
  return best->node;
}

CutsetResult find_loop_cutset(const BeliefNetwork& net,
                              const ScoreFn& better) {
  ReducedGraph graph(net);
  CutsetResult result;
  while (true) {
    TraceStep step;
    step.pruned = prune_singly_connected(graph, &result.work);
    if (graph.empty()) {
      result.trace.push_back(std::move(step));
      break;
    }
    NodeId chosen =
        select_candidate(graph, better, &step.candidates, &result.work);
    step.chosen = chosen;
    result.trace.push_back(std::move(step));
    graph.remove(chosen);
    result.members.push_back(chosen);
    result.cardinalities.push_back(net.cardinality(chosen));
    result.instantiation_count *= net.cardinality(chosen);
  }
  return result;
}

CutsetResult make_cutset(const BeliefNetwork& net,
                         const std::vector<NodeId>& members) {
  CutsetResult result;
  for (NodeId id : members) {
    result.members.push_back(id);
    result.cardinalities.push_back(net.cardinality(id));
    result.instantiation_count *= net.cardinality(id);
  }
  return result;
}

}  // namespace bncut
