#pragma once

#include <set>
#include <vector>

#include "bncut/graph.hpp"
#include "bncut/network.hpp"

namespace bncut {

/// Gadget network built from an undirected graph: one binary node per
/// vertex, and per edge two instantiated binary colliders sharing the two
/// endpoint nodes as parents, so every edge induces exactly one loop whose
/// only eligible cutset members are the endpoints.
struct GadgetNetwork {
  BeliefNetwork net;
  EvidenceSet evidence;               // both colliders of every edge, = T
  std::vector<NodeId> vertex_nodes;   // aligned with the input vertex list
};

GadgetNetwork mvc_to_mlc(const UndirectedGraph& graph);

struct ReductionReport {
  std::set<std::size_t> min_cover;       // vertex indices
  std::set<std::size_t> min_cutset;      // minimal gadget cutset, as vertex
                                         // indices (must lie on vertex nodes)
  std::size_t cover_size = 0;
  std::size_t cutset_size = 0;
  bool cutset_on_vertex_nodes = false;
  bool cutset_is_cover = false;
  bool sizes_match = false;
  bool ok = false;
};

/// Empirically confirms that minimal gadget cutsets are minimum vertex
/// covers of the source graph.
ReductionReport check_reduction(const UndirectedGraph& graph);

}  // namespace bncut
