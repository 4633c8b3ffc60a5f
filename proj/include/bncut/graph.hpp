#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bncut/error.hpp"

namespace bncut {

/// Plain undirected graph for the vertex-cover side of the reduction.
struct UndirectedGraph {
  std::vector<std::string> vertices;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // index pairs

  friend bool operator==(const UndirectedGraph&, const UndirectedGraph&) =
      default;
};

/// Validates vertex indices and rejects self-edges and duplicates.
void validate_graph(const UndirectedGraph& g);

}  // namespace bncut
