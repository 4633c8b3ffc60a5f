#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bncut/graph.hpp"
#include "bncut/network.hpp"

namespace bncut {

/// Parsed form of the network text format. CPT rows are normalized to
/// canonical row-major order, so print/parse round-trips are stable.
struct NetworkDocument {
  std::vector<NodeDef> nodes;
  std::vector<ArcSpec> arcs;
  std::vector<CptSpec> cpts;
  std::vector<std::pair<std::string, std::string>> evidence;  // node, label

  friend bool operator==(const NetworkDocument& a, const NetworkDocument& b);
};

/// Parses the line-oriented network format ('#' comments, declarations
/// before references). Errors carry line:column positions.
NetworkDocument parse_network(const std::string& text);

std::string print_network(const NetworkDocument& doc);

BeliefNetwork document_to_network(const NetworkDocument& doc);
EvidenceSet document_evidence(const NetworkDocument& doc,
                              const BeliefNetwork& net);

/// Undirected-graph format: 'vertex NAME' and 'edge A -- B' lines.
UndirectedGraph parse_graph(const std::string& text);
std::string print_graph(const UndirectedGraph& graph);

}  // namespace bncut
