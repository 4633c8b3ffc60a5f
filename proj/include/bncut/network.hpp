#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bncut/error.hpp"

namespace bncut {

using NodeId = std::uint32_t;

/// A node declaration: name plus its ordered list of value labels.
/// Value order is canonical; CPT rows and posterior vectors index by it.
struct NodeDef {
  std::string name;
  std::vector<std::string> values;
};

struct Arc {
  NodeId parent;
  NodeId child;
  friend bool operator==(const Arc&, const Arc&) = default;
};

/// Conditional probability table of one node given its parents.
/// Rows are enumerated row-major over the parent list (first parent most
/// significant). A root has a single row: its prior.
struct Cpt {
  NodeId child = 0;
  std::vector<NodeId> parents;
  std::vector<std::vector<double>> rows;

  std::size_t row_index(const std::vector<std::size_t>& parent_values,
                        const std::vector<std::size_t>& parent_cards) const;
};

// Name-based construction inputs.
struct ArcSpec {
  std::string parent;
  std::string child;
};
struct CptSpec {
  std::string child;
  std::vector<std::string> parents;
  std::vector<std::vector<double>> rows;
};

/// Immutable validated belief network. Safe to share across threads once
/// built.
class BeliefNetwork {
 public:
  std::size_t node_count() const { return nodes_.size(); }
  const NodeDef& node(NodeId id) const;
  std::optional<NodeId> find_node(std::string_view name) const;
  NodeId node_or_fail(std::string_view name) const;
  std::size_t cardinality(NodeId id) const { return node(id).values.size(); }

  const std::vector<NodeId>& parents(NodeId id) const;
  const std::vector<NodeId>& children(NodeId id) const;
  const Cpt& cpt(NodeId id) const;
  const std::vector<Arc>& arcs() const { return arcs_; }
  std::size_t arc_index(NodeId parent, NodeId child) const;

  /// parents(id) union children(id), ascending ids.
  std::vector<NodeId> undirected_neighbors(NodeId id) const;

  /// True iff the undirected skeleton is acyclic.
  bool is_singly_connected() const;

  /// Node ids ordered so every arc goes forward.
  const std::vector<NodeId>& topological_order() const { return topo_; }

  friend BeliefNetwork build_network(const std::vector<NodeDef>& defs,
                                     const std::vector<ArcSpec>& arcs,
                                     const std::vector<CptSpec>& cpts);

 private:
  BeliefNetwork() = default;

  std::vector<NodeDef> nodes_;
  std::vector<Arc> arcs_;
  std::vector<Cpt> cpts_;                    // one per node
  std::vector<std::vector<NodeId>> parents_;  // declared (CPT) order
  std::vector<std::vector<NodeId>> children_;
  std::map<std::string, NodeId, std::less<>> by_name_;
  std::map<std::pair<NodeId, NodeId>, std::size_t> arc_index_;
  std::vector<NodeId> topo_;
};

/// Validates and assembles a network; dense NodeIds follow declaration
/// order. Throws Error on any malformed input.
BeliefNetwork build_network(const std::vector<NodeDef>& defs,
                            const std::vector<ArcSpec>& arcs,
                            const std::vector<CptSpec>& cpts);

/// Observed findings: node -> value index, each node at most once.
class EvidenceSet {
 public:
  void set(const BeliefNetwork& net, NodeId node, std::size_t value);
  std::optional<std::size_t> value(NodeId node) const;
  const std::map<NodeId, std::size_t>& findings() const { return findings_; }
  bool empty() const { return findings_.empty(); }

 private:
  std::map<NodeId, std::size_t> findings_;
};

}  // namespace bncut
