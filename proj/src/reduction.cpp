#include "bncut/reduction.hpp"

#include <algorithm>

#include "bncut/oracle.hpp"

namespace bncut {

GadgetNetwork mvc_to_mlc(const UndirectedGraph& graph) {
  validate_graph(graph);
  std::vector<NodeDef> defs;
  std::vector<ArcSpec> arcs;
  std::vector<CptSpec> cpts;
  const std::vector<std::string> tf{"t", "f"};

  for (const std::string& v : graph.vertices) {
    defs.push_back({v, tf});
    cpts.push_back({v, {}, {{0.5, 0.5}}});
  }
  // The reduction is purely structural; all tables are uninformative.
  std::vector<std::string> collider_names;
  for (auto [a, b] : graph.edges) {
    const std::string& va = graph.vertices[a];
    const std::string& vb = graph.vertices[b];
    for (const std::string suffix : {"_a", "_b"}) {
      std::string name = "e_" + va + "_" + vb + suffix;
      defs.push_back({name, tf});
      arcs.push_back({va, name});
      arcs.push_back({vb, name});
      cpts.push_back({name,
                      {va, vb},
                      {{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}}});
      collider_names.push_back(name);
    }
  }

  GadgetNetwork gadget{build_network(defs, arcs, cpts), {}, {}};
  for (const std::string& v : graph.vertices) {
    gadget.vertex_nodes.push_back(gadget.net.node_or_fail(v));
  }
  for (const std::string& name : collider_names) {
    gadget.evidence.set(gadget.net, gadget.net.node_or_fail(name), 0);  // T
  }
  return gadget;
}

ReductionReport check_reduction(const UndirectedGraph& graph) {
  ReductionReport report;
  report.min_cover = oracle::minimal_vertex_cover_exhaustive(graph);
  report.cover_size = report.min_cover.size();

  GadgetNetwork gadget = mvc_to_mlc(graph);
  std::set<NodeId> cutset = oracle::minimal_cutset_exhaustive(gadget.net);

  std::map<NodeId, std::size_t> vertex_of;
  for (std::size_t i = 0; i < gadget.vertex_nodes.size(); ++i) {
    vertex_of[gadget.vertex_nodes[i]] = i;
  }
  report.cutset_on_vertex_nodes = true;
  for (NodeId id : cutset) {
    auto it = vertex_of.find(id);
    if (it == vertex_of.end()) {
      report.cutset_on_vertex_nodes = false;
      continue;
    }
    report.min_cutset.insert(it->second);
  }
  report.cutset_size = report.min_cutset.size();

  report.cutset_is_cover = true;
  for (auto [a, b] : graph.edges) {
    if (!report.min_cutset.count(a) && !report.min_cutset.count(b)) {
      report.cutset_is_cover = false;
      break;
    }
  }
  report.sizes_match = report.cover_size == report.cutset_size;
  report.ok = report.cutset_on_vertex_nodes && report.cutset_is_cover &&
              report.sizes_match;
  return report;
}

}  // namespace bncut
