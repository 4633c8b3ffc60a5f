#include "bncut/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bncut/conditioning.hpp"
#include "bncut/cutset.hpp"
#include "bncut/format.hpp"
#include "bncut/oracle.hpp"
#include "bncut/propagation.hpp"
#include "bncut/reduction.hpp"

namespace bncut {

namespace {

constexpr const char* kUsage =
    "usage: bncut <command> [options]\n"
    "commands:\n"
    "  validate FILE\n"
    "  cutset FILE [--trace]\n"
    "  infer FILE --query N[,N...] [--evidence N=v ...]"
    " [--max-instantiations K]\n"
    "  oracle FILE [--query N[,N...]] [--evidence N=v ...]\n"
    "  compare FILE [--evidence N=v ...] [--max-instantiations K]\n"
    "  reduce-mvc GRAPHFILE -o NETFILE\n"
    "  check-reduction GRAPHFILE\n";

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Usage:
      return 1;
    case ErrorCode::SyntaxError:
    case ErrorCode::UnknownNodeReference:
    case ErrorCode::DuplicateDeclaration:
    case ErrorCode::CycleDetected:
    case ErrorCode::DuplicateName:
    case ErrorCode::DanglingArc:
    case ErrorCode::DuplicateArc:
    case ErrorCode::CptShapeMismatch:
    case ErrorCode::CptRowNotNormalized:
    case ErrorCode::UnknownNode:
    case ErrorCode::AlreadyInstantiated:
      return 2;
    default:
      return 3;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(ErrorCode::SyntaxError, "cannot read file '" + path + "'");
  }
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct Options {
  std::string file;
  std::vector<std::string> queries;
  std::vector<std::pair<std::string, std::string>> evidence;
  std::uint64_t max_instantiations;
  bool trace = false;
  std::string output;
};

std::uint64_t default_budget() {
  if (const char* env = std::getenv("BNCUT_MAX_INST")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
    fail(ErrorCode::Usage, "BNCUT_MAX_INST is not a positive integer");
  }
  return std::uint64_t{1} << 20;
}

Options parse_options(const std::vector<std::string>& args) {
  Options opts;
  opts.max_instantiations = default_budget();
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& arg = args[i];
    auto need_value = [&]() -> const std::string& {
      if (i + 1 >= args.size()) {
        fail(ErrorCode::Usage, "missing value for " + arg);
      }
      return args[++i];
    };
    if (arg == "--trace") {
      opts.trace = true;
    } else if (arg == "--query") {
      std::stringstream ss(need_value());
      std::string name;
      while (std::getline(ss, name, ',')) {
        if (!name.empty()) opts.queries.push_back(name);
      }
    } else if (arg == "--evidence") {
      const std::string& spec = need_value();
      auto eq = spec.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
        fail(ErrorCode::Usage, "evidence must be NODE=value, got '" + spec +
                                   "'");
      }
      opts.evidence.emplace_back(spec.substr(0, eq), spec.substr(eq + 1));
    } else if (arg == "--max-instantiations") {
      const std::string& v = need_value();
      char* end = nullptr;
      unsigned long long parsed = std::strtoull(v.c_str(), &end, 10);
      if (!end || *end != '\0' || parsed == 0) {
        fail(ErrorCode::Usage, "--max-instantiations needs a positive count");
      }
      opts.max_instantiations = parsed;
    } else if (arg == "-o") {
      opts.output = need_value();
    } else if (!arg.empty() && arg[0] == '-') {
      fail(ErrorCode::Usage, "unknown option " + arg);
    } else if (opts.file.empty()) {
      opts.file = arg;
    } else {
      fail(ErrorCode::Usage, "unexpected argument " + arg);
    }
  }
  if (opts.file.empty()) fail(ErrorCode::Usage, "missing input file");
  return opts;
}

struct LoadedNetwork {
  NetworkDocument doc;
  BeliefNetwork net;
  EvidenceSet evidence;
};

LoadedNetwork load_network(const Options& opts) {
  NetworkDocument doc = parse_network(read_file(opts.file));
  BeliefNetwork net = document_to_network(doc);
  EvidenceSet evidence = document_evidence(doc, net);
  for (const auto& [name, label] : opts.evidence) {
    NodeId id = net.node_or_fail(name);
    const auto& values = net.node(id).values;
    auto it = std::find(values.begin(), values.end(), label);
    if (it == values.end()) {
      fail(ErrorCode::UnknownNode,
           "node '" + name + "' has no value '" + label + "'");
    }
    evidence.set(net, id, static_cast<std::size_t>(it - values.begin()));
  }
  return LoadedNetwork{std::move(doc), std::move(net), std::move(evidence)};
}

std::vector<NodeId> resolve_queries(const BeliefNetwork& net,
                                    const Options& opts, bool default_all) {
  std::vector<NodeId> queries;
  if (opts.queries.empty()) {
    if (!default_all) fail(ErrorCode::Usage, "--query is required");
    for (NodeId id = 0; id < net.node_count(); ++id) queries.push_back(id);
    return queries;
  }
  std::set<NodeId> seen;
  for (const std::string& name : opts.queries) {
    NodeId id = net.node_or_fail(name);
    if (seen.insert(id).second) queries.push_back(id);
  }
  std::sort(queries.begin(), queries.end());
  return queries;
}

void print_posterior_line(std::ostream& out, const BeliefNetwork& net,
                          NodeId node, const std::vector<double>& p) {
  out << net.node(node).name << ":";
  for (std::size_t v = 0; v < p.size(); ++v) {
    out << " " << net.node(node).values[v] << "="
        << std::fixed << std::setprecision(9) << p[v];
  }
  out << "\n";
}

void print_cutset(std::ostream& out, const BeliefNetwork& net,
                  const CutsetResult& cutset, bool trace) {
  if (trace) {
    for (const TraceStep& step : cutset.trace) {
      if (!step.pruned.empty()) {
        out << "prune:";
        for (NodeId id : step.pruned) out << " " << net.node(id).name;
        out << "\n";
      }
      if (step.chosen) {
        out << "candidates:";
        for (const CandidateScore& c : step.candidates) {
          out << " " << net.node(c.node).name << "(neighbors="
              << c.live_neighbors << ",values=" << c.cardinality << ")";
        }
        out << "\n";
        out << "select: " << net.node(*step.chosen).name << "\n";
      }
    }
  }
  out << "cutset:";
  for (NodeId id : cutset.members) out << " " << net.node(id).name;
  out << "\n";
  out << "instantiations: " << cutset.instantiation_count << "\n";
}

int cmd_validate(const Options& opts, std::ostream& out) {
  LoadedNetwork loaded = load_network(opts);
  out << "ok: " << loaded.net.node_count() << " nodes, "
      << loaded.net.arcs().size() << " arcs, "
      << (loaded.net.is_singly_connected() ? "singly-connected"
                                           : "multiply-connected")
      << "\n";
  return 0;
}

int cmd_cutset(const Options& opts, std::ostream& out) {
  LoadedNetwork loaded = load_network(opts);
  CutsetResult cutset = find_loop_cutset(loaded.net);
  print_cutset(out, loaded.net, cutset, opts.trace);
  return 0;
}

int cmd_infer(const Options& opts, std::ostream& out) {
  LoadedNetwork loaded = load_network(opts);
  std::vector<NodeId> queries = resolve_queries(loaded.net, opts, false);
  CutsetResult cutset = find_loop_cutset(loaded.net);
  InferOptions iopts;
  iopts.max_instantiations = opts.max_instantiations;
  InferResult result = infer(loaded.net, loaded.evidence, queries, cutset,
                             iopts);
  print_cutset(out, loaded.net, cutset, false);
  for (NodeId q : queries) {
    print_posterior_line(out, loaded.net, q, result.posterior.at(q));
  }
  return 0;
}

int cmd_oracle(const Options& opts, std::ostream& out) {
  LoadedNetwork loaded = load_network(opts);
  std::vector<NodeId> queries = resolve_queries(loaded.net, opts, true);
  oracle::PosteriorTable table =
      oracle::joint_enumeration_posterior(loaded.net, loaded.evidence,
                                          queries);
  out << "p_evidence: " << std::fixed << std::setprecision(9)
      << table.p_evidence << "\n";
  for (NodeId q : queries) {
    print_posterior_line(out, loaded.net, q, table.posterior.at(q));
  }
  return 0;
}

int cmd_compare(const Options& opts, std::ostream& out) {
  LoadedNetwork loaded = load_network(opts);
  std::vector<NodeId> queries = resolve_queries(loaded.net, opts, true);
  CutsetResult cutset = find_loop_cutset(loaded.net);
  InferOptions iopts;
  iopts.max_instantiations = opts.max_instantiations;
  InferResult result = infer(loaded.net, loaded.evidence, queries, cutset,
                             iopts);
  oracle::PosteriorTable table =
      oracle::joint_enumeration_posterior(loaded.net, loaded.evidence,
                                          queries);
  double dev = 0.0;
  for (NodeId q : queries) {
    const auto& a = result.posterior.at(q);
    const auto& b = table.posterior.at(q);
    for (std::size_t v = 0; v < a.size(); ++v) {
      dev = std::max(dev, std::abs(a[v] - b[v]));
    }
  }
  out << "max_abs_deviation: " << std::scientific << std::setprecision(3)
      << dev << "\n";
  return 0;
}

int cmd_reduce_mvc(const Options& opts, std::ostream& out) {
  if (opts.output.empty()) fail(ErrorCode::Usage, "-o NETFILE is required");
  UndirectedGraph graph = parse_graph(read_file(opts.file));
  GadgetNetwork gadget = mvc_to_mlc(graph);

  // Re-express the gadget as a document so the emitted file is canonical.
  NetworkDocument doc;
  for (NodeId id = 0; id < gadget.net.node_count(); ++id) {
    doc.nodes.push_back(gadget.net.node(id));
  }
  for (const Arc& arc : gadget.net.arcs()) {
    doc.arcs.push_back({gadget.net.node(arc.parent).name,
                        gadget.net.node(arc.child).name});
  }
  for (NodeId id = 0; id < gadget.net.node_count(); ++id) {
    const Cpt& cpt = gadget.net.cpt(id);
    CptSpec spec;
    spec.child = gadget.net.node(id).name;
    for (NodeId p : cpt.parents) spec.parents.push_back(gadget.net.node(p).name);
    spec.rows = cpt.rows;
    doc.cpts.push_back(std::move(spec));
  }
  for (const auto& [node, value] : gadget.evidence.findings()) {
    doc.evidence.emplace_back(gadget.net.node(node).name,
                              gadget.net.node(node).values[value]);
  }
  std::ofstream file(opts.output, std::ios::binary);
  if (!file) {
    fail(ErrorCode::SyntaxError, "cannot write file '" + opts.output + "'");
  }
  file << print_network(doc);
  out << "written: " << opts.output << " (" << gadget.net.node_count()
      << " nodes, " << gadget.net.arcs().size() << " arcs)\n";
  return 0;
}

int cmd_check_reduction(const Options& opts, std::ostream& out) {
  UndirectedGraph graph = parse_graph(read_file(opts.file));
  ReductionReport report = check_reduction(graph);
  out << "min_vertex_cover:";
  for (std::size_t v : report.min_cover) out << " " << graph.vertices[v];
  out << "\n";
  out << "min_loop_cutset:";
  for (std::size_t v : report.min_cutset) out << " " << graph.vertices[v];
  out << "\n";
  out << "cover_size: " << report.cover_size << "\n";
  out << "cutset_size: " << report.cutset_size << "\n";
  out << "match: " << (report.ok ? "yes" : "no") << "\n";
  return report.ok ? 0 : 3;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
  try {
    if (argc < 2) fail(ErrorCode::Usage, "missing command");
    std::string command = argv[1];
    std::vector<std::string> args(argv + 2, argv + argc);
    Options opts = parse_options(args);
    if (command == "validate") return cmd_validate(opts, out);
    if (command == "cutset") return cmd_cutset(opts, out);
    if (command == "infer") return cmd_infer(opts, out);
    if (command == "oracle") return cmd_oracle(opts, out);
    if (command == "compare") return cmd_compare(opts, out);
    if (command == "reduce-mvc") return cmd_reduce_mvc(opts, out);
    if (command == "check-reduction") return cmd_check_reduction(opts, out);
    fail(ErrorCode::Usage, "unknown command '" + command + "'");
  } catch (const Error& e) {
    err << "error: " << error_code_name(e.code()) << " " << e.what() << "\n";
    if (e.code() == ErrorCode::Usage) err << kUsage;
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: Internal " << e.what() << "\n";
    return 3;
  }
}

}  // namespace bncut
