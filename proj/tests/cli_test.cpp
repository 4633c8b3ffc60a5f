#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bncut/cli.hpp"
#include "bncut/format.hpp"
#include "test_util.hpp"

using namespace bncut;
using namespace bncut::testutil;

namespace {

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"bncut"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun result;
  result.code =
      cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  result.out = out.str();
  result.err = err.str();
  return result;
}

std::string write_file(const std::string& name, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "bncut_cli_test";
  fs::create_directories(dir);
  fs::path path = dir / name;
  std::ofstream file(path, std::ios::binary);
  file << content;
  return path.string();
}

NetworkDocument doc_from_network(const BeliefNetwork& net) {
  NetworkDocument doc;
  for (NodeId i = 0; i < net.node_count(); ++i) {
    doc.nodes.push_back(net.node(i));
  }
  for (const Arc& arc : net.arcs()) {
    doc.arcs.push_back({net.node(arc.parent).name, net.node(arc.child).name});
  }
  for (NodeId i = 0; i < net.node_count(); ++i) {
    CptSpec spec;
    spec.child = net.node(i).name;
    for (NodeId p : net.cpt(i).parents) {
      spec.parents.push_back(net.node(p).name);
    }
    spec.rows = net.cpt(i).rows;
    doc.cpts.push_back(std::move(spec));
  }
  return doc;
}

std::string diamond_file() {
  static std::string path =
      write_file("diamond.net", print_network(doc_from_network(make_diamond())));
  return path;
}

std::string ladder_file() {
  static std::string path = write_file(
      "ladder.net", print_network(doc_from_network(make_two_loop_ladder())));
  return path;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("validate reports size and connectivity") {
  CliRun diamond = run_cli({"validate", diamond_file()});
  CHECK(diamond.code == 0);
  CHECK(diamond.out == "ok: 4 nodes, 4 arcs, multiply-connected\n");
  CHECK(diamond.err.empty());

  std::string chain = write_file(
      "chain.net", print_network(doc_from_network(make_chain())));
  CliRun simple = run_cli({"validate", chain});
  CHECK(simple.code == 0);
  CHECK(simple.out == "ok: 2 nodes, 1 arcs, singly-connected\n");
}

TEST_CASE("cutset with trace walks the heuristic") {
  CliRun result = run_cli({"cutset", ladder_file(), "--trace"});
  CHECK(result.code == 0);
  CHECK(contains(result.out, "prune: A B C\n"));
  CHECK(contains(result.out, "select: E\n"));
  CHECK(contains(result.out, "select: G\n"));
  CHECK(contains(result.out, "cutset: E G\n"));
  CHECK(contains(result.out, "instantiations: 4\n"));

  CliRun quiet = run_cli({"cutset", ladder_file()});
  CHECK(quiet.out == "cutset: E G\ninstantiations: 4\n");
}

TEST_CASE("infer prints nine-digit posteriors") {
  CliRun result = run_cli({"infer", diamond_file(), "--query", "A",
                           "--evidence", "D=t"});
  CHECK(result.code == 0);
  CHECK(contains(result.out, "cutset: A\n"));
  CHECK(contains(result.out, "instantiations: 2\n"));
  CHECK(contains(result.out, "A: t=0.500000000 f=0.500000000\n"));
}

TEST_CASE("oracle prints the evidence probability") {
  CliRun result = run_cli({"oracle", diamond_file(), "--query", "A",
                           "--evidence", "D=t"});
  CHECK(result.code == 0);
  CHECK(contains(result.out, "p_evidence: 0.244000000\n"));
  CHECK(contains(result.out, "A: t=0.500000000 f=0.500000000\n"));
}

TEST_CASE("compare reports a tiny deviation on the diamond") {
  CliRun result = run_cli({"compare", diamond_file(), "--evidence", "D=t"});
  CHECK(result.code == 0);
  REQUIRE(contains(result.out, "max_abs_deviation: "));
  double dev = std::strtod(result.out.c_str() +
                               std::string("max_abs_deviation: ").size(),
                           nullptr);
  CHECK(dev < 1e-9);
}

TEST_CASE("usage errors exit 1 and print usage") {
  CliRun missing_query = run_cli({"infer", diamond_file()});
  CHECK(missing_query.code == 1);
  CHECK(contains(missing_query.err, "error: Usage"));
  CHECK(contains(missing_query.err, "usage: bncut"));

  CHECK(run_cli({"frobnicate", diamond_file()}).code == 1);
  CHECK(run_cli({}).code == 1);
  CHECK(run_cli({"infer", diamond_file(), "--query", "A", "--evidence",
                 "Dt"}).code == 1);
}

TEST_CASE("invalid input exits 2") {
  std::string broken = write_file("broken.net", "node A { t, f }\nfrob A\n");
  CliRun result = run_cli({"validate", broken});
  CHECK(result.code == 2);
  CHECK(contains(result.err, "error: SyntaxError"));

  CliRun missing = run_cli({"validate", write_file("x", "") + ".does.not.exist"});
  CHECK(missing.code == 2);

  CliRun bad_node = run_cli({"infer", diamond_file(), "--query", "Z",
                             "--evidence", "D=t"});
  CHECK(bad_node.code == 2);
  CHECK(contains(bad_node.err, "error: UnknownNode"));
}

TEST_CASE("inference failures exit 3") {
  std::string rigged = write_file("rigged.net",
                                  "node A { t, f }\n"
                                  "node B { t, f }\n"
                                  "arc A -> B\n"
                                  "cpt A { 1.0, 0.0 }\n"
                                  "cpt B | A { t: 1.0, 0.0\n f: 0.0, 1.0 }\n");
  CliRun impossible = run_cli({"infer", rigged, "--query", "A",
                               "--evidence", "B=f"});
  CHECK(impossible.code == 3);
  CHECK(contains(impossible.err, "error: ImpossibleEvidence"));

  CliRun over_budget = run_cli({"infer", diamond_file(), "--query", "A",
                                "--evidence", "D=t",
                                "--max-instantiations", "1"});
  CHECK(over_budget.code == 3);
  CHECK(contains(over_budget.err, "error: InstantiationBudgetExceeded"));
}

TEST_CASE("the budget can come from the environment") {
  setenv("BNCUT_MAX_INST", "1", 1);
  CliRun result = run_cli({"infer", diamond_file(), "--query", "A",
                           "--evidence", "D=t"});
  unsetenv("BNCUT_MAX_INST");
  CHECK(result.code == 3);
  CHECK(contains(result.err, "error: InstantiationBudgetExceeded"));

  setenv("BNCUT_MAX_INST", "zebra", 1);
  CliRun bad = run_cli({"infer", diamond_file(), "--query", "A",
                        "--evidence", "D=t"});
  unsetenv("BNCUT_MAX_INST");
  CHECK(bad.code == 1);
}

TEST_CASE("reduce-mvc emits a loadable gadget network") {
  std::string graph = write_file("path4.graph",
                                 "vertex V1\nvertex V2\nvertex V3\nvertex V4\n"
                                 "edge V1 -- V2\nedge V2 -- V3\n"
                                 "edge V3 -- V4\n");
  namespace fs = std::filesystem;
  std::string out_path =
      (fs::temp_directory_path() / "bncut_cli_test" / "path4.net").string();
  CliRun reduce = run_cli({"reduce-mvc", graph, "-o", out_path});
  CHECK(reduce.code == 0);
  CHECK(contains(reduce.out, "written: " + out_path + " (10 nodes, 12 arcs)"));

  CliRun validate = run_cli({"validate", out_path});
  CHECK(validate.code == 0);
  CHECK(validate.out == "ok: 10 nodes, 12 arcs, multiply-connected\n");

  CliRun missing_out = run_cli({"reduce-mvc", graph});
  CHECK(missing_out.code == 1);
}

TEST_CASE("check-reduction confirms the correspondence") {
  std::string graph = write_file("tri.graph",
                                 "vertex a\nvertex b\nvertex c\n"
                                 "edge a -- b\nedge b -- c\nedge a -- c\n");
  CliRun result = run_cli({"check-reduction", graph});
  CHECK(result.code == 0);
  CHECK(contains(result.out, "min_vertex_cover: a b\n"));
  CHECK(contains(result.out, "cover_size: 2\n"));
  CHECK(contains(result.out, "cutset_size: 2\n"));
  CHECK(contains(result.out, "match: yes\n"));
}

TEST_CASE("repeated runs emit identical bytes") {
  std::vector<std::string> args{"infer", ladder_file(), "--query", "A,G,H",
                                "--evidence", "J=x"};
  CliRun first = run_cli(args);
  CliRun second = run_cli(args);
  CHECK(first.code == 0);
  CHECK(first.out == second.out);
  CHECK(first.code == second.code);
}
