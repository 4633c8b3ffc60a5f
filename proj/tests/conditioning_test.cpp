#include "doctest.h"

#include <cmath>
#include <random>

#include "bncut/conditioning.hpp"
#include "bncut/oracle.hpp"
#include "test_util.hpp"

using namespace bncut;
using namespace bncut::testutil;

namespace {

void check_close(const std::vector<double>& got,
                 const std::vector<double>& want, double tol) {
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(got[i] == doctest::Approx(want[i]).scale(1.0).epsilon(tol));
  }
}

BeliefNetwork independent_binaries(std::size_t n) {
  std::vector<NodeDef> defs;
  std::vector<CptSpec> cpts;
  for (std::size_t i = 0; i < n; ++i) {
    std::string name = "N" + std::to_string(i);
    defs.push_back({name, {"t", "f"}});
    cpts.push_back({name, {}, {{0.5, 0.5}}});
  }
  return build_network(defs, {}, cpts);
}

}  // namespace

TEST_CASE("instantiation enumeration is row-major over selection order") {
  BeliefNetwork net = make_two_loop_ladder();
  CutsetResult cutset = make_cutset(net, {id(net, "D"), id(net, "G")});
  auto rows = enumerate_instantiations(cutset);
  REQUIRE(rows.size() == 6);
  CHECK(rows.front() == std::vector<std::size_t>{0, 0});
  CHECK(rows[1] == std::vector<std::size_t>{0, 1});
  CHECK(rows[2] == std::vector<std::size_t>{1, 0});
  CHECK(rows.back() == std::vector<std::size_t>{2, 1});

  CutsetResult empty = make_cutset(net, {});
  auto one = enumerate_instantiations(empty);
  REQUIRE(one.size() == 1);
  CHECK(one[0].empty());
}

TEST_CASE("the instantiation budget is enforced") {
  BeliefNetwork net = independent_binaries(10);
  std::vector<NodeId> all;
  for (NodeId i = 0; i < net.node_count(); ++i) all.push_back(i);
  CutsetResult cutset = make_cutset(net, all);
  CHECK(cutset.instantiation_count == 1024);
  CHECK(enumerate_instantiations(cutset).size() == 1024);
  CHECK(thrown_code([&] { enumerate_instantiations(cutset, 1000); }) ==
        ErrorCode::InstantiationBudgetExceeded);
}

TEST_CASE("an empty cutset reduces to one plain propagation run") {
  BeliefNetwork chain = make_chain();
  EvidenceSet evidence;
  evidence.set(chain, id(chain, "B"), 0);
  CutsetResult cutset = find_loop_cutset(chain);
  REQUIRE(cutset.members.empty());
  InferResult result = infer(chain, evidence, {id(chain, "A")}, cutset);
  CHECK(result.propagation_runs == 1);
  CHECK(result.p_evidence == doctest::Approx(0.55).epsilon(1e-12));
  check_close(result.posterior.at(id(chain, "A")),
              {0.9 * 0.5 / 0.55, 0.2 * 0.5 / 0.55}, 1e-12);
  REQUIRE(result.instantiations.size() == 1);
  CHECK(result.instantiations[0].weight == doctest::Approx(1.0));
}

TEST_CASE("conditioning on the diamond matches the hand expansion") {
  BeliefNetwork net = make_diamond();
  EvidenceSet evidence;
  evidence.set(net, id(net, "D"), 0);
  CutsetResult cutset = find_loop_cutset(net);
  REQUIRE(cutset.members == std::vector<NodeId>{id(net, "A")});

  std::vector<NodeId> queries{id(net, "A"), id(net, "B"), id(net, "C")};
  InferResult result = infer(net, evidence, queries, cutset);
  CHECK(result.propagation_runs == 2);
  REQUIRE(result.instantiations.size() == 2);

  // Hand expansion of the eight joint terms consistent with D = t.
  const double pa[2] = {0.5, 0.5};
  const double pb[2][2] = {{0.9, 0.1}, {0.1, 0.9}};  // [a][b]
  const double pc[2][2] = {{0.9, 0.1}, {0.1, 0.9}};  // [a][c]
  const double pd[2][2] = {{0.1, 0.9}, {0.9, 0.1}};  // [b][c] -> P(d=t)
  double joint_a[2] = {0.0, 0.0};
  double joint_b[2] = {0.0, 0.0};
  double total = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int c = 0; c < 2; ++c) {
        double term = pa[a] * pb[a][b] * pc[a][c] * pd[b][c];
        joint_a[a] += term;
        joint_b[b] += term;
        total += term;
      }
    }
  }
  CHECK(result.p_evidence == doctest::Approx(total).epsilon(1e-12));
  check_close(result.posterior.at(id(net, "A")),
              {joint_a[0] / total, joint_a[1] / total}, 1e-12);
  check_close(result.posterior.at(id(net, "B")),
              {joint_b[0] / total, joint_b[1] / total}, 1e-12);

  // Per-instantiation weights are P(a | E) and sum to 1.
  double weight_sum = 0.0;
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(result.instantiations[i].weight ==
          doctest::Approx(joint_a[i] / total).epsilon(1e-12));
    CHECK(result.instantiations[i].joint_with_evidence ==
          doctest::Approx(joint_a[i]).epsilon(1e-12));
    weight_sum += result.instantiations[i].weight;
  }
  CHECK(weight_sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("any valid cutset gives the same posterior") {
  BeliefNetwork net = make_diamond();
  EvidenceSet evidence;
  evidence.set(net, id(net, "D"), 0);
  std::vector<NodeId> queries{id(net, "A"), id(net, "B"), id(net, "C")};
  InferResult via_a =
      infer(net, evidence, queries, make_cutset(net, {id(net, "A")}));
  InferResult via_b =
      infer(net, evidence, queries, make_cutset(net, {id(net, "B")}));
  InferResult via_c =
      infer(net, evidence, queries, make_cutset(net, {id(net, "C")}));
  for (NodeId q : queries) {
    check_close(via_b.posterior.at(q), via_a.posterior.at(q), 1e-9);
    check_close(via_c.posterior.at(q), via_a.posterior.at(q), 1e-9);
  }
  CHECK(via_b.p_evidence == doctest::Approx(via_a.p_evidence).epsilon(1e-9));
}

TEST_CASE("an uncut loop surfaces as InvalidCutset") {
  BeliefNetwork net = make_diamond();
  EvidenceSet evidence;
  evidence.set(net, id(net, "D"), 0);
  CHECK(thrown_code([&] {
          infer(net, evidence, {id(net, "A")}, make_cutset(net, {}));
        }) == ErrorCode::InvalidCutset);
}

TEST_CASE("impossible evidence is reported") {
  BeliefNetwork net = build_network(
      {{"A", {"t", "f"}}, {"B", {"t", "f"}}}, {{"A", "B"}},
      {{"A", {}, {{1.0, 0.0}}}, {"B", {"A"}, {{1.0, 0.0}, {0.0, 1.0}}}});
  EvidenceSet evidence;
  evidence.set(net, 1, 1);
  CHECK(thrown_code([&] {
          infer(net, evidence, {0}, make_cutset(net, {}));
        }) == ErrorCode::ImpossibleEvidence);
}

TEST_CASE("evidence overlapping the cutset keeps the run count") {
  BeliefNetwork net = make_diamond();
  EvidenceSet evidence;
  evidence.set(net, id(net, "A"), 0);
  evidence.set(net, id(net, "D"), 0);
  InferResult result =
      infer(net, evidence, {id(net, "B")}, make_cutset(net, {id(net, "A")}));
  CHECK(result.propagation_runs == 2);
  // The run contradicting the evidence carries weight zero.
  CHECK(result.instantiations[1].weight == doctest::Approx(0.0));
  auto truth = oracle::joint_enumeration_posterior(net, evidence,
                                                   {id(net, "B")});
  check_close(result.posterior.at(id(net, "B")),
              truth.posterior.at(id(net, "B")), 1e-9);
}

TEST_CASE("the ladder needs four runs and matches the oracle") {
  BeliefNetwork net = make_two_loop_ladder();
  EvidenceSet evidence;
  evidence.set(net, id(net, "J"), 0);
  CutsetResult cutset = find_loop_cutset(net);
  std::vector<NodeId> queries{id(net, "A"), id(net, "G"), id(net, "H")};
  InferResult result = infer(net, evidence, queries, cutset);
  CHECK(result.propagation_runs == cutset.instantiation_count);
  CHECK(result.propagation_runs == 4);
  auto truth = oracle::joint_enumeration_posterior(net, evidence, queries);
  for (NodeId q : queries) {
    check_close(result.posterior.at(q), truth.posterior.at(q), 1e-9);
  }
  CHECK(result.p_evidence ==
        doctest::Approx(truth.p_evidence).epsilon(1e-9));
}

TEST_CASE("conditioning matches the oracle on random networks") {
  std::mt19937 rng(53);
  int multiply_connected = 0;
  for (int trial = 0; trial < 30; ++trial) {
    BeliefNetwork net = random_network(rng, 4 + trial % 6, 0.35);
    EvidenceSet evidence = random_evidence(rng, net, 2);
    CutsetResult cutset = find_loop_cutset(net);
    if (!cutset.members.empty()) ++multiply_connected;
    std::vector<NodeId> all;
    for (NodeId i = 0; i < net.node_count(); ++i) all.push_back(i);
    InferResult result = infer(net, evidence, all, cutset);
    auto truth = oracle::joint_enumeration_posterior(net, evidence, all);
    for (NodeId q : all) {
      check_close(result.posterior.at(q), truth.posterior.at(q), 1e-9);
    }
    CHECK(result.p_evidence ==
          doctest::Approx(truth.p_evidence).epsilon(1e-9));
  }
  CHECK(multiply_connected > 5);
}

TEST_CASE("the locally-computed answer is materially wrong without cutting") {
  BeliefNetwork net = make_diamond_with_parent();
  EvidenceSet evidence;
  evidence.set(net, id(net, "E"), 0);
  NodeId d = id(net, "D");
  auto local = propagate_unconditioned(net, evidence, d);
  InferResult exact = infer(net, evidence, {d}, find_loop_cutset(net));
  auto truth = oracle::joint_enumeration_posterior(net, evidence, {d});
  check_close(exact.posterior.at(d), truth.posterior.at(d), 1e-9);
  CHECK(std::abs(local[0] - exact.posterior.at(d)[0]) > 1e-3);
}

TEST_CASE("mixing identity decomposition") {
  BeliefNetwork net = make_diamond();
  EvidenceSet evidence;
  evidence.set(net, id(net, "D"), 0);
  MixingReport report = mixing_identity_check(net, evidence, id(net, "B"),
                                              find_loop_cutset(net));
  CHECK(report.consistent);
  REQUIRE(report.rows.size() == 2);
  CHECK(report.weight_sum == doctest::Approx(1.0).epsilon(1e-9));
  check_close(report.recomposed, report.direct, 1e-9);
  for (const auto& row : report.rows) {
    REQUIRE(row.conditional.size() == 2);
    REQUIRE(row.contribution.size() == 2);
    for (std::size_t v = 0; v < 2; ++v) {
      CHECK(row.contribution[v] ==
            doctest::Approx(row.weight * row.conditional[v]).epsilon(1e-12));
    }
  }
}

TEST_CASE("thread count does not change the result") {
  BeliefNetwork net = make_two_loop_ladder();
  EvidenceSet evidence;
  evidence.set(net, id(net, "J"), 0);
  CutsetResult cutset = find_loop_cutset(net);
  InferOptions serial;
  serial.threads = 1;
  InferOptions wide;
  wide.threads = 8;
  InferResult a = infer(net, evidence, {id(net, "A")}, cutset, serial);
  InferResult b = infer(net, evidence, {id(net, "A")}, cutset, wide);
  REQUIRE(a.posterior.at(id(net, "A")).size() ==
          b.posterior.at(id(net, "A")).size());
  for (std::size_t v = 0; v < 3; ++v) {
    CHECK(a.posterior.at(id(net, "A"))[v] ==
          b.posterior.at(id(net, "A"))[v]);
  }
  CHECK(a.p_evidence == b.p_evidence);
}
