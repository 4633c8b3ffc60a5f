#include "doctest.h"

#include <random>
#include <set>

#include "bncut/cutset.hpp"
#include "bncut/oracle.hpp"
#include "test_util.hpp"

using namespace bncut;
using namespace bncut::testutil;

namespace {

std::set<NodeId> member_set(const CutsetResult& result) {
  return {result.members.begin(), result.members.end()};
}

}  // namespace

TEST_CASE("polytrees yield an empty cutset") {
  CutsetResult chain = find_loop_cutset(make_chain());
  CHECK(chain.members.empty());
  CHECK(chain.instantiation_count == 1);
  REQUIRE(chain.trace.size() == 1);
  CHECK(chain.trace[0].pruned.size() == 2);
  CHECK_FALSE(chain.trace[0].chosen.has_value());

  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    CutsetResult result = find_loop_cutset(random_polytree(rng, 9));
    CHECK(result.members.empty());
  }
}

TEST_CASE("the diamond is cut at its top") {
  BeliefNetwork net = make_diamond();
  CutsetResult result = find_loop_cutset(net);
  CHECK(result.members == std::vector<NodeId>{id(net, "A")});
  CHECK(result.instantiation_count == 2);
  REQUIRE(result.trace.size() == 2);
  CHECK(result.trace[0].pruned.empty());
  // B, C, D are ineligible: two live parents (D) or the tie-breaks lose to A.
  for (const auto& cand : result.trace[0].candidates) {
    CHECK(net.node(cand.node).name != "D");
  }
  CHECK(result.trace[0].chosen == id(net, "A"));
  CHECK(result.trace[1].pruned.size() == 3);
}

TEST_CASE("two-loop ladder walkthrough") {
  BeliefNetwork net = make_two_loop_ladder();
  CutsetResult result = find_loop_cutset(net);
  CHECK(result.members ==
        std::vector<NodeId>{id(net, "E"), id(net, "G")});
  CHECK(result.cardinalities == std::vector<std::size_t>{2, 2});
  CHECK(result.instantiation_count == 4);

  REQUIRE(result.trace.size() == 3);
  // First pass prunes the singly-connected fringe A, B, C in id order.
  CHECK(result.trace[0].pruned ==
        std::vector<NodeId>{id(net, "A"), id(net, "B"), id(net, "C")});
  // Among the eligible candidates the binary node E wins on fewest values.
  std::set<NodeId> eligible;
  for (const auto& cand : result.trace[0].candidates) {
    eligible.insert(cand.node);
  }
  CHECK(eligible == std::set<NodeId>{id(net, "D"), id(net, "E"), id(net, "F"),
                                     id(net, "H"), id(net, "I")});
  CHECK(result.trace[0].chosen == id(net, "E"));
  // Removing E frees D and F for pruning; then G wins by fewest values.
  CHECK(result.trace[1].pruned ==
        std::vector<NodeId>{id(net, "D"), id(net, "F")});
  CHECK(result.trace[1].chosen == id(net, "G"));
  CHECK(result.trace[2].pruned.size() == 3);
  CHECK_FALSE(result.trace[2].chosen.has_value());
}

TEST_CASE("tie-breaks: neighbors, then cardinality, then id") {
  CandidateScore a{0, 3, 2};
  CandidateScore b{1, 2, 2};
  CandidateScore c{1, 3, 3};
  CandidateScore d{1, 3, 2};
  CHECK(default_candidate_better(a, b));
  CHECK(default_candidate_better(a, c));
  CHECK(default_candidate_better(a, d));
  CHECK_FALSE(default_candidate_better(d, a));
}

TEST_CASE("a custom score function is honored") {
  BeliefNetwork net = make_two_loop_ladder();
  // Prefer larger ids among the eligible; the first pick flips from E to I.
  ScoreFn by_id = [](const CandidateScore& a, const CandidateScore& b) {
    return a.node > b.node;
  };
  CutsetResult result = find_loop_cutset(net, by_id);
  REQUIRE_FALSE(result.trace.empty());
  CHECK(result.trace[0].chosen == id(net, "I"));
  auto check = oracle::verify_cutset_condition(net, member_set(result));
  CHECK(check.ok);
}

TEST_CASE("heuristic cutsets satisfy the cutset condition") {
  std::mt19937 rng(23);
  int multiply_connected = 0;
  for (int trial = 0; trial < 60; ++trial) {
    BeliefNetwork net = random_network(rng, 4 + trial % 8, 0.35);
    CutsetResult result = find_loop_cutset(net);
    auto check = oracle::verify_cutset_condition(net, member_set(result));
    CHECK(check.ok);
    if (!net.is_singly_connected()) {
      ++multiply_connected;
      CHECK_FALSE(result.members.empty());
    } else {
      CHECK(result.members.empty());
    }
    std::uint64_t product = 1;
    for (std::size_t card : result.cardinalities) product *= card;
    CHECK(result.instantiation_count == product);
  }
  CHECK(multiply_connected > 10);
}

TEST_CASE("the heuristic is deterministic") {
  std::mt19937 rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    BeliefNetwork net = random_network(rng, 8, 0.35);
    CutsetResult first = find_loop_cutset(net);
    CutsetResult second = find_loop_cutset(net);
    CHECK(first.members == second.members);
    CHECK(first.work == second.work);
    REQUIRE(first.trace.size() == second.trace.size());
    for (std::size_t i = 0; i < first.trace.size(); ++i) {
      CHECK(first.trace[i].pruned == second.trace[i].pruned);
      CHECK(first.trace[i].chosen == second.trace[i].chosen);
    }
  }
}

TEST_CASE("heuristic quality against the exhaustive minimum") {
  std::mt19937 rng(31);
  int compared = 0;
  double worst_ratio = 1.0;
  for (int trial = 0; trial < 40; ++trial) {
    BeliefNetwork net = random_network(rng, 4 + trial % 5, 0.4);
    if (net.is_singly_connected()) continue;
    if (oracle::enumerate_loops(net).empty()) continue;
    CutsetResult heuristic = find_loop_cutset(net);
    std::set<NodeId> best = oracle::minimal_cutset_exhaustive(net);
    double best_product = 1.0;
    for (NodeId m : best) best_product *= double(net.cardinality(m));
    double ratio = double(heuristic.instantiation_count) / best_product;
    CHECK(ratio >= 1.0 - 1e-12);
    worst_ratio = std::max(worst_ratio, ratio);
    ++compared;
  }
  CHECK(compared > 10);
  MESSAGE("worst instantiation-count ratio vs optimum: " << worst_ratio);
}

TEST_CASE("make_cutset assembles counts for explicit members") {
  BeliefNetwork net = make_two_loop_ladder();
  CutsetResult result =
      make_cutset(net, {id(net, "D"), id(net, "G")});
  CHECK(result.members.size() == 2);
  CHECK(result.cardinalities == std::vector<std::size_t>{3, 2});
  CHECK(result.instantiation_count == 6);
  CHECK(result.trace.empty());
}
