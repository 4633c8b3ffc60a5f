#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "bncut/cutset.hpp"
#include "bncut/network.hpp"
#include "bncut/propagation.hpp"

namespace bncut {

/// One full value assignment to the cutset members, with its weight.
struct Instantiation {
  std::vector<std::size_t> assignment;  // value per member, selection order
  double joint_with_evidence = 0.0;     // P(c_1..c_n, E)
  double weight = 0.0;                  // P(c_1..c_n | E)
};

struct InferOptions {
  std::uint64_t max_instantiations = std::uint64_t{1} << 20;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct InferResult {
  std::map<NodeId, std::vector<double>> posterior;  // per query node
  std::vector<Instantiation> instantiations;        // enumeration order
  double p_evidence = 0.0;
  std::uint64_t propagation_runs = 0;
};

/// Row-major enumeration of all cutset assignments, members in selection
/// order (first member most significant). Throws when the count exceeds
/// the budget.
std::vector<std::vector<std::size_t>> enumerate_instantiations(
    const CutsetResult& cutset,
    std::uint64_t max_instantiations = std::uint64_t{1} << 20);

/// Exact posteriors by the method of conditioning: one blocked propagation
/// run per cutset instantiation, mixed by normalized instantiation weights.
InferResult infer(const BeliefNetwork& net, const EvidenceSet& evidence,
                  const std::vector<NodeId>& queries,
                  const CutsetResult& cutset, const InferOptions& opts = {});

struct MixingRow {
  std::vector<std::size_t> assignment;
  double weight = 0.0;
  std::vector<double> conditional;   // P(x | E, c)
  std::vector<double> contribution;  // weight * conditional
};

struct MixingReport {
  std::vector<MixingRow> rows;
  double weight_sum = 0.0;
  std::vector<double> recomposed;  // sum of contributions
  std::vector<double> direct;      // infer's answer for the query
  bool consistent = false;         // weights sum to 1 and recomposition holds
};

/// Diagnostic decomposition of the mixing identity for one query node.
MixingReport mixing_identity_check(const BeliefNetwork& net,
                                   const EvidenceSet& evidence, NodeId query,
                                   const CutsetResult& cutset,
                                   const InferOptions& opts = {});

}  // namespace bncut
