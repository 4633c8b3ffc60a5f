#include "bncut/conditioning.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace bncut {

std::vector<std::vector<std::size_t>> enumerate_instantiations(
    const CutsetResult& cutset, std::uint64_t max_instantiations) {
  std::uint64_t count = 1;
  for (std::size_t card : cutset.cardinalities) {
    if (count > max_instantiations / card) {
      fail(ErrorCode::InstantiationBudgetExceeded,
           "cutset requires more than " + std::to_string(max_instantiations) +
               " instantiations");
    }
    count *= card;
  }
  if (count > max_instantiations) {
    fail(ErrorCode::InstantiationBudgetExceeded,
         "cutset requires " + std::to_string(count) +
             " instantiations, budget is " +
             std::to_string(max_instantiations));
  }
  std::vector<std::vector<std::size_t>> out;
  out.reserve(count);
  std::vector<std::size_t> assignment(cutset.members.size(), 0);
  for (std::uint64_t i = 0; i < count; ++i) {
    out.push_back(assignment);
    for (std::size_t k = assignment.size(); k-- > 0;) {
      if (++assignment[k] < cutset.cardinalities[k]) break;
      assignment[k] = 0;
    }
  }
  return out;
}

namespace {

struct CaseResult {
  double joint = 0.0;
  std::vector<std::vector<double>> query_beliefs;
};

// Runs one instantiation: absorb the cutset assignment, then the evidence,
// and read the per-case posterior of every query node.
//
// Cutset members are absorbed in topological order. Absorbing an
// instantiated ancestor before its cutset descendants guarantees that every
// intermediate state keeps all active loops blocked, so each chain-rule
// factor is read from an exact belief.
CaseResult run_instantiation(const BeliefNetwork& net,
                             const EvidenceSet& evidence,
                             const std::vector<NodeId>& queries,
                             const std::vector<std::size_t>& topo_member_order,
                             const CutsetResult& cutset,
                             const std::vector<std::size_t>& assignment) {
  PropagationRun run = PropagationRun::init(net);
  for (std::size_t k : topo_member_order) {
    run.absorb_evidence(cutset.members[k], assignment[k]);
    if (run.dead()) break;
  }
  if (!run.dead()) {
    for (const auto& [node, value] : evidence.findings()) {
      if (auto cur = run.instantiated_value(node)) {
        // A cutset member that is also an evidence node: only the matching
        // instantiation contributes.
        if (*cur != value) {
          run.kill();
          break;
        }
        continue;
      }
      run.absorb_evidence(node, value);
      if (run.dead()) break;
    }
  }
  CaseResult result;
  if (run.dead()) return result;
  result.joint = std::exp(run.log_likelihood());
  result.query_beliefs.reserve(queries.size());
  for (NodeId q : queries) result.query_beliefs.push_back(run.belief(q));
  return result;
}

}  // namespace

InferResult infer(const BeliefNetwork& net, const EvidenceSet& evidence,
                  const std::vector<NodeId>& queries,
                  const CutsetResult& cutset, const InferOptions& opts) {
  for (NodeId q : queries) net.node(q);
  auto assignments = enumerate_instantiations(cutset, opts.max_instantiations);

  // Absorption order inside a run: cutset members by topological position.
  std::vector<std::size_t> topo_member_order(cutset.members.size());
  {
    std::vector<std::size_t> topo_pos(net.node_count(), 0);
    const auto& topo = net.topological_order();
    for (std::size_t i = 0; i < topo.size(); ++i) topo_pos[topo[i]] = i;
    for (std::size_t k = 0; k < topo_member_order.size(); ++k) {
      topo_member_order[k] = k;
    }
    std::sort(topo_member_order.begin(), topo_member_order.end(),
              [&](std::size_t a, std::size_t b) {
                return topo_pos[cutset.members[a]] <
                       topo_pos[cutset.members[b]];
              });
  }

  std::vector<CaseResult> cases(assignments.size());
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= assignments.size()) return;
      try {
        cases[i] = run_instantiation(net, evidence, queries,
                                     topo_member_order, cutset,
                                     assignments[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  unsigned n_threads = opts.threads ? opts.threads
                                    : std::thread::hardware_concurrency();
  n_threads = std::max(1u, std::min<unsigned>(
                               n_threads,
                               static_cast<unsigned>(assignments.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) {
    try {
      std::rethrow_exception(first_error);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NonConvergence) {
        fail(ErrorCode::InvalidCutset,
             std::string("a propagation run did not converge: ") + e.what());
      }
      throw;
    }
  }

  // Deterministic reduction in enumeration order.
  InferResult result;
  result.propagation_runs = assignments.size();
  double total = 0.0;
  for (const CaseResult& c : cases) total += c.joint;
  if (total <= 0.0) {
    fail(ErrorCode::ImpossibleEvidence, "evidence has probability zero");
  }
  result.p_evidence = total;

  for (NodeId q : queries) {
    result.posterior[q] = std::vector<double>(net.cardinality(q), 0.0);
  }
  result.instantiations.reserve(assignments.size());
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    Instantiation inst;
    inst.assignment = assignments[i];
    inst.joint_with_evidence = cases[i].joint;
    inst.weight = cases[i].joint / total;
    result.instantiations.push_back(std::move(inst));
    if (cases[i].joint <= 0.0) continue;
    const double w = cases[i].joint / total;
    for (std::size_t qi = 0; qi < queries.size(); ++qi) {
      auto& acc = result.posterior[queries[qi]];
      const auto& bel = cases[i].query_beliefs[qi];
      for (std::size_t x = 0; x < acc.size(); ++x) acc[x] += w * bel[x];
    }
  }
  return result;
}

MixingReport mixing_identity_check(const BeliefNetwork& net,
                                   const EvidenceSet& evidence, NodeId query,
                                   const CutsetResult& cutset,
                                   const InferOptions& opts) {
  InferResult res = infer(net, evidence, {query}, cutset, opts);
  MixingReport report;
  report.direct = res.posterior.at(query);
  report.recomposed.assign(net.cardinality(query), 0.0);
  for (const Instantiation& inst : res.instantiations) {
    MixingRow row;
    row.assignment = inst.assignment;
    row.weight = inst.weight;
    row.conditional.assign(net.cardinality(query), 0.0);
    if (inst.weight > 0.0) {
      // Recompute the per-case conditional for the report, absorbing in the
      // same topological order infer uses.
      std::vector<std::size_t> topo_pos(net.node_count(), 0);
      const auto& topo = net.topological_order();
      for (std::size_t i = 0; i < topo.size(); ++i) topo_pos[topo[i]] = i;
      std::vector<std::size_t> order(cutset.members.size());
      for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return topo_pos[cutset.members[a]] < topo_pos[cutset.members[b]];
      });
      PropagationRun run = PropagationRun::init(net);
      for (std::size_t k : order) {
        run.absorb_evidence(cutset.members[k], inst.assignment[k]);
      }
      for (const auto& [node, value] : evidence.findings()) {
        if (!run.instantiated_value(node)) run.absorb_evidence(node, value);
      }
      row.conditional = run.belief(query);
    }
    row.contribution.resize(row.conditional.size());
    for (std::size_t x = 0; x < row.conditional.size(); ++x) {
      row.contribution[x] = row.weight * row.conditional[x];
      report.recomposed[x] += row.contribution[x];
    }
    report.weight_sum += row.weight;
    report.rows.push_back(std::move(row));
  }
  double dev = std::abs(report.weight_sum - 1.0);
  for (std::size_t x = 0; x < report.direct.size(); ++x) {
    dev = std::max(dev, std::abs(report.recomposed[x] - report.direct[x]));
  }
  report.consistent = dev <= 1e-9;
  return report;
}

}  // namespace bncut
