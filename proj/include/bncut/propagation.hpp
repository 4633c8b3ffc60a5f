#pragma once

#include <map>
#include <optional>
#include <vector>

#include "bncut/network.hpp"

namespace bncut {

/// Message vectors of one propagation run. pi_msg[a] and lambda_msg[a] are
/// indexed by arc a = (U -> X) and range over U's values: pi_msg is the
/// causal message U sends down to X, lambda_msg is the diagnostic message X
/// sends up to U.
struct MessageState {
  std::vector<std::vector<double>> pi_msg;
  std::vector<std::vector<double>> lambda_msg;
  std::vector<std::vector<double>> node_pi;
  std::vector<std::vector<double>> node_lambda;
  std::vector<std::vector<double>> beliefs;
};

/// One Pearl-propagation run over a shared immutable network. Owns its
/// message state; movable, never shared mutably across workers.
///
/// Instantiating a node records the chain-rule factor P(value | earlier
/// findings) before clamping, so exp(log_likelihood()) is the joint
/// probability of everything absorbed so far. A finding with factor 0 marks
/// the run dead (joint 0) instead of erroring.
class PropagationRun {
 public:
  static PropagationRun init(const BeliefNetwork& net);

  /// Clamps node to value and re-propagates. Throws AlreadyInstantiated;
  /// NonConvergence signals an uncut loop.
  void absorb_evidence(NodeId node, std::size_t value);

  /// Recomputes all messages to a fixed point. Idempotent once converged.
  void propagate();

  const std::vector<double>& belief(NodeId node) const;
  const MessageState& state() const { return state_; }
  const BeliefNetwork& network() const { return *net_; }

  double log_likelihood() const { return log_likelihood_; }
  bool dead() const { return dead_; }
  /// Forces the run dead (joint probability 0).
  void kill();

  std::optional<std::size_t> instantiated_value(NodeId node) const;
  const std::map<NodeId, std::size_t>& instantiated() const {
    return instantiated_;
  }

 private:
  explicit PropagationRun(const BeliefNetwork& net);

  std::vector<double> compute_pi_msg(std::size_t arc) const;
  std::vector<double> compute_lambda_msg(
      std::size_t arc, const std::vector<bool>& sees_evidence_below) const;
  std::vector<double> local_pi(NodeId node) const;
  std::vector<double> local_lambda(NodeId node) const;
  void refresh_node_vectors();

  const BeliefNetwork* net_;
  std::map<NodeId, std::size_t> instantiated_;
  MessageState state_;
  double log_likelihood_ = 0.0;
  bool dead_ = false;
};

/// Runs plain local propagation with the given evidence and returns the
/// belief of `query`. On a multiply-connected network whose loops are merely
/// blocked at converging nodes this is the locally-computed (generally
/// incorrect) answer; it exists to demonstrate that failure mode and is
/// diagnostic-only. Exact on polytrees.
std::vector<double> propagate_unconditioned(const BeliefNetwork& net,
                                            const EvidenceSet& evidence,
                                            NodeId query);

/// Joint probability of an ordered list of findings via sequential
/// absorption. Zero-probability findings yield 0; an uncut loop in an
/// intermediate state raises NonConvergence.
double joint_probability(
    const BeliefNetwork& net,
    const std::vector<std::pair<NodeId, std::size_t>>& findings);

}  // namespace bncut
