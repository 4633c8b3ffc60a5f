#include "bncut/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace bncut {

namespace {

constexpr double kMessageTolerance = 1e-12;

std::vector<double> uniform_vec(std::size_t n) {
  return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

std::vector<double> indicator_vec(std::size_t n, std::size_t hot) {
  std::vector<double> v(n, 0.0);
  v[hot] = 1.0;
  return v;
}

void normalize(std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  if (sum > 0.0) {
    for (double& x : v) x /= sum;
  }
}

double max_abs_diff(const std::vector<double>& a,
                    const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d = std::max(d, std::abs(a[i] - b[i]));
  }
  return d;
}

// Iterates all parent-value configurations of `cpt` row-major, calling
// fn(row_index, digits).
template <typename Fn>
void for_each_parent_config(const BeliefNetwork& net, const Cpt& cpt, Fn fn) {
  const std::size_t k = cpt.parents.size();
  std::vector<std::size_t> digits(k, 0);
  std::size_t row = 0;
  const std::size_t total = cpt.rows.size();
  for (row = 0; row < total; ++row) {
    fn(row, digits);
    for (std::size_t i = k; i-- > 0;) {
      if (++digits[i] < net.cardinality(cpt.parents[i])) break;
      digits[i] = 0;
    }
  }
}

}  // namespace

PropagationRun::PropagationRun(const BeliefNetwork& net) : net_(&net) {
  const std::size_t n_arcs = net.arcs().size();
  state_.pi_msg.resize(n_arcs);
  state_.lambda_msg.resize(n_arcs);
  for (std::size_t a = 0; a < n_arcs; ++a) {
    const std::size_t card = net.cardinality(net.arcs()[a].parent);
    state_.pi_msg[a] = uniform_vec(card);
    state_.lambda_msg[a] = uniform_vec(card);
  }
  state_.node_pi.resize(net.node_count());
  state_.node_lambda.resize(net.node_count());
  state_.beliefs.resize(net.node_count());
}

PropagationRun PropagationRun::init(const BeliefNetwork& net) {
  PropagationRun run(net);
  run.propagate();
  return run;
}

std::optional<std::size_t> PropagationRun::instantiated_value(
    NodeId node) const {
  auto it = instantiated_.find(node);
  if (it == instantiated_.end()) return std::nullopt;
  return it->second;
}

void PropagationRun::kill() {
  dead_ = true;
  log_likelihood_ = -std::numeric_limits<double>::infinity();
}

std::vector<double> PropagationRun::local_pi(NodeId node) const {
  const Cpt& cpt = net_->cpt(node);
  const std::size_t card = net_->cardinality(node);
  if (cpt.parents.empty()) return cpt.rows[0];
  std::vector<double> out(card, 0.0);
  for_each_parent_config(*net_, cpt,
                         [&](std::size_t row,
                             const std::vector<std::size_t>& digits) {
    double w = 1.0;
    for (std::size_t k = 0; k < cpt.parents.size(); ++k) {
      w *= state_.pi_msg[net_->arc_index(cpt.parents[k], node)][digits[k]];
    }
    if (w == 0.0) return;
    for (std::size_t x = 0; x < card; ++x) out[x] += w * cpt.rows[row][x];
  });
  return out;
}

std::vector<double> PropagationRun::local_lambda(NodeId node) const {
  const std::size_t card = net_->cardinality(node);
  std::vector<double> out;
  if (auto v = instantiated_value(node)) {
    out = indicator_vec(card, *v);
  } else {
    out.assign(card, 1.0);
  }
  for (NodeId c : net_->children(node)) {
    const auto& msg = state_.lambda_msg[net_->arc_index(node, c)];
    for (std::size_t x = 0; x < card; ++x) out[x] *= msg[x];
  }
  return out;
}

std::vector<double> PropagationRun::compute_pi_msg(std::size_t arc) const {
  const Arc& a = net_->arcs()[arc];
  const std::size_t card = net_->cardinality(a.parent);
  // An instantiated node passes nothing through: its causal message is the
  // bare indicator of its observed value.
  if (auto v = instantiated_value(a.parent)) return indicator_vec(card, *v);
  std::vector<double> out = local_pi(a.parent);
  for (NodeId c : net_->children(a.parent)) {
    if (c == a.child) continue;
    const auto& msg = state_.lambda_msg[net_->arc_index(a.parent, c)];
    for (std::size_t u = 0; u < card; ++u) out[u] *= msg[u];
  }
  normalize(out);
  return out;
}

std::vector<double> PropagationRun::compute_lambda_msg(
    std::size_t arc, const std::vector<bool>& sees_evidence_below) const {
  const Arc& a = net_->arcs()[arc];
  const NodeId child = a.child;
  const std::size_t parent_card = net_->cardinality(a.parent);
  // Blocking: an unobserved node with no observed descendant relays nothing
  // upward, so its diagnostic message is vacuous.
  if (!instantiated_value(child) && !sees_evidence_below[child]) {
    return uniform_vec(parent_card);
  }
  const Cpt& cpt = net_->cpt(child);
  const std::size_t child_card = net_->cardinality(child);
  std::vector<double> lam = local_lambda(child);
  std::vector<double> out(parent_card, 0.0);
  std::size_t self_pos = 0;
  for (std::size_t k = 0; k < cpt.parents.size(); ++k) {
    if (cpt.parents[k] == a.parent) self_pos = k;
  }
  for_each_parent_config(*net_, cpt,
                         [&](std::size_t row,
                             const std::vector<std::size_t>& digits) {
    double w = 1.0;
    for (std::size_t k = 0; k < cpt.parents.size(); ++k) {
      if (k == self_pos) continue;
      w *= state_.pi_msg[net_->arc_index(cpt.parents[k], child)][digits[k]];
    }
    if (w == 0.0) return;
    double s = 0.0;
    for (std::size_t x = 0; x < child_card; ++x) {
      s += lam[x] * cpt.rows[row][x];
    }
    out[digits[self_pos]] += w * s;
  });
  normalize(out);
  return out;
}

void PropagationRun::propagate() {
  const auto& arcs = net_->arcs();
  const std::size_t n_arcs = arcs.size();
  const std::size_t n_msgs = 2 * n_arcs;
  const std::size_t bound =
      2 * n_arcs * std::max<std::size_t>(net_->node_count(), 1);

  // sees_evidence_below[x]: some strict descendant of x is instantiated.
  std::vector<bool> below(net_->node_count(), false);
  {
    std::deque<NodeId> queue;
    for (const auto& [node, value] : instantiated_) {
      (void)value;
      for (NodeId p : net_->parents(node)) {
        if (!below[p]) {
          below[p] = true;
          queue.push_back(p);
        }
      }
    }
    while (!queue.empty()) {
      NodeId u = queue.front();
      queue.pop_front();
      for (NodeId p : net_->parents(u)) {
        if (!below[p]) {
          below[p] = true;
          queue.push_back(p);
        }
      }
    }
  }

  // Structural feedback check. Message m depends on message m' when
  // recomputing m reads m'; a dependency cycle means some loop is active
  // (no member instantiated with at most one in-loop parent, every
  // head-to-head member observed at or below), so iteration would settle on
  // a fixed point that is not the exact conditional. Numerical convergence
  // cannot distinguish that case, hence the explicit graph test.
  {
    auto for_each_dep = [&](std::size_t id, auto&& emit) {
      const std::size_t arc = id / 2;
      const NodeId u = arcs[arc].parent;
      const NodeId x = arcs[arc].child;
      if (id % 2 == 0) {
        // pi on (U -> X): constant if U is instantiated.
        if (instantiated_.count(u)) return;
        for (NodeId p : net_->parents(u)) {
          emit(2 * net_->arc_index(p, u));
        }
        for (NodeId c : net_->children(u)) {
          if (c != x) emit(2 * net_->arc_index(u, c) + 1);
        }
        return;
      }
      // lambda on (U -> X), sent by X. Vacuous unless X is instantiated or
      // sees evidence below; an instantiated X still relays between parents.
      const bool inst = instantiated_.count(x) > 0;
      if (!inst && !below[x]) return;
      for (NodeId v : net_->parents(x)) {
        if (v != u) emit(2 * net_->arc_index(v, x));
      }
      if (!inst) {
        for (NodeId c : net_->children(x)) {
          emit(2 * net_->arc_index(x, c) + 1);
        }
      }
    };
    // Three-color DFS for a dependency cycle.
    std::vector<unsigned char> color(n_msgs, 0);
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> stack;
    auto deps_of = [&](std::size_t id) {
      std::vector<std::size_t> deps;
      for_each_dep(id, [&](std::size_t d) { deps.push_back(d); });
      return deps;
    };
    for (std::size_t root = 0; root < n_msgs; ++root) {
      if (color[root]) continue;
      stack.emplace_back(root, deps_of(root));
      color[root] = 1;
      while (!stack.empty()) {
        auto& [id, deps] = stack.back();
        if (deps.empty()) {
          color[id] = 2;
          stack.pop_back();
          continue;
        }
        std::size_t d = deps.back();
        deps.pop_back();
        if (color[d] == 1) {
          fail(ErrorCode::NonConvergence,
               "message dependencies form a cycle; the network has an uncut "
               "active loop");
        }
        if (color[d] == 0) {
          color[d] = 1;
          stack.emplace_back(d, deps_of(d));
        }
      }
    }
  }

  // Event-driven sweep: message id = 2*arc (pi) or 2*arc+1 (lambda).
  std::deque<std::size_t> queue;
  std::vector<bool> queued(n_msgs, false);
  auto enqueue = [&](std::size_t id) {
    if (!queued[id]) {
      queued[id] = true;
      queue.push_back(id);
    }
  };
  for (std::size_t a = 0; a < n_arcs; ++a) enqueue(2 * a);
  for (std::size_t a = 0; a < n_arcs; ++a) enqueue(2 * a + 1);

  std::size_t emissions = 0;
  while (!queue.empty()) {
    const std::size_t id = queue.front();
    queue.pop_front();
    queued[id] = false;
    const std::size_t arc = id / 2;
    const bool is_pi = (id % 2) == 0;
    std::vector<double> fresh = is_pi ? compute_pi_msg(arc)
                                      : compute_lambda_msg(arc, below);
    auto& stored = is_pi ? state_.pi_msg[arc] : state_.lambda_msg[arc];
    if (max_abs_diff(fresh, stored) <= kMessageTolerance) continue;
    stored = std::move(fresh);
    if (++emissions > bound) {
      fail(ErrorCode::NonConvergence,
           "message passing did not reach a fixed point; the network has an "
           "uncut active loop");
    }
    if (is_pi) {
      // pi on (U -> X) changed: X's outgoing messages depend on it.
      const NodeId x = arcs[arc].child;
      for (NodeId c : net_->children(x)) enqueue(2 * net_->arc_index(x, c));
      for (NodeId p : net_->parents(x)) {
        if (p != arcs[arc].parent) enqueue(2 * net_->arc_index(p, x) + 1);
      }
    } else {
      // lambda on (U -> X) changed: U's other outgoing messages depend on it.
      const NodeId u = arcs[arc].parent;
      for (NodeId c : net_->children(u)) {
        if (c != arcs[arc].child) enqueue(2 * net_->arc_index(u, c));
      }
      for (NodeId p : net_->parents(u)) {
        enqueue(2 * net_->arc_index(p, u) + 1);
      }
    }
  }
  refresh_node_vectors();
}

void PropagationRun::refresh_node_vectors() {
  for (NodeId x = 0; x < net_->node_count(); ++x) {
    state_.node_pi[x] = local_pi(x);
    state_.node_lambda[x] = local_lambda(x);
    if (auto v = instantiated_value(x)) {
      state_.beliefs[x] = indicator_vec(net_->cardinality(x), *v);
      continue;
    }
    std::vector<double> bel(net_->cardinality(x));
    for (std::size_t i = 0; i < bel.size(); ++i) {
      bel[i] = state_.node_pi[x][i] * state_.node_lambda[x][i];
    }
    normalize(bel);
    state_.beliefs[x] = std::move(bel);
  }
}

const std::vector<double>& PropagationRun::belief(NodeId node) const {
  net_->node(node);
  return state_.beliefs[node];
}

void PropagationRun::absorb_evidence(NodeId node, std::size_t value) {
  if (instantiated_.count(node)) {
    fail(ErrorCode::AlreadyInstantiated,
         "node '" + net_->node(node).name + "' is already instantiated");
  }
  if (value >= net_->cardinality(node)) {
    fail(ErrorCode::UnknownNode,
         "value index out of range for node '" + net_->node(node).name + "'");
  }
  const double factor = dead_ ? 0.0 : belief(node)[value];
  instantiated_[node] = value;
  if (factor <= 0.0) {
    kill();
    return;
  }
  log_likelihood_ += std::log(factor);
  propagate();
}

std::vector<double> propagate_unconditioned(const BeliefNetwork& net,
                                            const EvidenceSet& evidence,
                                            NodeId query) {
  PropagationRun run = PropagationRun::init(net);
  for (const auto& [node, value] : evidence.findings()) {
    run.absorb_evidence(node, value);
  }
  if (run.dead()) {
    fail(ErrorCode::ZeroProbabilityEvidence,
         "evidence has probability zero");
  }
  return run.belief(query);
}

double joint_probability(
    const BeliefNetwork& net,
    const std::vector<std::pair<NodeId, std::size_t>>& findings) {
  PropagationRun run = PropagationRun::init(net);
  for (const auto& [node, value] : findings) {
    run.absorb_evidence(node, value);
    if (run.dead()) return 0.0;
  }
  return std::exp(run.log_likelihood());
}

}  // namespace bncut
