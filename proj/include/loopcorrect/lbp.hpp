#pragma once

// Loopy belief propagation (sum-product) for binary pairwise and factor
// models, with beliefs and the Bethe log-partition value.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "loopcorrect/beliefs.hpp"
#include "loopcorrect/errors.hpp"
#include "loopcorrect/model.hpp"

namespace loopcorrect {

enum class Schedule {
  synchronous,  // every message from the previous sweep (default)
  sequential,   // in-place updates in message-id order
};

struct LbpOptions {
  std::size_t max_iters = 10000;
  double tol = 1e-12;
  double damping = 0.5;
  Schedule schedule = Schedule::synchronous;

  void validate() const {
    if (!(damping >= 0.0 && damping < 1.0)) throw ArgumentError("LbpOptions: damping must be in [0, 1)");
    if (!(tol > 0.0)) throw ArgumentError("LbpOptions: tol must be positive");
    if (max_iters == 0) throw ArgumentError("LbpOptions: max_iters must be positive");
  }
};

/// Pairwise: `to_node[2e]` is the message into edges[e].a along e,
/// `to_node[2e+1]` the message into edges[e].b. Factor models index both
/// vectors by incidence (the edge ids of factor_incidence_graph):
/// `to_node[k]` factor -> variable, `to_factor[k]` variable -> factor.
struct MessageSet {
  std::vector<NodeTable> to_node;
  std::vector<NodeTable> to_factor;
};

template <class Beliefs>
struct BasicLbpResult {
  MessageSet messages;
  Beliefs beliefs;
  double log_z_bethe = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  double residual = std::numeric_limits<double>::infinity();
};

using LbpResult = BasicLbpResult<PairwiseBeliefs>;
using FactorLbpResult = BasicLbpResult<FactorBeliefs>;

namespace detail {

inline constexpr double kLinearLow = 1e-280;
inline constexpr double kLinearHigh = 1e280;

inline NodeTable normalized(NodeTable v) {
  const double s = v[0] + v[1];
  v[0] /= s;
  v[1] /= s;
  if (!(v[0] > 0.0) || !(v[1] > 0.0) || !std::isfinite(v[0]) || !std::isfinite(v[1]))
    throw NumericError("message normalization produced a non-finite or zero entry");
  return v;
}

/// exp(l - max) normalized; tables of any size.
inline std::vector<double> softmax(std::vector<double> logs) {
  const double mx = *std::max_element(logs.begin(), logs.end());
  if (!std::isfinite(mx)) throw NumericError("non-finite log value in belief computation");
  double s = 0.0;
  for (double& l : logs) s += (l = std::exp(l - mx));
  for (double& l : logs) l /= s;
  return logs;
}

inline bool in_linear_range(const NodeTable& v) {
  for (double x : v)
    if (!std::isfinite(x) || x < kLinearLow || x > kLinearHigh) return false;
  return true;
}

inline double damp(NodeTable& slot, const NodeTable& fresh, double d) {
  NodeTable next = {(1.0 - d) * fresh[0] + d * slot[0], (1.0 - d) * fresh[1] + d * slot[1]};
  const double change = std::max(std::abs(next[0] - slot[0]), std::abs(next[1] - slot[1]));
  slot = next;
  return change;
}

// Incoming message ids per node, for the pairwise layout above.
inline std::vector<std::vector<std::size_t>> incoming_messages(const Multigraph& g) {
  std::vector<std::vector<std::size_t>> in(g.node_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    in[g.edges()[e].a].push_back(2 * e);
    in[g.edges()[e].b].push_back(2 * e + 1);
  }
  return in;
}

// New (normalized, undamped) message with id d = 2e + side, reading `msgs`.
inline NodeTable pairwise_message(const PairwiseModel& absorbed, const std::vector<std::vector<std::size_t>>& incoming,
                                  const std::vector<NodeTable>& msgs, std::size_t d) {
  const EdgeId e = d / 2;
  const Edge& ed = absorbed.graph().edges()[e];
  const bool into_a = (d % 2) == 0;
  const NodeId src = into_a ? ed.b : ed.a;
  const auto& tab = absorbed.edge_potentials()[e];
  auto psi = [&](std::size_t xt, std::size_t xs) { return into_a ? tab[xt][xs] : tab[xs][xt]; };

  NodeTable prod = {1.0, 1.0};
  for (std::size_t in : incoming[src])
    if (in / 2 != e) {
      prod[0] *= msgs[in][0];
      prod[1] *= msgs[in][1];
    }
  NodeTable out{};
  for (std::size_t xt = 0; xt < 2; ++xt) out[xt] = psi(xt, 0) * prod[0] + psi(xt, 1) * prod[1];
  if (in_linear_range(out) && prod[0] >= kLinearLow && prod[1] >= kLinearLow) return normalized(out);

  // log-domain fallback
  NodeTable lprod = {0.0, 0.0};
  for (std::size_t in : incoming[src])
    if (in / 2 != e) {
      lprod[0] += std::log(msgs[in][0]);
      lprod[1] += std::log(msgs[in][1]);
    }
  std::vector<double> lout(2);
  for (std::size_t xt = 0; xt < 2; ++xt) {
    const double l0 = std::log(psi(xt, 0)) + lprod[0], l1 = std::log(psi(xt, 1)) + lprod[1];
    const double mx = std::max(l0, l1);
    lout[xt] = mx + std::log(std::exp(l0 - mx) + std::exp(l1 - mx));
  }
  const auto p = softmax(lout);
  return normalized({p[0], p[1]});
}

}  // namespace detail

/// Three-term Bethe expression, natural log:
///   sum_e sum b_e log psi_e - sum_e sum b_e log b_e + sum_i (d_i - 1) sum b_i log b_i
/// evaluated on the model with node potentials absorbed into edges.
inline double bethe_log_z(const PairwiseBeliefs& b, const PairwiseModel& m) {
  const PairwiseModel absorbed = m.has_trivial_node_potentials() ? m : absorb_node_potentials(m);
  const Multigraph& g = absorbed.graph();
  if (b.node.size() != g.node_count() || b.edge.size() != g.edge_count())
    throw ArgumentError("bethe_log_z: belief sizes do not match the model");
  double energy = 0.0, edge_entropy = 0.0, node_term = 0.0;
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    for (std::size_t s = 0; s < 2; ++s)
      for (std::size_t t = 0; t < 2; ++t) {
        const double be = b.edge[e][s][t];
        if (!(be > 0.0)) throw DomainError("bethe_log_z: zero edge belief");
        energy += be * std::log(absorbed.edge_potentials()[e][s][t]);
        edge_entropy += be * std::log(be);
      }
  const auto deg = g.degrees();
  for (NodeId i = 0; i < g.node_count(); ++i)
    for (double bi : b.node[i]) {
      if (!(bi > 0.0)) throw DomainError("bethe_log_z: zero node belief");
      node_term += (static_cast<double>(deg[i]) - 1.0) * bi * std::log(bi);
    }
  return energy - edge_entropy + node_term;
}

/// Beliefs from a message set (absorbed model).
inline PairwiseBeliefs pairwise_beliefs(const PairwiseModel& absorbed, const std::vector<NodeTable>& msgs) {
  const Multigraph& g = absorbed.graph();
  const auto incoming = detail::incoming_messages(g);
  std::vector<NodeTable> logsum(g.node_count(), NodeTable{0.0, 0.0});
  for (NodeId i = 0; i < g.node_count(); ++i)
    for (std::size_t d : incoming[i])
      for (std::size_t x = 0; x < 2; ++x) logsum[i][x] += std::log(msgs[d][x]);

  PairwiseBeliefs b;
  for (NodeId i = 0; i < g.node_count(); ++i) {
    const auto p = detail::softmax({logsum[i][0], logsum[i][1]});
    b.node.push_back({p[0], p[1]});
  }
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edges()[e];
    std::vector<double> l(4);
    for (std::size_t s = 0; s < 2; ++s)
      for (std::size_t t = 0; t < 2; ++t)
        l[2 * s + t] = std::log(absorbed.edge_potentials()[e][s][t]) + logsum[ed.a][s] - std::log(msgs[2 * e][s]) +
                       logsum[ed.b][t] - std::log(msgs[2 * e + 1][t]);
    const auto p = detail::softmax(l);
    b.edge.push_back({{{p[0], p[1]}, {p[2], p[3]}}});
  }
  return b;
}

/// Max change of one synchronous, undamped sweep applied to `msgs`.
inline double undamped_residual(const PairwiseModel& m, const MessageSet& msgs) {
  const PairwiseModel absorbed = absorb_node_potentials(m);
  const auto incoming = detail::incoming_messages(absorbed.graph());
  double r = 0.0;
  for (std::size_t d = 0; d < msgs.to_node.size(); ++d) {
    const NodeTable fresh = detail::pairwise_message(absorbed, incoming, msgs.to_node, d);
    r = std::max({r, std::abs(fresh[0] - msgs.to_node[d][0]), std::abs(fresh[1] - msgs.to_node[d][1])});
  }
  return r;
}

/// Message fixed point by damped sweeps m <- (1-d) new + d old. Node
/// potentials are absorbed into edge tables first. Non-convergence is
/// reported through `converged`, never thrown.
inline LbpResult run_lbp(const PairwiseModel& m, const LbpOptions& opt = {}) {
  opt.validate();
  const PairwiseModel absorbed = absorb_node_potentials(m);
  const Multigraph& g = absorbed.graph();
  const auto incoming = detail::incoming_messages(g);
  const std::size_t count = 2 * g.edge_count();

  LbpResult res;
  std::vector<NodeTable> msgs(count, NodeTable{0.5, 0.5}), next(count);
  for (std::size_t it = 1; it <= opt.max_iters; ++it) {
    double residual = 0.0;
    if (opt.schedule == Schedule::synchronous) {
      for (std::size_t d = 0; d < count; ++d) next[d] = detail::pairwise_message(absorbed, incoming, msgs, d);
      for (std::size_t d = 0; d < count; ++d) residual = std::max(residual, detail::damp(msgs[d], next[d], opt.damping));
    } else {
      for (std::size_t d = 0; d < count; ++d) {
        const NodeTable fresh = detail::pairwise_message(absorbed, incoming, msgs, d);
        residual = std::max(residual, detail::damp(msgs[d], fresh, opt.damping));
      }
    }
    res.iterations = it;
    res.residual = residual;
    if (residual < opt.tol) {
      res.converged = true;
      break;
    }
  }
  res.messages.to_node = std::move(msgs);
  res.beliefs = pairwise_beliefs(absorbed, res.messages.to_node);
  res.log_z_bethe = bethe_log_z(res.beliefs, absorbed);
  return res;
}

// ---------------------------------------------------------------------------
// Factor graphs

/// Incidence k <-> (factor, position in scope), ordered factor by factor.
struct Incidence {
  std::size_t factor;
  std::size_t position;
  NodeId variable;
};

inline std::vector<Incidence> incidences(const FactorModel& fm) {
  std::vector<Incidence> out;
  for (std::size_t f = 0; f < fm.factors().size(); ++f)
    for (std::size_t p = 0; p < fm.factors()[f].scope.size(); ++p) out.push_back({f, p, fm.factors()[f].scope[p]});
  return out;
}

namespace detail {

struct FactorLayout {
  std::vector<Incidence> inc;
  std::vector<std::vector<std::size_t>> var_inc;     // incidences per variable
  std::vector<std::size_t> factor_first;             // first incidence id per factor

  explicit FactorLayout(const FactorModel& fm) : inc(incidences(fm)), var_inc(fm.variable_count()) {
    for (std::size_t k = 0; k < inc.size(); ++k) {
      var_inc[inc[k].variable].push_back(k);
      if (inc[k].position == 0) factor_first.push_back(k);
    }
  }
};

inline NodeTable variable_to_factor(const FactorLayout& lay, const std::vector<NodeTable>& to_node, std::size_t k) {
  std::array<double, 2> l = {0.0, 0.0};
  for (std::size_t k2 : lay.var_inc[lay.inc[k].variable])
    if (k2 != k)
      for (std::size_t x = 0; x < 2; ++x) l[x] += std::log(to_node[k2][x]);
  const auto p = softmax({l[0], l[1]});
  return normalized({p[0], p[1]});
}

inline NodeTable factor_to_variable(const FactorModel& fm, const FactorLayout& lay, const std::vector<NodeTable>& to_factor,
                                    std::size_t k) {
  const Incidence& target = lay.inc[k];
  const Factor& fac = fm.factors()[target.factor];
  const std::size_t arity = fac.arity(), first = lay.factor_first[target.factor];
  const std::size_t entries = std::size_t{1} << arity;
  NodeTable out = {0.0, 0.0};
  bool linear_ok = true;
  for (std::size_t idx = 0; idx < entries; ++idx) {
    double w = fac.table[idx];
    for (std::size_t p = 0; p < arity; ++p)
      if (p != target.position) w *= to_factor[first + p][(idx >> (arity - 1 - p)) & 1U];
    out[(idx >> (arity - 1 - target.position)) & 1U] += w;
  }
  linear_ok = in_linear_range(out);
  if (linear_ok) return normalized(out);

  std::array<std::vector<double>, 2> terms;
  for (std::size_t idx = 0; idx < entries; ++idx) {
    double l = std::log(fac.table[idx]);
    for (std::size_t p = 0; p < arity; ++p)
      if (p != target.position) l += std::log(to_factor[first + p][(idx >> (arity - 1 - p)) & 1U]);
    terms[(idx >> (arity - 1 - target.position)) & 1U].push_back(l);
  }
  std::vector<double> lout(2);
  for (std::size_t x = 0; x < 2; ++x) {
    const double mx = *std::max_element(terms[x].begin(), terms[x].end());
    double s = 0.0;
    for (double l : terms[x]) s += std::exp(l - mx);
    lout[x] = mx + std::log(s);
  }
  const auto p = softmax(lout);
  return normalized({p[0], p[1]});
}

}  // namespace detail

inline FactorBeliefs factor_beliefs(const FactorModel& fm, const MessageSet& msgs) {
  const detail::FactorLayout lay(fm);
  FactorBeliefs b;
  for (NodeId i = 0; i < fm.variable_count(); ++i) {
    std::vector<double> l = {0.0, 0.0};
    for (std::size_t k : lay.var_inc[i])
      for (std::size_t x = 0; x < 2; ++x) l[x] += std::log(msgs.to_node[k][x]);
    const auto p = detail::softmax(l);
    b.node.push_back({p[0], p[1]});
  }
  for (std::size_t f = 0; f < fm.factors().size(); ++f) {
    const Factor& fac = fm.factors()[f];
    const std::size_t first = lay.factor_first[f];
    std::vector<double> l(fac.table.size());
    for (std::size_t idx = 0; idx < l.size(); ++idx) {
      l[idx] = std::log(fac.table[idx]);
      for (std::size_t p = 0; p < fac.arity(); ++p)
        l[idx] += std::log(msgs.to_factor[first + p][(idx >> (fac.arity() - 1 - p)) & 1U]);
    }
    b.factor.push_back(detail::softmax(std::move(l)));
  }
  return b;
}

/// Factor form of the Bethe value; d_i = number of factors containing i.
inline double bethe_log_z(const FactorBeliefs& b, const FactorModel& fm) {
  if (b.node.size() != fm.variable_count() || b.factor.size() != fm.factors().size())
    throw ArgumentError("bethe_log_z: belief sizes do not match the model");
  double energy = 0.0, factor_entropy = 0.0, node_term = 0.0;
  for (std::size_t f = 0; f < fm.factors().size(); ++f) {
    const auto& tab = fm.factors()[f].table;
    if (b.factor[f].size() != tab.size()) throw ArgumentError("bethe_log_z: factor belief size mismatch");
    for (std::size_t idx = 0; idx < tab.size(); ++idx) {
      const double bf = b.factor[f][idx];
      if (!(bf > 0.0)) throw DomainError("bethe_log_z: zero factor belief");
      energy += bf * std::log(tab[idx]);
      factor_entropy += bf * std::log(bf);
    }
  }
  for (NodeId i = 0; i < fm.variable_count(); ++i) {
    const double d = static_cast<double>(fm.factors_of(i).size());
    for (double bi : b.node[i]) {
      if (!(bi > 0.0)) throw DomainError("bethe_log_z: zero node belief");
      node_term += (d - 1.0) * bi * std::log(bi);
    }
  }
  return energy - factor_entropy + node_term;
}

/// Each sweep recomputes all variable->factor messages from the current
/// factor->variable messages, then all factor->variable messages (damped).
/// The residual is measured on factor->variable messages.
inline FactorLbpResult run_lbp_factor(const FactorModel& fm, const LbpOptions& opt = {}) {
  opt.validate();
  const detail::FactorLayout lay(fm);
  const std::size_t count = lay.inc.size();

  FactorLbpResult res;
  std::vector<NodeTable> to_node(count, NodeTable{0.5, 0.5}), to_factor(count, NodeTable{0.5, 0.5});
  for (std::size_t it = 1; it <= opt.max_iters; ++it) {
    for (std::size_t k = 0; k < count; ++k) to_factor[k] = detail::variable_to_factor(lay, to_node, k);
    double residual = 0.0;
    if (opt.schedule == Schedule::synchronous) {
      std::vector<NodeTable> next(count);
      for (std::size_t k = 0; k < count; ++k) next[k] = detail::factor_to_variable(fm, lay, to_factor, k);
      for (std::size_t k = 0; k < count; ++k) residual = std::max(residual, detail::damp(to_node[k], next[k], opt.damping));
    } else {
      for (std::size_t k = 0; k < count; ++k) {
        const NodeTable fresh = detail::factor_to_variable(fm, lay, to_factor, k);
        residual = std::max(residual, detail::damp(to_node[k], fresh, opt.damping));
        for (std::size_t k2 : lay.var_inc[lay.inc[k].variable])
          if (k2 != k) to_factor[k2] = detail::variable_to_factor(lay, to_node, k2);
      }
    }
    res.iterations = it;
    res.residual = residual;
    if (residual < opt.tol) {
      res.converged = true;
      break;
    }
  }
  for (std::size_t k = 0; k < count; ++k) to_factor[k] = detail::variable_to_factor(lay, to_node, k);
  res.messages.to_node = std::move(to_node);
  res.messages.to_factor = std::move(to_factor);
  res.beliefs = factor_beliefs(fm, res.messages);
  res.log_z_bethe = bethe_log_z(res.beliefs, fm);
  return res;
}

}  // namespace loopcorrect
