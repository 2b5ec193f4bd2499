#pragma once

// Loop series correction of the Bethe approximation.
//
// At an LBP fixed point, with
//   xi_i    = sqrt(b_i(+1) / b_i(-1)),
//   gamma_i = (b_i(+1) - b_i(-1)) / sqrt(b_i(+1) b_i(-1))  (= xi_i - 1/xi_i),
//   beta_ij = (b_ij(+,+) b_ij(-,-) - b_ij(+,-) b_ij(-,+)) / sqrt(b_i(+)b_i(-) b_j(+)b_j(-)),
// the partition function is exactly
//   Z = Z_B * sum_s prod_{ij in s} beta_ij prod_i f_{d_i(s)}(gamma_i),
// and only generalized loops (no node of degree 1 in s) contribute since f_1 = 0.
// Marginals follow the same pattern with g_{d_t(s)} at the target node.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "loopcorrect/beliefs.hpp"
#include "loopcorrect/errors.hpp"
#include "loopcorrect/exact.hpp"
#include "loopcorrect/graph.hpp"
#include "loopcorrect/lbp.hpp"
#include "loopcorrect/model.hpp"
#include "loopcorrect/poly.hpp"

namespace loopcorrect {

/// Coefficient extraction refuses beliefs below this value.
inline constexpr double kBeliefFloor = 1e-12;
/// Tolerance for rebuilding factor beliefs from their coefficients.
inline constexpr double kReconstructionTol = 1e-10;

struct SeriesCoefficients {
  std::vector<double> xi;
  std::vector<double> gamma;
  std::vector<double> beta;  // pairwise: per edge
  // factor models: per factor, indexed by scope-subset mask (bit k <-> k-th
  // scope variable). Entry 0 is 1 and single-variable entries are 0.
  std::vector<std::vector<double>> factor_beta;
  // largest |raw singleton coefficient| replaced by the 0 convention
  double singleton_residual = 0.0;
};

struct SeriesTerm {
  EdgeSubset subset;
  double r = 0.0;
};

struct SeriesReport {
  std::vector<SeriesTerm> terms;  // ascending subset mask
  double total = 0.0;             // Z / Z_B
  double log_z_bethe = 0.0;
  double log_z_estimate = 0.0;    // log(Z_B * total)
  double z_estimate = 0.0;
  std::vector<double> partial_by_size;  // [k] = sum of r(s) over |s| <= k
};

struct MarginalCorrection {
  double bias_series = 0.0;  // right side of the marginal expansion
  double z_ratio = 0.0;      // Z / Z_B from the partition-function series
  NodeTable corrected{};     // (p(-1), p(+1))
  std::size_t term_count = 0;
};

namespace detail {

inline void check_beliefs_floor(const NodeTable& t, const std::string& where) {
  for (double v : t)
    if (!(v >= kBeliefFloor) || !std::isfinite(v))
      throw DomainError(where + ": belief entry below " + std::to_string(kBeliefFloor));
}

inline void require_converged(bool converged) {
  if (!converged) throw StateError("loop series requires a converged LBP fixed point");
}

inline double node_scale(const NodeTable& b) { return std::sqrt(b[0] * b[1]); }

// Compensated sum in the given term order, with per-size partial sums.
inline void accumulate(SeriesReport& rep, std::size_t max_size) {
  CompensatedSum total;
  std::vector<CompensatedSum> by_size(max_size + 1);
  for (const auto& t : rep.terms) {
    total.add(t.r);
    by_size[t.subset.size()].add(t.r);
  }
  rep.total = total.value();
  rep.partial_by_size.assign(max_size + 1, 0.0);
  CompensatedSum run;
  for (std::size_t k = 0; k <= max_size; ++k) {
    run.add(by_size[k].value());
    rep.partial_by_size[k] = run.value();
  }
}

inline void finish_report(SeriesReport& rep, double log_z_bethe) {
  rep.log_z_bethe = log_z_bethe;
  if (!(rep.total > 0.0))
    throw NumericError("loop series total is not positive (" + std::to_string(rep.total) + ")");
  rep.log_z_estimate = log_z_bethe + std::log(rep.total);
  rep.z_estimate = std::exp(rep.log_z_estimate);
}

}  // namespace detail

/// xi, gamma, beta from normalized pairwise beliefs.
inline SeriesCoefficients coefficients_from_beliefs(const Multigraph& g, const PairwiseBeliefs& b) {
  if (b.node.size() != g.node_count() || b.edge.size() != g.edge_count())
    throw ArgumentError("coefficients_from_beliefs: belief sizes do not match the graph");
  SeriesCoefficients c;
  for (NodeId i = 0; i < g.node_count(); ++i) {
    const NodeTable& bi = b.node[i];
    detail::check_beliefs_floor(bi, "node " + std::to_string(i));
    c.xi.push_back(std::sqrt(bi[1] / bi[0]));
    c.gamma.push_back((bi[1] - bi[0]) / detail::node_scale(bi));
  }
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const auto& t = b.edge[e];
    for (const auto& row : t) detail::check_beliefs_floor(row, "edge " + std::to_string(e));
    const Edge& ed = g.edges()[e];
    c.beta.push_back((t[1][1] * t[0][0] - t[1][0] * t[0][1]) /
                     (detail::node_scale(b.node[ed.a]) * detail::node_scale(b.node[ed.b])));
  }
  return c;
}

inline SeriesCoefficients coefficients_from_beliefs(const PairwiseModel& m, const LbpResult& res) {
  detail::require_converged(res.converged);
  return coefficients_from_beliefs(m.graph(), res.beliefs);
}

/// r(s) over generalized loops of g:
///   prod_{e in s} beta_e * prod_{i != target} f_{d_i(s)}(gamma_i) * [g_{d_t(s)}(gamma_t)]
/// Without a target every node uses f. With a target, subsets in which the
/// target alone has degree 1 are kept (g_1 = -2 is nonzero).
inline std::vector<SeriesTerm> series_terms(const Multigraph& g, std::span<const double> beta,
                                            std::span<const double> gamma,
                                            std::optional<NodeId> target = std::nullopt) {
  if (beta.size() != g.edge_count() || gamma.size() != g.node_count())
    throw ArgumentError("series_terms: coefficient sizes do not match the graph");
  std::vector<SeriesTerm> out;
  for (EdgeSubset s : enumerate_generalized_loops(g, target)) {
    double r = 1.0;
    for (EdgeId e : s.ids()) r *= beta[e];
    const auto deg = subset_degrees(g, s);
    for (NodeId i = 0; i < g.node_count(); ++i)
      r *= (target && *target == i) ? g_value(deg[i], gamma[i]) : f_value(deg[i], gamma[i]);
    out.push_back({s, r});
  }
  return out;
}

/// Right side of the subset-expansion identity for free parameters (beta, xi):
///   sum_s prod beta prod_i f_{d_i(s)}(xi_i - 1/xi_i)
/// and, with a weight node w, the g-variant divided by (xi_w + 1/xi_w).
inline double subset_expansion(const Multigraph& g, std::span<const double> beta, std::span<const double> xi,
                               std::optional<NodeId> weight_node = std::nullopt) {
  std::vector<double> gamma;
  for (double x : xi) gamma.push_back(x - 1.0 / x);
  CompensatedSum acc;
  for (const auto& t : series_terms(g, beta, gamma, weight_node)) acc.add(t.r);
  double v = acc.value();
  if (weight_node) v /= xi[*weight_node] + 1.0 / xi[*weight_node];
  return v;
}

/// Z = Z_B * sum_s r(s) at a converged fixed point.
inline SeriesReport loop_series_z(const PairwiseModel& m, const LbpResult& res) {
  const SeriesCoefficients c = coefficients_from_beliefs(m, res);
  SeriesReport rep;
  rep.terms = series_terms(m.graph(), c.beta, c.gamma);
  detail::accumulate(rep, m.edge_count());
  detail::finish_report(rep, res.log_z_bethe);
  return rep;
}

/// Partial sums restricted to |s| <= max_size.
struct TruncatedSeries {
  double value = 0.0;
  std::vector<double> per_size;  // [k] for k = 0..min(max_size, |E|)
};

inline TruncatedSeries truncated_series(const SeriesReport& report, std::size_t max_size) {
  TruncatedSeries t;
  if (report.partial_by_size.empty()) return t;
  const std::size_t top = std::min(max_size, report.partial_by_size.size() - 1);
  t.per_size.assign(report.partial_by_size.begin(), report.partial_by_size.begin() + static_cast<long>(top) + 1);
  t.value = t.per_size.back();
  return t;
}

namespace detail {

inline NodeTable marginal_from_difference(double diff) {
  return {0.5 * (1.0 - diff), 0.5 * (1.0 + diff)};
}

}  // namespace detail

/// Corrected marginal of `target`:
///   (Z/Z_B) (p(+1) - p(-1)) / sqrt(b(+1) b(-1)) = bias_series
/// with Z/Z_B taken from the partition-function series on the same fixed point.
inline MarginalCorrection loop_series_marginal(const PairwiseModel& m, const LbpResult& res, NodeId target) {
  m.graph().check_node(target);
  const SeriesCoefficients c = coefficients_from_beliefs(m, res);
  const auto z_terms = series_terms(m.graph(), c.beta, c.gamma);
  const auto terms = series_terms(m.graph(), c.beta, c.gamma, target);
  CompensatedSum z, bias;
  for (const auto& t : z_terms) z.add(t.r);
  for (const auto& t : terms) bias.add(t.r);
  MarginalCorrection out;
  out.bias_series = bias.value();
  out.z_ratio = z.value();
  out.term_count = terms.size();
  const double diff = detail::node_scale(res.beliefs.node[target]) * out.bias_series / out.z_ratio;
  out.corrected = detail::marginal_from_difference(diff);
  return out;
}

struct SingleCycleCheck {
  bool same_sign = false;
  double oracle_difference = 0.0;  // p(+1) - p(-1)
  double belief_difference = 0.0;  // b(+1) - b(-1)
  double bias_series = 0.0;
  double cycle_beta_product = 0.0;
  std::size_t contributing_terms = 0;
};

/// On a graph with exactly one cycle passing through `target`, the true
/// and belief biases of `target` share a sign; the marginal series has
/// exactly two terms, gamma_t * (1 - prod_{cycle} beta).
inline SingleCycleCheck single_cycle_sign_check(const PairwiseModel& m, const LbpResult& res, NodeId target) {
  const Multigraph& g = m.graph();
  g.check_node(target);
  if (cycle_rank(g) != 1) throw DomainError("single_cycle_sign_check: graph must have exactly one cycle");
  const auto loops = enumerate_generalized_loops(g);
  const EdgeSubset cycle = loops.back();
  if (degree_in_subset(g, cycle, target) == 0) throw DomainError("single_cycle_sign_check: target is not on the cycle");

  const SeriesCoefficients c = coefficients_from_beliefs(m, res);
  const MarginalCorrection mc = loop_series_marginal(m, res, target);
  const ExactResult ex = brute_force(m);

  SingleCycleCheck out;
  out.contributing_terms = mc.term_count;
  out.bias_series = mc.bias_series;
  out.cycle_beta_product = 1.0;
  for (EdgeId e : cycle.ids()) out.cycle_beta_product *= c.beta[e];
  out.oracle_difference = ex.marginals[target][1] - ex.marginals[target][0];
  out.belief_difference = res.beliefs.node[target][1] - res.beliefs.node[target][0];

  const double expected = c.gamma[target] * (1.0 - out.cycle_beta_product);
  if (mc.term_count != 2 || std::abs(mc.bias_series - expected) > 1e-10 * (1.0 + std::abs(expected)))
    throw IdentityViolation("single_cycle_sign_check: marginal series is not gamma_t (1 - prod beta)");

  const auto sign = [](double v) { return (v > 0.0) - (v < 0.0); };
  const int so = sign(out.oracle_difference), sb = sign(out.belief_difference);
  out.same_sign = so == 0 || sb == 0 || so == sb;
  return out;
}

// ---------------------------------------------------------------------------
// Factor graphs

/// xi, gamma per variable and beta^f_I per factor. beta^f_I is the
/// expectation under b_f of prod_{i in I} x_i xi_i^{-x_i}; those basis
/// functions are orthonormal under prod_i b_i, so the expansion
///   b_f(x) = prod_i b_i(x_i) * sum_I beta^f_I prod_{i in I} x_i xi_i^{-x_i}
/// is inverted exactly. The inversion is verified by rebuilding b_f.
inline SeriesCoefficients factor_coefficients(const FactorModel& fm, const FactorBeliefs& b) {
  if (b.node.size() != fm.variable_count() || b.factor.size() != fm.factors().size())
    throw ArgumentError("factor_coefficients: belief sizes do not match the model");
  SeriesCoefficients c;
  for (NodeId i = 0; i < fm.variable_count(); ++i) {
    const NodeTable& bi = b.node[i];
    detail::check_beliefs_floor(bi, "variable " + std::to_string(i));
    c.xi.push_back(std::sqrt(bi[1] / bi[0]));
    c.gamma.push_back((bi[1] - bi[0]) / detail::node_scale(bi));
  }
  // u_i(x) = x * xi_i^{-x}
  auto basis = [&](NodeId i, int x) { return x > 0 ? 1.0 / c.xi[i] : -c.xi[i]; };

  for (std::size_t f = 0; f < fm.factors().size(); ++f) {
    const Factor& fac = fm.factors()[f];
    const std::size_t arity = fac.arity(), entries = fac.table.size();
    const auto& bf = b.factor[f];
    if (bf.size() != entries) throw ArgumentError("factor_coefficients: factor belief size mismatch");
    for (double v : bf)
      if (!(v >= kBeliefFloor)) throw DomainError("factor " + std::to_string(f) + ": belief entry below floor");

    std::vector<double> beta(std::size_t{1} << arity, 0.0);
    for (std::size_t mask = 0; mask < beta.size(); ++mask) {
      CompensatedSum acc;
      for (std::size_t idx = 0; idx < entries; ++idx) {
        double w = bf[idx];
        for (std::size_t k = 0; k < arity; ++k)
          if ((mask >> k) & 1U) w *= basis(fac.scope[k], fac.spin_at(idx, k));
        acc.add(w);
      }
      beta[mask] = acc.value();
    }
    beta[0] = 1.0;
    for (std::size_t k = 0; k < arity; ++k) {
      c.singleton_residual = std::max(c.singleton_residual, std::abs(beta[std::size_t{1} << k]));
      beta[std::size_t{1} << k] = 0.0;
    }

    for (std::size_t idx = 0; idx < entries; ++idx) {
      double base = 1.0;
      for (std::size_t k = 0; k < arity; ++k) base *= b.node[fac.scope[k]][index_of(fac.spin_at(idx, k))];
      double series = 0.0;
      for (std::size_t mask = 0; mask < beta.size(); ++mask) {
        double t = beta[mask];
        for (std::size_t k = 0; k < arity; ++k)
          if ((mask >> k) & 1U) t *= basis(fac.scope[k], fac.spin_at(idx, k));
        series += t;
      }
      if (std::abs(base * series - bf[idx]) > kReconstructionTol)
        throw IdentityViolation("factor_coefficients: factor " + std::to_string(f) +
                                " beliefs are not reproduced by their coefficients");
    }
    c.factor_beta.push_back(std::move(beta));
  }
  return c;
}

inline SeriesCoefficients factor_coefficients(const FactorModel& fm, const FactorLbpResult& res) {
  detail::require_converged(res.converged);
  return factor_coefficients(fm, res.beliefs);
}

/// Terms over subsets s of the incidence edges (generalized loops of the
/// bipartite graph):
///   r(s) = (-1)^{|s|} prod_f beta^f_{I_f(s)} prod_{i != t} f_{d_i(s)}(gamma_i) [g_{d_t(s)}(gamma_t)]
inline std::vector<SeriesTerm> factor_series_terms(const FactorModel& fm, const SeriesCoefficients& c,
                                                   std::optional<NodeId> target = std::nullopt) {
  const Multigraph h = factor_incidence_graph(fm);
  const auto inc = incidences(fm);
  const std::size_t n = fm.variable_count();
  if (target && *target >= n) throw ArgumentError("factor_series_terms: target is not a variable");
  std::vector<SeriesTerm> out;
  for (EdgeSubset s : enumerate_generalized_loops(h, target)) {
    double r = (s.size() % 2 == 0) ? 1.0 : -1.0;
    std::vector<std::size_t> masks(fm.factors().size(), 0);
    for (EdgeId k : s.ids()) masks[inc[k].factor] |= std::size_t{1} << inc[k].position;
    for (std::size_t f = 0; f < masks.size() && r != 0.0; ++f) r *= c.factor_beta[f][masks[f]];
    const auto deg = subset_degrees(h, s);
    for (NodeId i = 0; i < n; ++i)
      r *= (target && *target == i) ? g_value(deg[i], c.gamma[i]) : f_value(deg[i], c.gamma[i]);
    out.push_back({s, r});
  }
  return out;
}

/// Factor-graph loop series for Z.
inline SeriesReport loop_series_z_factor(const FactorModel& fm, const FactorLbpResult& res) {
  const SeriesCoefficients c = factor_coefficients(fm, res);
  SeriesReport rep;
  rep.terms = factor_series_terms(fm, c);
  std::size_t incidence_count = 0;
  for (const auto& f : fm.factors()) incidence_count += f.arity();
  detail::accumulate(rep, incidence_count);
  detail::finish_report(rep, res.log_z_bethe);
  return rep;
}

/// Factor-graph corrected marginal of variable `target`.
inline MarginalCorrection loop_series_marginal_factor(const FactorModel& fm, const FactorLbpResult& res, NodeId target) {
  if (target >= fm.variable_count()) throw ArgumentError("loop_series_marginal_factor: invalid target");
  const SeriesCoefficients c = factor_coefficients(fm, res);
  CompensatedSum z, bias;
  for (const auto& t : factor_series_terms(fm, c)) z.add(t.r);
  const auto terms = factor_series_terms(fm, c, target);
  for (const auto& t : terms) bias.add(t.r);
  MarginalCorrection out;
  out.bias_series = bias.value();
  out.z_ratio = z.value();
  out.term_count = terms.size();
  const double diff = detail::node_scale(res.beliefs.node[target]) * out.bias_series / out.z_ratio;
  out.corrected = detail::marginal_from_difference(diff);
  return out;
}

}  // namespace loopcorrect
