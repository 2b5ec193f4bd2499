#pragma once

// Brute-force oracles over all 2^N spin configurations. These are the
// references every approximate or series computation is validated against.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <thread>
#include <type_traits>
#include <vector>

#include "loopcorrect/beliefs.hpp"
#include "loopcorrect/errors.hpp"
#include "loopcorrect/model.hpp"

namespace loopcorrect {

/// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  void scale(double f) noexcept {
    sum_ *= f;
    comp_ *= f;
  }
  [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct ExactResult {
  double log_z = 0.0;
  std::vector<NodeTable> marginals;
  std::vector<PairTable> pair_marginals;             // pairwise models, per edge
  std::vector<std::vector<double>> factor_marginals;  // factor models, per factor
};

struct OracleOptions {
  std::size_t max_variables = 25;
  std::size_t threads = 1;
};

namespace detail {

// Log-potential tables over variable scopes; pairwise models become one
// term per edge plus one per node.
struct LogTerm {
  std::vector<NodeId> scope;
  std::vector<double> log_table;

  [[nodiscard]] std::size_t index(std::uint64_t state) const noexcept {
    std::size_t idx = 0;
    for (NodeId v : scope) idx = (idx << 1U) | ((state >> v) & 1U);
    return idx;
  }
};

struct LogModel {
  std::size_t n = 0;
  std::vector<LogTerm> terms;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> var_terms;  // (term, bit from LSB)

  void index_terms() {
    var_terms.assign(n, {});
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const auto& sc = terms[t].scope;
      for (std::size_t k = 0; k < sc.size(); ++k) var_terms[sc[k]].push_back({t, sc.size() - 1 - k});
    }
  }

  [[nodiscard]] double log_weight(std::uint64_t state) const {
    double lw = 0.0;
    for (const auto& t : terms) lw += t.log_table[t.index(state)];
    return lw;
  }
};

inline std::vector<double> logs_of(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](double x) { return std::log(x); });
  return out;
}

inline LogModel to_log_model(const PairwiseModel& m) {
  LogModel lm;
  lm.n = m.node_count();
  for (EdgeId e = 0; e < m.edge_count(); ++e) {
    const auto& t = m.edge_potentials()[e];
    const Edge& ed = m.graph().edges()[e];
    lm.terms.push_back({{ed.a, ed.b}, logs_of({t[0][0], t[0][1], t[1][0], t[1][1]})});
  }
  for (NodeId i = 0; i < m.node_count(); ++i) {
    const auto& p = m.node_potentials()[i];
    lm.terms.push_back({{i}, logs_of({p[0], p[1]})});
  }
  lm.index_terms();
  return lm;
}

inline LogModel to_log_model(const FactorModel& m) {
  LogModel lm;
  lm.n = m.variable_count();
  for (const Factor& f : m.factors()) lm.terms.push_back({f.scope, logs_of(f.table)});
  lm.index_terms();
  return lm;
}

// Scaled accumulators: every bin holds sum of exp(lw - shift).
struct StateSums {
  double shift = -INFINITY;
  CompensatedSum total;
  std::vector<CompensatedSum> node;                // 2 per variable
  std::vector<std::vector<CompensatedSum>> term;  // per term table entry

  explicit StateSums(const LogModel& lm) : node(2 * lm.n) {
    for (const auto& t : lm.terms) term.emplace_back(t.log_table.size());
  }

  void rescale(double new_shift) {
    const double f = std::exp(shift - new_shift);
    total.scale(f);
    for (auto& c : node) c.scale(f);
    for (auto& t : term)
      for (auto& c : t) c.scale(f);
    shift = new_shift;
  }

  void add(double lw, std::uint64_t state, const std::vector<std::size_t>& term_index) {
    if (shift == -INFINITY) shift = lw;
    if (lw > shift + 64.0) rescale(lw);
    const double w = std::exp(lw - shift);
    total.add(w);
    for (std::size_t v = 0; v < node.size() / 2; ++v) node[2 * v + ((state >> v) & 1U)].add(w);
    for (std::size_t t = 0; t < term.size(); ++t) term[t][term_index[t]].add(w);
  }
};

// Gray-code walk over the low `free_bits` bits with the high bits fixed to
// `prefix`; the log weight is updated incrementally and resynchronized
// periodically to bound drift.
inline void sum_chunk(const LogModel& lm, std::size_t free_bits, std::uint64_t prefix, StateSums& sums) {
  std::uint64_t state = prefix << free_bits;
  std::vector<std::size_t> idx(lm.terms.size());
  auto resync = [&] {
    double lw = 0.0;
    for (std::size_t t = 0; t < lm.terms.size(); ++t) {
      idx[t] = lm.terms[t].index(state);
      lw += lm.terms[t].log_table[idx[t]];
    }
    return lw;
  };
  double lw = resync();
  const std::uint64_t count = std::uint64_t{1} << free_bits;
  for (std::uint64_t j = 0;;) {
    sums.add(lw, state, idx);
    if (++j == count) break;
    const auto v = static_cast<std::size_t>(std::countr_zero(j));
    state ^= std::uint64_t{1} << v;
    if ((j & 255U) == 0) {
      lw = resync();
      continue;
    }
    for (const auto& [t, bit] : lm.var_terms[v]) {
      lw -= lm.terms[t].log_table[idx[t]];
      idx[t] ^= std::size_t{1} << bit;
      lw += lm.terms[t].log_table[idx[t]];
    }
  }
}

inline ExactResult finish(const LogModel& lm, const StateSums& s) {
  ExactResult r;
  const double z = s.total.value();
  r.log_z = s.shift + std::log(z);
  r.marginals.resize(lm.n);
  for (std::size_t v = 0; v < lm.n; ++v) r.marginals[v] = {s.node[2 * v].value() / z, s.node[2 * v + 1].value() / z};
  for (const auto& t : s.term) {
    std::vector<double> tab(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) tab[k] = t[k].value() / z;
    r.factor_marginals.push_back(std::move(tab));
  }
  return r;
}

inline ExactResult brute_force_log_model(const LogModel& lm, const OracleOptions& opt) {
  if (lm.n > opt.max_variables || lm.n > 62)
    throw SizeError("brute_force: " + std::to_string(lm.n) + " variables exceeds cap " +
                    std::to_string(opt.max_variables));
  // A fixed chunk count keeps the reduction order independent of threads.
  const std::size_t chunk_bits = std::min<std::size_t>(lm.n, 6);
  const std::size_t free_bits = lm.n - chunk_bits;
  const std::size_t chunks = std::size_t{1} << chunk_bits;
  std::vector<StateSums> partial(chunks, StateSums(lm));

  const std::size_t workers = std::clamp<std::size_t>(opt.threads, 1, chunks);
  auto work = [&](std::size_t w) {
    for (std::size_t c = w; c < chunks; c += workers) sum_chunk(lm, free_bits, c, partial[c]);
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }

  StateSums merged(lm);
  merged.shift = -INFINITY;
  for (const auto& p : partial) merged.shift = std::max(merged.shift, p.shift);
  for (const auto& p : partial) {
    const double f = std::exp(p.shift - merged.shift);
    merged.total.add(p.total.value() * f);
    for (std::size_t k = 0; k < p.node.size(); ++k) merged.node[k].add(p.node[k].value() * f);
    for (std::size_t t = 0; t < p.term.size(); ++t)
      for (std::size_t k = 0; k < p.term[t].size(); ++k) merged.term[t][k].add(p.term[t][k].value() * f);
  }
  return finish(lm, merged);
}

inline ExactResult split_pairwise(const PairwiseModel& m, ExactResult r) {
  // Edge terms come first in to_log_model; drop the node terms.
  r.factor_marginals.resize(m.edge_count());
  for (const auto& t : r.factor_marginals) r.pair_marginals.push_back({{{t[0], t[1]}, {t[2], t[3]}}});
  r.factor_marginals.clear();
  return r;
}

inline ExactResult split_factor(const FactorModel& m, ExactResult r) {
  r.factor_marginals.resize(m.factors().size());
  return r;
}

}  // namespace detail

/// Exact log Z and marginals by enumeration (Gray-code walk, chunked).
inline ExactResult brute_force(const PairwiseModel& m, const OracleOptions& opt = {}) {
  return detail::split_pairwise(m, detail::brute_force_log_model(detail::to_log_model(m), opt));
}

inline ExactResult brute_force(const FactorModel& m, const OracleOptions& opt = {}) {
  return detail::split_factor(m, detail::brute_force_log_model(detail::to_log_model(m), opt));
}

/// Slow reference: plain counter, full log-weight recomputation per state.
template <class Model>
ExactResult brute_force_reference(const Model& m, std::size_t max_variables = 25) {
  const detail::LogModel lm = detail::to_log_model(m);
  if (lm.n > max_variables) throw SizeError("brute_force_reference: too many variables");
  detail::StateSums sums(lm);
  std::vector<std::size_t> idx(lm.terms.size());
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << lm.n); ++s) {
    for (std::size_t t = 0; t < lm.terms.size(); ++t) idx[t] = lm.terms[t].index(s);
    sums.add(lm.log_weight(s), s, idx);
  }
  ExactResult r = detail::finish(lm, sums);
  if constexpr (std::is_same_v<Model, PairwiseModel>)
    return detail::split_pairwise(m, std::move(r));
  else
    return detail::split_factor(m, std::move(r));
}

namespace detail {

inline void check_belief_entry(double v) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("belief entry must be finite and > 0");
}

inline int spin_in(std::uint64_t state, NodeId v) { return ((state >> v) & 1U) ? +1 : -1; }

}  // namespace detail

/// Sum over states of prod_e b_e / (b_a b_b) * prod_i b_i, optionally
/// weighted by the spin of `weight_node`. At an LBP fixed point the
/// unweighted sum equals Z / Z_B.
inline double lemma1_rhs(const Multigraph& g, const PairwiseBeliefs& b,
                         std::optional<NodeId> weight_node = std::nullopt, std::size_t max_variables = 25) {
  if (g.node_count() > max_variables) throw SizeError("lemma1_rhs: too many variables");
  if (b.node.size() != g.node_count() || b.edge.size() != g.edge_count())
    throw ArgumentError("lemma1_rhs: belief sizes do not match the graph");
  for (const auto& t : b.node)
    for (double v : t) detail::check_belief_entry(v);
  for (const auto& t : b.edge)
    for (const auto& row : t)
      for (double v : row) detail::check_belief_entry(v);
  if (weight_node) g.check_node(*weight_node);

  CompensatedSum acc;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << g.node_count()); ++s) {
    double w = 1.0;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      const Edge& ed = g.edges()[e];
      const std::size_t xa = (s >> ed.a) & 1U, xb = (s >> ed.b) & 1U;
      w *= b.edge[e][xa][xb] / (b.node[ed.a][xa] * b.node[ed.b][xb]);
    }
    for (NodeId i = 0; i < g.node_count(); ++i) w *= b.node[i][(s >> i) & 1U];
    if (weight_node) w *= detail::spin_in(s, *weight_node);
    acc.add(w);
  }
  return acc.value();
}

/// Factor-graph form: sum over states of prod_f b_f / prod_{i in f} b_i * prod_i b_i.
inline double lemma1_rhs(const FactorModel& fm, const FactorBeliefs& b,
                         std::optional<NodeId> weight_node = std::nullopt, std::size_t max_variables = 25) {
  const std::size_t n = fm.variable_count();
  if (n > max_variables) throw SizeError("lemma1_rhs: too many variables");
  if (b.node.size() != n || b.factor.size() != fm.factors().size())
    throw ArgumentError("lemma1_rhs: belief sizes do not match the model");
  for (const auto& t : b.node)
    for (double v : t) detail::check_belief_entry(v);
  for (const auto& t : b.factor)
    for (double v : t) detail::check_belief_entry(v);
  if (weight_node && *weight_node >= n) throw ArgumentError("lemma1_rhs: invalid weight node");

  CompensatedSum acc;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    double w = 1.0;
    for (std::size_t f = 0; f < fm.factors().size(); ++f) {
      const Factor& fac = fm.factors()[f];
      w *= b.factor[f][fac.index([&](NodeId v) { return detail::spin_in(s, v); })];
      for (NodeId v : fac.scope) w /= b.node[v][(s >> v) & 1U];
    }
    for (NodeId i = 0; i < n; ++i) w *= b.node[i][(s >> i) & 1U];
    if (weight_node) w *= detail::spin_in(s, *weight_node);
    acc.add(w);
  }
  return acc.value();
}

/// Left side of the subset-expansion identity, by direct enumeration:
///   sum_x prod_e (1 + x_a x_b beta_e xi_a^{-x_a} xi_b^{-x_b})
///         prod_i xi_i^{x_i} / (xi_i + 1/xi_i)   [* x_w]
inline double theorem1_lhs(const Multigraph& g, const std::vector<double>& beta, const std::vector<double>& xi,
                           std::optional<NodeId> weight_node = std::nullopt, std::size_t max_variables = 25) {
  if (beta.size() != g.edge_count() || xi.size() != g.node_count())
    throw ArgumentError("theorem1_lhs: parameter sizes do not match the graph");
  if (g.node_count() > max_variables) throw SizeError("theorem1_lhs: too many variables");
  for (double x : xi)
    if (!(x > 0.0)) throw DomainError("theorem1_lhs: xi must be positive");
  if (weight_node) g.check_node(*weight_node);

  auto xi_pow = [&](NodeId i, int x) { return x > 0 ? xi[i] : 1.0 / xi[i]; };
  CompensatedSum acc;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << g.node_count()); ++s) {
    double w = 1.0;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      const Edge& ed = g.edges()[e];
      const int xa = detail::spin_in(s, ed.a), xb = detail::spin_in(s, ed.b);
      w *= 1.0 + xa * xb * beta[e] * xi_pow(ed.a, -xa) * xi_pow(ed.b, -xb);
    }
    for (NodeId i = 0; i < g.node_count(); ++i) {
      const int x = detail::spin_in(s, i);
      w *= xi_pow(i, x) / (xi[i] + 1.0 / xi[i]);
    }
    if (weight_node) w *= detail::spin_in(s, *weight_node);
    acc.add(w);
  }
  return acc.value();
}

/// Factor-graph analogue: `beta[f][mask]` is the coefficient of the scope
/// subset `mask` (bit k <-> k-th scope variable, LSB first).
///   sum_x prod_f sum_I beta^f_I prod_{i in I} x_i xi_i^{-x_i} * prod_i xi_i^{x_i}/(xi_i + 1/xi_i)  [* x_w]
inline double factor_identity_lhs(const FactorModel& fm, const std::vector<std::vector<double>>& beta,
                                  const std::vector<double>& xi, std::optional<NodeId> weight_node = std::nullopt,
                                  std::size_t max_variables = 25) {
  const std::size_t n = fm.variable_count();
  if (beta.size() != fm.factors().size() || xi.size() != n)
    throw ArgumentError("factor_identity_lhs: parameter sizes do not match the model");
  if (n > max_variables) throw SizeError("factor_identity_lhs: too many variables");
  auto xi_pow = [&](NodeId i, int x) { return x > 0 ? xi[i] : 1.0 / xi[i]; };
  CompensatedSum acc;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    double w = 1.0;
    for (std::size_t f = 0; f < fm.factors().size(); ++f) {
      const auto& sc = fm.factors()[f].scope;
      double inner = 0.0;
      for (std::size_t mask = 0; mask < (std::size_t{1} << sc.size()); ++mask) {
        double t = beta[f][mask];
        for (std::size_t k = 0; k < sc.size(); ++k)
          if ((mask >> k) & 1U) {
            const int x = detail::spin_in(s, sc[k]);
            t *= x * xi_pow(sc[k], -x);
          }
        inner += t;
      }
      w *= inner;
    }
    for (NodeId i = 0; i < n; ++i) w *= xi_pow(i, detail::spin_in(s, i)) / (xi[i] + 1.0 / xi[i]);
    if (weight_node) w *= detail::spin_in(s, *weight_node);
    acc.add(w);
  }
  return acc.value();
}

}  // namespace loopcorrect
