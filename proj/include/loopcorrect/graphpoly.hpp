#pragma once

// Graph polynomials built on the loop series:
//   theta_G(b, g) = sum_s b^{|s|} prod_i f_{d_i(s)}(g),   g = xi - 1/xi
//   omega_G(b)    = theta_G(b, xi = sqrt(-1)) / (1 - b)^{|E| - |V|}   (g = 2i)
//   alpha_G(x)    = sum_k (-1)^k p(k) x^{n - 2k}                     (matchings)
// theta is stored in (b, g) so every identity is an exact integer equality.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "loopcorrect/errors.hpp"
#include "loopcorrect/graph.hpp"
#include "loopcorrect/poly.hpp"

namespace loopcorrect {

inline constexpr std::size_t kThetaDirectEdgeCap = 30;
inline constexpr std::size_t kDeterminantNodeCap = 16;

struct ThetaPoly {
  BiPoly poly;  // variables: b (edge weight), g (= xi - 1/xi)
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
};

namespace detail {

// prod over nodes of f_{d_i}, cached by the sorted degree multiset.
class NodeProductCache {
 public:
  IntPoly get(std::vector<std::size_t> degrees) {
    std::erase_if(degrees, [](std::size_t d) { return d == 0; });
    std::sort(degrees.begin(), degrees.end());
    auto it = cache_.find(degrees);
    if (it != cache_.end()) return it->second;
    IntPoly p(1);
    for (std::size_t d : degrees) p *= f_poly(d);
    cache_.emplace(degrees, p);
    return p;
  }

 private:
  std::map<std::vector<std::size_t>, IntPoly> cache_;
};

inline BiPoly one_minus_beta_times(const BiPoly& p) {
  return p.times_beta_poly(IntPoly(1) - IntPoly::x());
}

inline BiPoly beta_times(const BiPoly& p) { return p.times_beta_poly(IntPoly::x()); }

}  // namespace detail

/// theta by summing over generalized loops.
inline ThetaPoly theta_direct(const Multigraph& g) {
  if (g.edge_count() > kThetaDirectEdgeCap)
    throw SizeError("theta_direct: " + std::to_string(g.edge_count()) + " edges exceeds cap");
  detail::NodeProductCache cache;
  ThetaPoly t{BiPoly(), g.node_count(), g.edge_count()};
  for (EdgeSubset s : enumerate_generalized_loops(g))
    t.poly.add_beta_scaled(static_cast<unsigned>(s.size()), cache.get(subset_degrees(g, s)));
  return t;
}

/// theta of the bouquet B_L: sum_k C(L, k) b^k f_{2k}(g).
inline BiPoly theta_bouquet(std::size_t loops) {
  BiPoly p;
  for (std::size_t k = 0; k <= loops; ++k)
    p.add_beta_scaled(static_cast<unsigned>(k), f_poly(2 * k) * IntPoly(binomial(static_cast<unsigned>(loops),
                                                                                 static_cast<unsigned>(k))));
  return p;
}

/// Connected components as standalone graphs; nodes keep relative order.
inline std::vector<Multigraph> split_components(const Multigraph& g) {
  const auto label = component_labels(g);
  const std::size_t k = *std::max_element(label.begin(), label.end()) + 1;
  std::vector<std::size_t> local(g.node_count()), sizes(k, 0);
  for (NodeId i = 0; i < g.node_count(); ++i) local[i] = sizes[label[i]]++;
  std::vector<std::vector<Edge>> edges(k);
  for (const Edge& e : g.edges()) edges[label[e.a]].push_back({local[e.a], local[e.b]});
  std::vector<Multigraph> out;
  for (std::size_t c = 0; c < k; ++c) out.emplace_back(sizes[c], std::move(edges[c]));
  return out;
}

namespace detail {

inline std::string canonical_key(const Multigraph& g) {
  std::vector<std::pair<NodeId, NodeId>> e;
  for (const Edge& ed : g.edges()) e.emplace_back(std::min(ed.a, ed.b), std::max(ed.a, ed.b));
  std::sort(e.begin(), e.end());
  std::string key = std::to_string(g.node_count()) + ':';
  for (const auto& [a, b] : e) key += std::to_string(a) + '-' + std::to_string(b) + ',';
  return key;
}

class ContractionDeletion {
 public:
  BiPoly theta(const Multigraph& g) {
    const std::string key = canonical_key(g);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    BiPoly result = compute(g);
    memo_.emplace(key, result);
    return result;
  }

 private:
  BiPoly compute(const Multigraph& g) {
    if (!is_connected(g).connected) {
      BiPoly p(1);
      for (const Multigraph& c : split_components(g)) p = p * theta(c);
      return p;
    }
    const auto& edges = g.edges();
    const auto pivot = std::find_if(edges.begin(), edges.end(), [](const Edge& e) { return !e.is_loop(); });
    if (pivot == edges.end()) return theta_bouquet(g.edge_count());  // connected + all loops => one node
    const auto e = static_cast<EdgeId>(pivot - edges.begin());
    return one_minus_beta_times(theta(delete_edge(g, e))) + beta_times(theta(contract(g, e)));
  }

  std::map<std::string, BiPoly> memo_;
};

}  // namespace detail

/// theta via theta_G = (1 - b) theta_{G\e} + b theta_{G/e} on the lowest-id
/// non-loop edge; bouquets are the base case and components multiply.
inline ThetaPoly theta_contraction_deletion(const Multigraph& g) {
  detail::ContractionDeletion cd;
  return {cd.theta(g), g.node_count(), g.edge_count()};
}

struct ThetaAtBetaOne {
  IntPoly substituted;    // theta_G(1, g)
  IntPoly binomial_form;  // sum_k C(n, k) f_{2k}(g), n = cycle rank
};

/// theta at b = 1 is determined by the cycle rank.
inline ThetaAtBetaOne theta_at_beta1(const Multigraph& g) {
  const std::size_t n = cycle_rank(g);  // throws DomainError when disconnected
  ThetaAtBetaOne out;
  out.substituted = theta_direct(g).poly.at_beta(1);
  for (std::size_t k = 0; k <= n; ++k)
    out.binomial_form += f_poly(2 * k) * IntPoly(binomial(static_cast<unsigned>(n), static_cast<unsigned>(k)));
  return out;
}

/// ((5 - sqrt5)/2)^(n-1) + ((5 + sqrt5)/2)^(n-1), n = cycle rank.
inline double golden_ratio_bound(std::size_t cycle_rank_value) {
  const double s5 = std::sqrt(5.0), e = static_cast<double>(cycle_rank_value) - 1.0;
  return std::pow((5.0 - s5) / 2.0, e) + std::pow((5.0 + s5) / 2.0, e);
}

/// theta_G(1, xi = golden ratio), i.e. g = 1: an exact integer.
inline BigInt golden_ratio_value(const Multigraph& g) { return theta_direct(g).poly.at_beta(1).eval(BigInt(1)); }

struct LoopCountBound {
  double bound = 0.0;
  BigInt theta_value;     // theta(1, g = 1), equals the bound
  std::size_t count = 0;  // generalized loops including the empty set
  bool attained = false;  // every node of every generalized loop has degree <= 3
};

inline LoopCountBound loop_count_bound(const Multigraph& g) {
  if (!g.is_simple()) throw DomainError("loop_count_bound: graph must be simple");
  LoopCountBound out;
  out.bound = golden_ratio_bound(cycle_rank(g));
  out.theta_value = golden_ratio_value(g);
  const auto loops = enumerate_generalized_loops(g);
  out.count = loops.size();
  out.attained = std::all_of(loops.begin(), loops.end(), [&](EdgeSubset s) {
    const auto d = subset_degrees(g, s);
    return *std::max_element(d.begin(), d.end()) <= 3;
  });

  const double tv = out.theta_value.convert_to<double>();
  if (std::abs(tv - out.bound) > 1e-9 * std::max(1.0, out.bound))
    throw IdentityViolation("loop_count_bound: theta(1, golden ratio) differs from the closed form");
  if (static_cast<double>(out.count) > out.bound + 1e-9)
    throw IdentityViolation("loop_count_bound: generalized loop count exceeds the bound");
  if ((BigInt(out.count) == out.theta_value) != out.attained)
    throw IdentityViolation("loop_count_bound: equality does not match the degree condition");
  return out;
}

struct OmegaPoly {
  IntPoly poly;  // in b
};

/// theta evaluated at g = 2i with the (1 - b)^{|E| - |V|} factor removed
/// exactly over the Gaussian integers; a negative exponent multiplies.
/// Disconnected graphs are accepted (omega is multiplicative).
inline OmegaPoly omega(const Multigraph& g) {
  const BiPoly theta = theta_contraction_deletion(g).poly;
  GaussPoly at_i = theta.at_gamma(GaussInt(0, 2));
  const GaussPoly one_minus_b = GaussPoly(GaussInt(1)) - GaussPoly::x();
  const long exponent = static_cast<long>(g.edge_count()) - static_cast<long>(g.node_count());
  if (exponent >= 0)
    at_i = exact_divide(at_i, one_minus_b.pow(static_cast<unsigned>(exponent)));
  else
    at_i *= one_minus_b.pow(static_cast<unsigned>(-exponent));
  OmegaPoly out;
  for (const auto& [k, c] : at_i.terms()) {
    if (!c.is_real()) throw IdentityViolation("omega: residual imaginary part in coefficient of b^" + std::to_string(k));
    out.poly.add_term(k, c.re);
  }
  return out;
}

/// omega_G == omega_{G\e} + b omega_{G/e} for a non-loop edge e.
inline bool omega_recurrence_check(const Multigraph& g, EdgeId e) {
  if (g.edge(e).is_loop()) throw DomainError("omega_recurrence_check: pivot must not be a self-loop");
  return omega(g).poly == omega(delete_edge(g, e)).poly + IntPoly::x() * omega(contract(g, e)).poly;
}

/// Injective maps V -> E with every node sent to an incident edge.
inline BigInt count_injective_incident_assignments(const Multigraph& g) {
  std::vector<std::vector<EdgeId>> incident(g.node_count());
  for (NodeId i = 0; i < g.node_count(); ++i) incident[i] = g.incident_edges(i);
  std::vector<bool> used(g.edge_count(), false);
  BigInt count = 0;
  auto recurse = [&](auto&& self, NodeId i) -> void {
    if (i == g.node_count()) {
      ++count;
      return;
    }
    for (EdgeId e : incident[i])
      if (!used[e]) {
        used[e] = true;
        self(self, i + 1);
        used[e] = false;
      }
  };
  recurse(recurse, 0);
  return count;
}

struct OmegaAtOne {
  BigInt value;  // omega_G(1)
  BigInt count;  // injective incident-edge assignments
};

inline OmegaAtOne omega_at_1_count(const Multigraph& g) {
  if (g.has_self_loop()) throw DomainError("omega_at_1_count: graph has a self-loop");
  OmegaAtOne out{omega(g).poly.eval(BigInt(1)), count_injective_incident_assignments(g)};
  if (out.value != out.count)
    throw IdentityViolation("omega_at_1_count: omega(1) = " + out.value.str() + " but count = " + out.count.str());
  return out;
}

/// alpha_G(x) = sum_k (-1)^k p(k) x^{n-2k}.
inline IntPoly matching_polynomial(const Multigraph& g) {
  const auto p = enumerate_matchings(g);  // throws on self-loops
  const std::size_t n = g.node_count();
  IntPoly alpha;
  for (std::size_t k = 0; k < p.size(); ++k)
    alpha.add_term(static_cast<unsigned>(n - 2 * k), BigInt(p[k]) * ((k % 2 == 0) ? 1 : -1));
  return alpha;
}

/// Fraction-free (Bareiss) determinant over Z[u] with row pivoting.
inline IntPoly bareiss_determinant(std::vector<std::vector<IntPoly>> m) {
  const std::size_t n = m.size();
  if (n == 0) return IntPoly(1);
  IntPoly prev(1);
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t r = k + 1;
      while (r < n && m[r][k].is_zero()) ++r;
      if (r == n) return IntPoly();
      std::swap(m[k], m[r]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j)
        m[i][j] = exact_divide(m[k][k] * m[i][j] - m[i][k] * m[k][j], prev);
      m[i][k] = IntPoly();
    }
    prev = m[k][k];
  }
  return negate ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

struct DeterminantForm {
  IntPoly cycle_sum;  // sum_C 2^{k(C)} det[I + u^2 (D - I) - u A]|_{G\C} u^{|C|}
  IntPoly omega_u2;   // omega_G(u^2)
};

/// Sum over node-disjoint cycle sets of weighted principal-minor
/// determinants, compared with omega_G(u^2).
inline DeterminantForm omega_determinant_form(const Multigraph& g) {
  if (!g.is_simple()) throw DomainError("omega_determinant_form: graph must be simple");
  if (!is_connected(g).connected) throw DomainError("omega_determinant_form: graph must be connected");
  if (g.node_count() > kDeterminantNodeCap) throw SizeError("omega_determinant_form: too many nodes");
  const auto deg = g.degrees();
  const IntPoly u = IntPoly::x();
  const IntPoly u2 = u * u;

  DeterminantForm out;
  for (const CycleCover& cover : enumerate_disjoint_cycles(g)) {
    const auto covered = subset_degrees(g, cover.edges);
    std::vector<NodeId> rest;
    std::vector<std::size_t> pos(g.node_count(), 0);
    for (NodeId i = 0; i < g.node_count(); ++i)
      if (covered[i] == 0) {
        pos[i] = rest.size();
        rest.push_back(i);
      }
    std::vector<std::vector<IntPoly>> mat(rest.size(), std::vector<IntPoly>(rest.size()));
    for (std::size_t r = 0; r < rest.size(); ++r)
      mat[r][r] = IntPoly(1) + u2 * IntPoly(BigInt(static_cast<long>(deg[rest[r]]) - 1));
    for (const Edge& e : g.edges())
      if (covered[e.a] == 0 && covered[e.b] == 0) {
        mat[pos[e.a]][pos[e.b]] -= u;
        mat[pos[e.b]][pos[e.a]] -= u;
      }
    const BigInt weight = BigInt(1) << static_cast<unsigned>(cover.components);
    out.cycle_sum += bareiss_determinant(std::move(mat)) * IntPoly::monomial(weight, static_cast<unsigned>(cover.edges.size()));
  }
  out.omega_u2 = omega(g).poly.substitute_power(2);
  if (!(out.cycle_sum == out.omega_u2))
    throw IdentityViolation("omega_determinant_form: cycle sum " + out.cycle_sum.render("u") +
                            " != omega(u^2) " + out.omega_u2.render("u"));
  return out;
}

struct RegularMatchingForm {
  IntPoly matching_side;  // alpha_G(1/u + q u) u^n
  IntPoly omega_u2;       // omega_G(u^2)
  std::size_t q = 0;
};

/// For a (q+1)-regular simple graph, omega_G(u^2) = alpha_G(1/u + q u) u^n.
/// Each x^{n-2k} term becomes u^{2k} (1 + q u^2)^{n-2k}, so no negative
/// powers are ever formed.
inline RegularMatchingForm regular_graph_matching_check(const Multigraph& g) {
  if (!g.is_simple()) throw DomainError("regular_graph_matching_check: graph must be simple");
  const auto deg = g.degrees();
  if (std::adjacent_find(deg.begin(), deg.end(), std::not_equal_to<>()) != deg.end() || deg.front() == 0)
    throw DomainError("regular_graph_matching_check: graph is not regular");
  RegularMatchingForm out;
  out.q = deg.front() - 1;
  const std::size_t n = g.node_count();
  const auto p = enumerate_matchings(g);
  const IntPoly base = IntPoly(1) + IntPoly::monomial(BigInt(out.q), 2);
  for (std::size_t k = 0; k < p.size(); ++k) {
    const BigInt c = BigInt(p[k]) * ((k % 2 == 0) ? 1 : -1);
    out.matching_side += IntPoly::monomial(c, static_cast<unsigned>(2 * k)) * base.pow(static_cast<unsigned>(n - 2 * k));
  }
  out.omega_u2 = omega(g).poly.substitute_power(2);
  if (!(out.matching_side == out.omega_u2))
    throw IdentityViolation("regular_graph_matching_check: alpha form " + out.matching_side.render("u") +
                            " != omega(u^2) " + out.omega_u2.render("u"));
  return out;
}

}  // namespace loopcorrect
