#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's enumeration or inference code; only the model and graph
// containers are shared.

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "loopcorrect/loopcorrect.hpp"

namespace testing_support {

namespace lc = loopcorrect;

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

/// Subset masks with no node of degree exactly 1, by plain filtering.
inline std::vector<std::uint64_t> naive_loop_masks(const lc::Multigraph& g) {
  std::vector<std::uint64_t> out;
  const std::size_t m = g.edge_count();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    std::vector<int> d(g.node_count(), 0);
    for (std::size_t k = 0; k < m; ++k)
      if (mask >> k & 1U) {
        ++d[g.edges()[k].a];
        ++d[g.edges()[k].b];
      }
    bool ok = true;
    for (int v : d) ok = ok && v != 1;
    if (ok) out.push_back(mask);
  }
  return out;
}

struct NaiveExact {
  long double z = 0;
  std::vector<std::array<long double, 2>> marginals;
  std::vector<std::array<std::array<long double, 2>, 2>> pair;
};

/// Plain product-of-potentials enumeration in long double.
inline NaiveExact naive_exact(const lc::PairwiseModel& m) {
  const std::size_t n = m.node_count();
  NaiveExact r;
  r.marginals.assign(n, {0, 0});
  r.pair.assign(m.edge_count(), {});
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    auto spin = [&](std::size_t i) { return (s >> i & 1U) ? 1 : -1; };
    long double w = 1;
    for (std::size_t e = 0; e < m.edge_count(); ++e) {
      const auto& ed = m.graph().edges()[e];
      w *= m.psi(e, spin(ed.a), spin(ed.b));
    }
    for (std::size_t i = 0; i < n; ++i) w *= m.phi(i, spin(i));
    r.z += w;
    for (std::size_t i = 0; i < n; ++i) r.marginals[i][spin(i) > 0] += w;
    for (std::size_t e = 0; e < m.edge_count(); ++e) {
      const auto& ed = m.graph().edges()[e];
      r.pair[e][spin(ed.a) > 0][spin(ed.b) > 0] += w;
    }
  }
  for (auto& p : r.marginals)
    for (auto& v : p) v /= r.z;
  for (auto& t : r.pair)
    for (auto& row : t)
      for (auto& v : row) v /= r.z;
  return r;
}

inline NaiveExact naive_exact(const lc::FactorModel& fm) {
  const std::size_t n = fm.variable_count();
  NaiveExact r;
  r.marginals.assign(n, {0, 0});
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    long double w = 1;
    for (const auto& f : fm.factors()) {
      std::size_t idx = 0;
      for (auto v : f.scope) idx = idx * 2 + (s >> v & 1U);
      w *= f.table[idx];
    }
    r.z += w;
    for (std::size_t i = 0; i < n; ++i) r.marginals[i][s >> i & 1U] += w;
  }
  for (auto& p : r.marginals)
    for (auto& v : p) v /= r.z;
  return r;
}

/// Plain recurrence f_0 = 1, f_1 = 0, f_{n+1} = x f_n + f_{n-1}.
inline double f_ref(std::size_t n, double x) {
  double a = 1, b = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double c = x * b + a;
    a = b;
    b = c;
  }
  return a;
}

inline double g_ref(std::size_t n, double x) {
  double a = x, b = -2;
  for (std::size_t k = 0; k < n; ++k) {
    const double c = x * b + a;
    a = b;
    b = c;
  }
  return a;
}

/// Pairwise model with psi = exp(J x y), phi = exp(h x), parameters from an
/// independent engine so tests do not depend on the library generator.
inline lc::PairwiseModel random_ising(const lc::Multigraph& g, std::mt19937_64& rng, double j, double h) {
  std::uniform_real_distribution<double> uj(-j, j), uh(-h, h);
  std::vector<lc::PairTable> psi;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const double c = uj(rng);
    psi.push_back({{{std::exp(c), std::exp(-c)}, {std::exp(-c), std::exp(c)}}});
  }
  std::vector<lc::NodeTable> phi;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const double f = uh(rng);
    phi.push_back({std::exp(-f), std::exp(f)});
  }
  return lc::PairwiseModel(g, psi, phi);
}

/// Arbitrary positive tables (not of Ising form).
inline lc::PairwiseModel random_positive(const lc::Multigraph& g, std::mt19937_64& rng, double lo = 0.2,
                                         double hi = 3.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<lc::PairTable> psi(g.edge_count());
  for (auto& t : psi)
    for (auto& row : t)
      for (auto& v : row) v = u(rng);
  std::vector<lc::NodeTable> phi(g.node_count());
  for (auto& p : phi)
    for (auto& v : p) v = u(rng);
  return lc::PairwiseModel(g, psi, phi);
}

/// Fixed corpus for the polynomial identities.
inline std::vector<std::pair<std::string, lc::Multigraph>> polynomial_corpus() {
  namespace gr = lc::graphs;
  std::vector<std::pair<std::string, lc::Multigraph>> c;
  c.emplace_back("path2", gr::path(2));
  c.emplace_back("path5", gr::path(5));
  c.emplace_back("star5", lc::Multigraph(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}));
  c.emplace_back("tree8", lc::Multigraph(8, {{0, 1}, {0, 2}, {1, 3}, {1, 4}, {2, 5}, {5, 6}, {5, 7}}));
  for (std::size_t n = 3; n <= 6; ++n) c.emplace_back("C" + std::to_string(n), gr::cycle(n));
  c.emplace_back("K4", gr::complete(4));
  c.emplace_back("grid2x3", gr::grid(2, 3));
  c.emplace_back("example1", gr::two_triangles());
  for (std::size_t l = 1; l <= 3; ++l) c.emplace_back("B" + std::to_string(l), gr::bouquet(l));
  c.emplace_back("parallel2", lc::Multigraph(2, {{0, 1}, {0, 1}}));
  c.emplace_back("parallel2_tail", lc::Multigraph(3, {{0, 1}, {0, 1}, {1, 2}}));
  c.emplace_back("parallel2_triangle", lc::Multigraph(3, {{0, 1}, {0, 1}, {1, 2}, {0, 2}}));
  return c;
}

}  // namespace testing_support
