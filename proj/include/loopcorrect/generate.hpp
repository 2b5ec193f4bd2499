#pragma once

// Seeded model generators. Pairwise models use the exponential family
//   psi_ij(x, y) = exp(J_ij x y),  phi_i(x) = exp(h_i x)
// with J_ij ~ U[-J, J] and h_i ~ U[-h, h]. Uniform draws are built from raw
// mt19937_64 output so a seed gives the same model on every platform.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "loopcorrect/errors.hpp"
#include "loopcorrect/graph.hpp"
#include "loopcorrect/model.hpp"

namespace loopcorrect {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11U) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  /// Uniform integer in [0, n).
  std::size_t below(std::size_t n) {
    if (n == 0) throw ArgumentError("Rng::below: empty range");
    return static_cast<std::size_t>(engine_() % n);
  }

 private:
  std::mt19937_64 engine_;
};

struct CouplingParams {
  double coupling = 1.0;  // J
  double field = 0.5;     // h
};

inline PairwiseModel ising_model(const Multigraph& g, const CouplingParams& p, Rng& rng) {
  std::vector<PairTable> psi;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const double j = rng.uniform(-p.coupling, p.coupling);
    psi.push_back({{{std::exp(j), std::exp(-j)}, {std::exp(-j), std::exp(j)}}});
  }
  std::vector<NodeTable> phi;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const double h = rng.uniform(-p.field, p.field);
    phi.push_back({std::exp(-h), std::exp(h)});
  }
  return PairwiseModel(g, std::move(psi), std::move(phi));
}

/// Uniform pairwise coupling e^{J x y} on every edge, no fields.
inline PairwiseModel uniform_coupling_model(const Multigraph& g, double coupling) {
  const PairTable t = {{{std::exp(coupling), std::exp(-coupling)}, {std::exp(-coupling), std::exp(coupling)}}};
  return PairwiseModel(g, std::vector<PairTable>(g.edge_count(), t));
}

namespace topology {

/// Random recursive tree: node i attaches to a uniform earlier node.
inline Multigraph random_tree(std::size_t n, Rng& rng) {
  if (n == 0) throw ArgumentError("random_tree: need at least one node");
  std::vector<Edge> e;
  for (NodeId i = 1; i < n; ++i) e.push_back({rng.below(i), i});
  return Multigraph(n, std::move(e));
}

/// Connected simple graph with n nodes and m edges: a random spanning tree
/// plus m - n + 1 distinct extra edges.
inline Multigraph random_connected(std::size_t n, std::size_t m, Rng& rng) {
  const std::size_t max_edges = n * (n - 1) / 2;
  if (n == 0 || m + 1 < n || m > max_edges)
    throw GenerationError("random_connected: no connected simple graph with " + std::to_string(n) + " nodes and " +
                          std::to_string(m) + " edges");
  for (int attempt = 0; attempt < 100; ++attempt) {
    Multigraph tree = random_tree(n, rng);
    std::vector<Edge> edges = tree.edges();
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (const Edge& e : edges) adj[e.a][e.b] = adj[e.b][e.a] = true;
    std::size_t guard = 0;
    while (edges.size() < m && guard++ < 100 * max_edges) {
      const NodeId a = rng.below(n), b = rng.below(n);
      if (a == b || adj[a][b]) continue;
      adj[a][b] = adj[b][a] = true;
      edges.push_back({std::min(a, b), std::max(a, b)});
    }
    if (edges.size() == m) {
      Multigraph g(n, std::move(edges));
      if (is_connected(g).connected) return g;
    }
  }
  throw GenerationError("random_connected: failed to realize the topology after retries");
}

/// A cycle of `cycle_len` nodes with `extra` tree nodes hanging off it.
inline Multigraph cycle_with_trees(std::size_t cycle_len, std::size_t extra, Rng& rng) {
  Multigraph c = graphs::cycle(cycle_len);
  std::vector<Edge> e = c.edges();
  for (NodeId i = cycle_len; i < cycle_len + extra; ++i) e.push_back({rng.below(i), i});
  return Multigraph(cycle_len + extra, std::move(e));
}

}  // namespace topology

struct FactorGenParams {
  std::size_t variables = 6;
  std::size_t max_arity = 3;
  std::size_t max_incidences = 14;
  double strength = 1.0;  // log-table entries ~ U[-strength, strength]
};

/// Random factor model whose incidence graph is connected: a chain of
/// factors, each sharing a variable with an earlier one, until every
/// variable is covered, then optional extra factors up to the incidence cap.
inline FactorModel random_factor_model(const FactorGenParams& p, Rng& rng) {
  if (p.variables == 0 || p.max_arity == 0) throw ArgumentError("random_factor_model: empty parameters");
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<Factor> factors;
    std::vector<bool> covered(p.variables, false);
    std::size_t incidences = 0, covered_count = 0;
    auto add_factor = [&](std::vector<NodeId> scope) {
      Factor f;
      f.scope = std::move(scope);
      for (std::size_t k = 0; k < (std::size_t{1} << f.scope.size()); ++k)
        f.table.push_back(std::exp(rng.uniform(-p.strength, p.strength)));
      for (NodeId v : f.scope)
        if (!covered[v]) {
          covered[v] = true;
          ++covered_count;
        }
      incidences += f.scope.size();
      factors.push_back(std::move(f));
    };
    auto pick_scope = [&](NodeId anchor) {
      std::size_t arity = 1 + rng.below(std::min(p.max_arity, p.variables));
      std::vector<NodeId> scope = {anchor};
      while (scope.size() < arity) {
        const NodeId v = rng.below(p.variables);
        if (std::find(scope.begin(), scope.end(), v) == scope.end()) scope.push_back(v);
      }
      return scope;
    };

    while (covered_count < p.variables) {
      NodeId anchor = 0;
      if (covered_count > 0) {
        do anchor = rng.below(p.variables);
        while (!covered[anchor]);
      }
      auto scope = pick_scope(anchor);
      // force progress: the factor must include an uncovered variable
      if (covered_count > 0 && std::all_of(scope.begin(), scope.end(), [&](NodeId v) { return covered[v]; })) {
        NodeId fresh = 0;
        while (covered[fresh]) ++fresh;
        if (scope.size() == 1) scope.push_back(fresh);
        else scope.back() = fresh;
      }
      add_factor(std::move(scope));
    }
    while (incidences < p.max_incidences && rng.unit() < 0.5) {
      auto scope = pick_scope(rng.below(p.variables));
      if (incidences + scope.size() > p.max_incidences) break;
      add_factor(std::move(scope));
    }
    if (incidences <= p.max_incidences) return FactorModel(p.variables, std::move(factors));
  }
  throw GenerationError("random_factor_model: could not stay within the incidence cap");
}

}  // namespace loopcorrect
