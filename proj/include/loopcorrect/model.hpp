#pragma once

// Binary Markov random fields. States are spins x in {-1, +1} stored at
// table index 0 (x = -1) and 1 (x = +1). Multi-variable tables put the
// first scope variable in the most significant bit.

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "loopcorrect/errors.hpp"
#include "loopcorrect/graph.hpp"

namespace loopcorrect {

using NodeTable = std::array<double, 2>;
using PairTable = std::array<std::array<double, 2>, 2>;

/// Smallest admissible potential entry; anything below is rejected, never clamped.
inline constexpr double kPotentialFloor = 1e-300;

constexpr int spin_of(std::size_t index) noexcept { return index == 0 ? -1 : +1; }
constexpr std::size_t index_of(int spin) noexcept { return spin > 0 ? 1 : 0; }

namespace detail {

inline void check_entry(double v, const std::string& where) {
  if (!std::isfinite(v) || !(v >= kPotentialFloor))
    throw ArgumentError(where + ": potential entries must be finite and > 0 (got " + std::to_string(v) + ")");
}

}  // namespace detail

class PairwiseModel {
 public:
  /// node_potentials may be empty, meaning phi == 1 everywhere.
  PairwiseModel(Multigraph graph, std::vector<PairTable> edge_potentials,
                std::vector<NodeTable> node_potentials = {})
      : graph_(std::move(graph)), psi_(std::move(edge_potentials)), phi_(std::move(node_potentials)) {
    if (phi_.empty()) phi_.assign(graph_.node_count(), NodeTable{1.0, 1.0});
    if (psi_.size() != graph_.edge_count())
      throw ArgumentError("PairwiseModel: need one edge table per edge");
    if (phi_.size() != graph_.node_count())
      throw ArgumentError("PairwiseModel: need one node table per node");
    if (!graph_.is_simple()) throw DomainError("PairwiseModel: graph must be simple");
    if (!is_connected(graph_).connected) throw DomainError("PairwiseModel: graph must be connected");
    for (std::size_t e = 0; e < psi_.size(); ++e)
      for (const auto& row : psi_[e])
        for (double v : row) detail::check_entry(v, "edge " + std::to_string(e));
    for (std::size_t i = 0; i < phi_.size(); ++i)
      for (double v : phi_[i]) detail::check_entry(v, "node " + std::to_string(i));
  }

  [[nodiscard]] const Multigraph& graph() const noexcept { return graph_; }
  [[nodiscard]] std::size_t node_count() const noexcept { return graph_.node_count(); }
  [[nodiscard]] std::size_t edge_count() const noexcept { return graph_.edge_count(); }
  [[nodiscard]] const std::vector<PairTable>& edge_potentials() const noexcept { return psi_; }
  [[nodiscard]] const std::vector<NodeTable>& node_potentials() const noexcept { return phi_; }

  /// psi_e(x_a, x_b) for edge e = (a, b), spins in {-1, +1}.
  [[nodiscard]] double psi(EdgeId e, int xa, int xb) const { return psi_[e][index_of(xa)][index_of(xb)]; }
  [[nodiscard]] double phi(NodeId i, int x) const { return phi_[i][index_of(x)]; }

  [[nodiscard]] bool has_trivial_node_potentials() const {
    for (const auto& p : phi_)
      if (p[0] != 1.0 || p[1] != 1.0) return false;
    return true;
  }

  friend bool operator==(const PairwiseModel&, const PairwiseModel&) = default;

 private:
  Multigraph graph_;
  std::vector<PairTable> psi_;
  std::vector<NodeTable> phi_;
};

struct Factor {
  std::vector<NodeId> scope;
  std::vector<double> table;  // 2^|scope| entries

  [[nodiscard]] std::size_t arity() const noexcept { return scope.size(); }

  /// Table index for a full assignment (spins indexed by variable id).
  template <class SpinOf>
  [[nodiscard]] std::size_t index(SpinOf spin_of_var) const {
    std::size_t idx = 0;
    for (NodeId v : scope) idx = (idx << 1U) | index_of(spin_of_var(v));
    return idx;
  }

  /// Spin of the k-th scope variable in table entry idx.
  [[nodiscard]] int spin_at(std::size_t idx, std::size_t k) const noexcept {
    return spin_of((idx >> (scope.size() - 1 - k)) & 1U);
  }

  friend bool operator==(const Factor&, const Factor&) = default;
};

class FactorModel {
 public:
  FactorModel(std::size_t variable_count, std::vector<Factor> factors)
      : n_(variable_count), factors_(std::move(factors)) {
    if (n_ == 0) throw ArgumentError("FactorModel: need at least one variable");
    std::vector<bool> covered(n_, false);
    for (std::size_t f = 0; f < factors_.size(); ++f) {
      const Factor& fac = factors_[f];
      const std::string where = "factor " + std::to_string(f);
      if (fac.scope.empty()) throw ArgumentError(where + ": empty scope");
      if (fac.scope.size() > 20) throw SizeError(where + ": arity too large");
      for (std::size_t k = 0; k < fac.scope.size(); ++k) {
        if (fac.scope[k] >= n_) throw ArgumentError(where + ": variable id out of range");
        for (std::size_t l = 0; l < k; ++l)
          if (fac.scope[l] == fac.scope[k]) throw ArgumentError(where + ": duplicate variable in scope");
        covered[fac.scope[k]] = true;
      }
      if (fac.table.size() != (std::size_t{1} << fac.scope.size()))
        throw ArgumentError(where + ": table must have 2^arity entries");
      for (double v : fac.table) detail::check_entry(v, where);
    }
    for (std::size_t i = 0; i < n_; ++i)
      if (!covered[i]) throw ArgumentError("FactorModel: variable " + std::to_string(i) + " is in no factor");
  }

  [[nodiscard]] std::size_t variable_count() const noexcept { return n_; }
  [[nodiscard]] const std::vector<Factor>& factors() const noexcept { return factors_; }

  /// Factor ids containing variable i, ascending.
  [[nodiscard]] std::vector<std::size_t> factors_of(NodeId i) const {
    std::vector<std::size_t> out;
    for (std::size_t f = 0; f < factors_.size(); ++f)
      for (NodeId v : factors_[f].scope)
        if (v == i) out.push_back(f);
    return out;
  }

  friend bool operator==(const FactorModel&, const FactorModel&) = default;

 private:
  std::size_t n_;
  std::vector<Factor> factors_;
};

/// Folds every phi_i into the incident edge of smallest id. The joint
/// distribution is unchanged; the result has phi == 1.
inline PairwiseModel absorb_node_potentials(const PairwiseModel& m) {
  const Multigraph& g = m.graph();
  std::vector<PairTable> psi = m.edge_potentials();
  for (NodeId i = 0; i < g.node_count(); ++i) {
    const auto inc = g.incident_edges(i);
    if (inc.empty()) throw DomainError("absorb_node_potentials: node " + std::to_string(i) + " is isolated");
    const EdgeId e = inc.front();
    const NodeTable& ph = m.node_potentials()[i];
    for (std::size_t s = 0; s < 2; ++s)
      for (std::size_t t = 0; t < 2; ++t) psi[e][s][t] *= (g.edges()[e].a == i) ? ph[s] : ph[t];
  }
  return PairwiseModel(g, std::move(psi));
}

/// One arity-2 factor per edge (scope = (a, b)) after absorbing node potentials.
inline FactorModel to_factor_model(const PairwiseModel& m) {
  const PairwiseModel absorbed = absorb_node_potentials(m);
  std::vector<Factor> factors;
  for (EdgeId e = 0; e < absorbed.edge_count(); ++e) {
    const Edge& ed = absorbed.graph().edges()[e];
    const PairTable& t = absorbed.edge_potentials()[e];
    factors.push_back({{ed.a, ed.b}, {t[0][0], t[0][1], t[1][0], t[1][1]}});
  }
  return FactorModel(m.node_count(), std::move(factors));
}

/// Bipartite incidence graph: variable nodes 0..N-1, then factor nodes
/// N..N+|F|-1; one edge per (variable, factor) incidence, listed factor by
/// factor in scope order.
inline Multigraph factor_incidence_graph(const FactorModel& fm) {
  const std::size_t n = fm.variable_count();
  std::vector<Edge> edges;
  for (std::size_t f = 0; f < fm.factors().size(); ++f)
    for (NodeId v : fm.factors()[f].scope) edges.push_back({v, n + f});
  return Multigraph(n + fm.factors().size(), std::move(edges));
}

}  // namespace loopcorrect
