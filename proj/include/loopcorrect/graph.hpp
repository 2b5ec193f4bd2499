#pragma once

// Undirected multigraphs (parallel edges and self-loops allowed) and the
// edge-subset enumerations the loop series and graph polynomials run on.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "loopcorrect/errors.hpp"

namespace loopcorrect {

using NodeId = std::size_t;
using EdgeId = std::size_t;

struct Edge {
  NodeId a = 0;
  NodeId b = 0;

  [[nodiscard]] bool is_loop() const noexcept { return a == b; }
  [[nodiscard]] bool touches(NodeId i) const noexcept { return a == i || b == i; }
  friend bool operator==(const Edge&, const Edge&) = default;
};

class Multigraph {
 public:
  Multigraph() : node_count_(1) {}

  explicit Multigraph(std::size_t node_count, std::vector<Edge> edges = {})
      : node_count_(node_count), edges_(std::move(edges)) {
    if (node_count_ == 0) throw ArgumentError("Multigraph: node_count must be positive");
    for (const Edge& e : edges_) {
      if (e.a >= node_count_ || e.b >= node_count_) {
        throw ArgumentError("Multigraph: edge endpoint " +
                            std::to_string(std::max(e.a, e.b)) +
                            " out of range for " + std::to_string(node_count_) + " nodes");
      }
    }
  }

  [[nodiscard]] std::size_t node_count() const noexcept { return node_count_; }
  [[nodiscard]] std::size_t edge_count() const noexcept { return edges_.size(); }
  [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }
  [[nodiscard]] const Edge& edge(EdgeId e) const {
    check_edge(e);
    return edges_[e];
  }

  void check_node(NodeId i) const {
    if (i >= node_count_) throw ArgumentError("invalid node id " + std::to_string(i));
  }
  void check_edge(EdgeId e) const {
    if (e >= edges_.size()) throw ArgumentError("invalid edge id " + std::to_string(e));
  }

  /// Full degree; a self-loop counts twice.
  [[nodiscard]] std::size_t degree(NodeId i) const {
    check_node(i);
    std::size_t d = 0;
    for (const Edge& e : edges_) d += (e.a == i) + (e.b == i);
    return d;
  }

  [[nodiscard]] std::vector<std::size_t> degrees() const {
    std::vector<std::size_t> d(node_count_, 0);
    for (const Edge& e : edges_) {
      ++d[e.a];
      ++d[e.b];
    }
    return d;
  }

  [[nodiscard]] bool has_self_loop() const noexcept {
    return std::any_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.is_loop(); });
  }

  /// No self-loops and no parallel edges.
  [[nodiscard]] bool is_simple() const {
    if (has_self_loop()) return false;
    std::vector<std::pair<NodeId, NodeId>> seen;
    seen.reserve(edges_.size());
    for (const Edge& e : edges_) seen.emplace_back(std::min(e.a, e.b), std::max(e.a, e.b));
    std::sort(seen.begin(), seen.end());
    return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
  }

  /// Edge ids incident to i, in id order; a self-loop appears once.
  [[nodiscard]] std::vector<EdgeId> incident_edges(NodeId i) const {
    check_node(i);
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < edges_.size(); ++e)
      if (edges_[e].touches(i)) out.push_back(e);
    return out;
  }

  friend bool operator==(const Multigraph&, const Multigraph&) = default;

 private:
  std::size_t node_count_;
  std::vector<Edge> edges_;
};

/// Subsets are stored as bitmasks; enumerations are exponential in |E| anyway.
inline constexpr std::size_t kMaxSubsetEdges = 62;

class EdgeSubset {
 public:
  constexpr EdgeSubset() = default;
  constexpr explicit EdgeSubset(std::uint64_t mask) : mask_(mask) {}

  static EdgeSubset from_ids(const std::vector<EdgeId>& ids) {
    std::uint64_t m = 0;
    for (EdgeId e : ids) {
      if (e >= 64) throw ArgumentError("EdgeSubset: edge id too large for a bitmask");
      m |= std::uint64_t{1} << e;
    }
    return EdgeSubset(m);
  }
  static EdgeSubset all(std::size_t edge_count) {
    if (edge_count > kMaxSubsetEdges) throw SizeError("EdgeSubset: too many edges");
    return EdgeSubset(edge_count == 0 ? 0 : (~std::uint64_t{0} >> (64 - edge_count)));
  }

  [[nodiscard]] constexpr std::uint64_t mask() const noexcept { return mask_; }
  [[nodiscard]] constexpr bool contains(EdgeId e) const noexcept {
    return e < 64 && ((mask_ >> e) & 1U) != 0;
  }
  [[nodiscard]] constexpr std::size_t size() const noexcept {
    return static_cast<std::size_t>(std::popcount(mask_));
  }
  [[nodiscard]] constexpr bool empty() const noexcept { return mask_ == 0; }

  [[nodiscard]] std::vector<EdgeId> ids() const {
    std::vector<EdgeId> out;
    for (std::uint64_t m = mask_; m != 0; m &= m - 1)
      out.push_back(static_cast<EdgeId>(std::countr_zero(m)));
    return out;
  }

  /// Members must be valid edges of g.
  void check_against(const Multigraph& g) const {
    if (g.edge_count() < 64 && (mask_ >> g.edge_count()) != 0)
      throw ArgumentError("EdgeSubset: member edge id outside host graph");
  }

  friend constexpr bool operator==(EdgeSubset, EdgeSubset) = default;
  friend constexpr auto operator<=>(EdgeSubset, EdgeSubset) = default;

 private:
  std::uint64_t mask_ = 0;
};

/// Degree of i in the subgraph formed by s; a self-loop contributes 2.
inline std::size_t degree_in_subset(const Multigraph& g, EdgeSubset s, NodeId i) {
  g.check_node(i);
  s.check_against(g);
  std::size_t d = 0;
  for (EdgeId e : s.ids()) {
    const Edge& ed = g.edges()[e];
    d += (ed.a == i) + (ed.b == i);
  }
  return d;
}

/// All node degrees within s at once.
inline std::vector<std::size_t> subset_degrees(const Multigraph& g, EdgeSubset s) {
  s.check_against(g);
  std::vector<std::size_t> d(g.node_count(), 0);
  for (EdgeId e : s.ids()) {
    ++d[g.edges()[e].a];
    ++d[g.edges()[e].b];
  }
  return d;
}

struct Connectivity {
  bool connected = true;
  std::size_t components = 1;
};

/// Component label per node, labels assigned in order of smallest member.
inline std::vector<std::size_t> component_labels(const Multigraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Edge& e : g.edges()) {
    std::size_t ra = find(e.a), rb = find(e.b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  std::vector<std::size_t> label(n), root_label(n, n);
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = find(i);
    if (root_label[r] == n) root_label[r] = next++;
    label[i] = root_label[r];
  }
  return label;
}

inline Connectivity is_connected(const Multigraph& g) {
  const auto labels = component_labels(g);
  const std::size_t k = *std::max_element(labels.begin(), labels.end()) + 1;
  return {k == 1, k};
}

/// |E| - |V| + 1; the graph must be connected.
inline std::size_t cycle_rank(const Multigraph& g) {
  if (!is_connected(g).connected) throw DomainError("cycle_rank: graph is not connected");
  return g.edge_count() + 1 - g.node_count();
}

/// G/e: merges the endpoints of a non-loop edge into the smaller id and
/// shifts higher ids down by one. Other edges keep their relative order.
inline Multigraph contract(const Multigraph& g, EdgeId e) {
  const Edge& pivot = g.edge(e);
  if (pivot.is_loop()) throw DomainError("contract: edge " + std::to_string(e) + " is a self-loop");
  const NodeId keep = std::min(pivot.a, pivot.b);
  const NodeId drop = std::max(pivot.a, pivot.b);
  auto relabel = [&](NodeId v) -> NodeId {
    if (v == drop) return keep;
    return v > drop ? v - 1 : v;
  };
  std::vector<Edge> out;
  out.reserve(g.edge_count() - 1);
  for (EdgeId f = 0; f < g.edge_count(); ++f) {
    if (f == e) continue;
    out.push_back({relabel(g.edges()[f].a), relabel(g.edges()[f].b)});
  }
  return Multigraph(g.node_count() - 1, std::move(out));
}

/// G\e: same nodes, edge removed.
inline Multigraph delete_edge(const Multigraph& g, EdgeId e) {
  g.check_edge(e);
  std::vector<Edge> out;
  out.reserve(g.edge_count() - 1);
  for (EdgeId f = 0; f < g.edge_count(); ++f)
    if (f != e) out.push_back(g.edges()[f]);
  return Multigraph(g.node_count(), std::move(out));
}

namespace detail {

// Include/exclude search over edges in id order. `remaining[i]` counts the
// undecided endpoint incidences at i, so a node is final once it reaches 0.
template <class NodeOk, class NodeFinal>
void search_subsets(const Multigraph& g, NodeOk node_ok, NodeFinal node_final,
                    std::vector<std::uint64_t>& out) {
  if (g.edge_count() > kMaxSubsetEdges) throw SizeError("edge subset enumeration: too many edges");
  const std::size_t n = g.node_count();
  std::vector<std::size_t> deg(n, 0), remaining = g.degrees();

  for (NodeId i = 0; i < n; ++i)
    if (remaining[i] == 0 && !node_final(i, std::size_t{0})) return;

  auto recurse = [&](auto&& self, EdgeId e, std::uint64_t mask) -> void {
    if (e == g.edge_count()) {
      out.push_back(mask);
      return;
    }
    const Edge& ed = g.edges()[e];
    --remaining[ed.a];
    --remaining[ed.b];
    auto feasible = [&] {
      for (NodeId v : {ed.a, ed.b}) {
        if (!node_ok(v, deg[v])) return false;
        if (remaining[v] == 0 && !node_final(v, deg[v])) return false;
      }
      return true;
    };
    // excluded first keeps the output close to ascending mask order
    if (feasible()) self(self, e + 1, mask);
    ++deg[ed.a];
    ++deg[ed.b];
    if (feasible()) self(self, e + 1, mask | (std::uint64_t{1} << e));
    --deg[ed.a];
    --deg[ed.b];
    ++remaining[ed.a];
    ++remaining[ed.b];
  };
  recurse(recurse, 0, 0);
  std::sort(out.begin(), out.end());
}

}  // namespace detail

/// Edge subsets (including the empty one) in which no node has degree
/// exactly 1. Nodes listed in `exempt` may have degree 1. Ascending mask order.
inline std::vector<EdgeSubset> enumerate_generalized_loops(const Multigraph& g,
                                                           std::optional<NodeId> exempt = std::nullopt) {
  if (exempt) g.check_node(*exempt);
  std::vector<std::uint64_t> masks;
  detail::search_subsets(
      g, [](NodeId, std::size_t) { return true; },
      [&](NodeId v, std::size_t d) { return d != 1 || (exempt && *exempt == v); }, masks);
  std::vector<EdgeSubset> out;
  out.reserve(masks.size());
  for (auto m : masks) out.emplace_back(m);
  return out;
}

/// Reference filter over all 2^|E| subsets; used to validate the pruned search.
inline std::vector<EdgeSubset> enumerate_generalized_loops_naive(const Multigraph& g) {
  if (g.edge_count() > 30) throw SizeError("naive enumeration capped at 30 edges");
  std::vector<EdgeSubset> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << g.edge_count()); ++m) {
    const auto d = subset_degrees(g, EdgeSubset(m));
    if (std::find(d.begin(), d.end(), std::size_t{1}) == d.end()) out.emplace_back(m);
  }
  return out;
}

struct CycleCover {
  EdgeSubset edges;
  std::size_t components = 0;  // k(C)
};

/// Node-disjoint unions of cycles: every touched node has degree exactly 2.
inline std::vector<CycleCover> enumerate_disjoint_cycles(const Multigraph& g) {
  std::vector<std::uint64_t> masks;
  detail::search_subsets(
      g, [](NodeId, std::size_t d) { return d <= 2; },
      [](NodeId, std::size_t d) { return d == 0 || d == 2; }, masks);
  std::vector<CycleCover> out;
  out.reserve(masks.size());
  for (auto m : masks) {
    const EdgeSubset s(m);
    std::vector<Edge> kept;
    for (EdgeId e : s.ids()) kept.push_back(g.edges()[e]);
    const auto deg = subset_degrees(g, s);
    const auto labels = component_labels(Multigraph(g.node_count(), kept));
    std::vector<std::size_t> touched_labels;
    for (NodeId i = 0; i < g.node_count(); ++i)
      if (deg[i] > 0) touched_labels.push_back(labels[i]);
    std::sort(touched_labels.begin(), touched_labels.end());
    touched_labels.erase(std::unique(touched_labels.begin(), touched_labels.end()), touched_labels.end());
    out.push_back({s, touched_labels.size()});
  }
  return out;
}

/// p(k) = number of k-matchings for k = 0..floor(n/2).
inline std::vector<std::uint64_t> enumerate_matchings(const Multigraph& g) {
  if (g.has_self_loop()) throw DomainError("enumerate_matchings: graph has a self-loop");
  std::vector<std::uint64_t> counts(g.node_count() / 2 + 1, 0);
  std::vector<bool> used(g.node_count(), false);
  auto recurse = [&](auto&& self, EdgeId e, std::size_t k) -> void {
    if (e == g.edge_count()) {
      ++counts[k];
      return;
    }
    self(self, e + 1, k);
    const Edge& ed = g.edges()[e];
    if (!used[ed.a] && !used[ed.b]) {
      used[ed.a] = used[ed.b] = true;
      self(self, e + 1, k + 1);
      used[ed.a] = used[ed.b] = false;
    }
  };
  recurse(recurse, 0, 0);
  return counts;
}

// Named graph families used across tests, the CLI, and the generators.
namespace graphs {

inline Multigraph path(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return Multigraph(n, std::move(e));
}

inline Multigraph cycle(std::size_t n) {
  if (n < 3) throw ArgumentError("cycle: need at least 3 nodes for a simple cycle");
  std::vector<Edge> e;
  for (NodeId i = 0; i < n; ++i) e.push_back({i, (i + 1) % n});
  return Multigraph(n, std::move(e));
}

inline Multigraph complete(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j) e.push_back({i, j});
  return Multigraph(n, std::move(e));
}

inline Multigraph grid(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw ArgumentError("grid: empty dimension");
  std::vector<Edge> e;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const NodeId v = r * cols + c;
      if (c + 1 < cols) e.push_back({v, v + 1});
      if (r + 1 < rows) e.push_back({v, v + cols});
    }
  return Multigraph(rows * cols, std::move(e));
}

/// Single node with L self-loops.
inline Multigraph bouquet(std::size_t loops) {
  return Multigraph(1, std::vector<Edge>(loops, Edge{0, 0}));
}

/// Two triangles {0,1,2} and {3,4,5} joined by the bridge 2-3.
inline Multigraph two_triangles() {
  return Multigraph(6, {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}, {4, 5}, {3, 5}});
}

}  // namespace graphs

}  // namespace loopcorrect
