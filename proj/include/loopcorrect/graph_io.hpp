#pragma once

// Edge-list text format:
//   N M
//   a b      (M lines, 0-based ids; "a a" is a self-loop)

#include <istream>
#include <sstream>
#include <string>

#include "loopcorrect/graph.hpp"

namespace loopcorrect {

inline Multigraph parse_edge_list(std::istream& in) {
  long long n = -1, m = -1;
  if (!(in >> n >> m) || n <= 0 || m < 0)
    throw ArgumentError("edge list: expected header \"N M\" with N > 0, M >= 0");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long k = 0; k < m; ++k) {
    long long a = -1, b = -1;
    if (!(in >> a >> b)) throw ArgumentError("edge list: expected " + std::to_string(m) + " edges, got " + std::to_string(k));
    if (a < 0 || b < 0) throw ArgumentError("edge list: negative node id");
    edges.push_back({static_cast<NodeId>(a), static_cast<NodeId>(b)});
  }
  std::string extra;
  if (in >> extra) throw ArgumentError("edge list: trailing content \"" + extra + "\"");
  return Multigraph(static_cast<std::size_t>(n), std::move(edges));
}

inline Multigraph parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  return parse_edge_list(in);
}

inline std::string render_edge_list(const Multigraph& g) {
  std::ostringstream out;
  out << g.node_count() << ' ' << g.edge_count() << '\n';
  for (const Edge& e : g.edges()) out << e.a << ' ' << e.b << '\n';
  return out.str();
}

}  // namespace loopcorrect
