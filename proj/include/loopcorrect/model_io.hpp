#pragma once

// JSON model files.
//   pairwise: {"nodes": N, "edges": [{"i": a, "j": b, "psi": [[.,.],[.,.]]}, ...],
//              "phi": [[.,.], ...]}                       ("phi" optional)
//   factor:   {"vars": N, "factors": [{"scope": [...], "table": [...]}, ...]}

#include <fstream>
#include <string>
#include <variant>

#include <json.hpp>

#include "loopcorrect/model.hpp"

namespace loopcorrect {

using AnyModel = std::variant<PairwiseModel, FactorModel>;

namespace detail {

template <class T>
T json_get(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw ArgumentError(std::string("model json: missing key \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("model json: bad value for \"") + key + "\": " + e.what());
  }
}

}  // namespace detail

inline PairwiseModel pairwise_from_json(const nlohmann::json& j) {
  const auto n = detail::json_get<std::size_t>(j, "nodes");
  std::vector<Edge> edges;
  std::vector<PairTable> psi;
  for (const auto& e : detail::json_get<nlohmann::json>(j, "edges")) {
    edges.push_back({detail::json_get<std::size_t>(e, "i"), detail::json_get<std::size_t>(e, "j")});
    const auto rows = detail::json_get<std::vector<std::vector<double>>>(e, "psi");
    if (rows.size() != 2 || rows[0].size() != 2 || rows[1].size() != 2)
      throw ArgumentError("model json: psi must be 2x2");
    psi.push_back({{{rows[0][0], rows[0][1]}, {rows[1][0], rows[1][1]}}});
  }
  std::vector<NodeTable> phi;
  if (j.contains("phi")) {
    for (const auto& p : detail::json_get<std::vector<std::vector<double>>>(j, "phi")) {
      if (p.size() != 2) throw ArgumentError("model json: phi entries must have 2 values");
      phi.push_back({p[0], p[1]});
    }
  }
  return PairwiseModel(Multigraph(n, std::move(edges)), std::move(psi), std::move(phi));
}

inline FactorModel factor_from_json(const nlohmann::json& j) {
  const auto n = detail::json_get<std::size_t>(j, "vars");
  std::vector<Factor> factors;
  for (const auto& f : detail::json_get<nlohmann::json>(j, "factors"))
    factors.push_back({detail::json_get<std::vector<NodeId>>(f, "scope"),
                       detail::json_get<std::vector<double>>(f, "table")});
  return FactorModel(n, std::move(factors));
}

inline AnyModel model_from_json(const nlohmann::json& j) {
  if (j.contains("nodes")) return pairwise_from_json(j);
  if (j.contains("vars")) return factor_from_json(j);
  throw ArgumentError("model json: expected a \"nodes\" (pairwise) or \"vars\" (factor) key");
}

inline AnyModel parse_model(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ArgumentError(std::string("model json: ") + e.what());
  }
  return model_from_json(j);
}

inline AnyModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open model file " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_model(text);
}

inline nlohmann::json to_json(const PairwiseModel& m) {
  nlohmann::json edges = nlohmann::json::array();
  for (EdgeId e = 0; e < m.edge_count(); ++e) {
    const Edge& ed = m.graph().edges()[e];
    const PairTable& t = m.edge_potentials()[e];
    edges.push_back({{"i", ed.a}, {"j", ed.b}, {"psi", {{t[0][0], t[0][1]}, {t[1][0], t[1][1]}}}});
  }
  nlohmann::json phi = nlohmann::json::array();
  for (const NodeTable& p : m.node_potentials()) phi.push_back({p[0], p[1]});
  return {{"nodes", m.node_count()}, {"edges", edges}, {"phi", phi}};
}

inline nlohmann::json to_json(const FactorModel& m) {
  nlohmann::json factors = nlohmann::json::array();
  for (const Factor& f : m.factors()) factors.push_back({{"scope", f.scope}, {"table", f.table}});
  return {{"vars", m.variable_count()}, {"factors", factors}};
}

inline std::string render_model(const AnyModel& m) {
  return std::visit([](const auto& x) { return to_json(x).dump(2); }, m) + "\n";
}

}  // namespace loopcorrect
