#pragma once

// JSON forms of the certificates. Vertices are 1-indexed on the wire and
// weights are "p/q" strings.

#include <string>
#include <vector>

#include "chipfire/chip.hpp"
#include "chipfire/combination.hpp"
#include "chipfire/error.hpp"
#include "chipfire/polytope.hpp"
#include "chipfire/rational.hpp"
#include "chipfire/tree.hpp"
#include "json.hpp"

namespace chipfire {

using Json = nlohmann::ordered_json;

namespace detail {

inline const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

inline std::vector<int> int_array(const Json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + " must be an array");
  std::vector<int> out;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw ParseError(std::string(what) + " must hold integers");
    out.push_back(x.get<int>());
  }
  return out;
}

}  // namespace detail

inline Json config_to_json(const ChipConfig& c) { return Json(c.vec()); }

inline ChipConfig config_from_json(const Json& j) {
  auto v = detail::int_array(j, "configuration");
  for (int x : v) {
    if (x < 0) throw ParseError("chip counts must be nonnegative");
  }
  return ChipConfig(std::move(v));
}

inline Json tree_to_json(const Tree& t) {
  Json edges = Json::array();
  for (auto [u, v] : t.edges()) edges.push_back(Json::array({u + 1, v + 1}));
  return Json{{"n", t.size()}, {"edges", edges}};
}

inline Json mask_to_json(SubtreeMask mask) {
  Json out = Json::array();
  for (Vertex v : mask.members()) out.push_back(v + 1);
  return out;
}

inline Json combination_to_json(const ConvexCombination& combo) {
  Json terms = Json::array();
  for (const auto& term : combo.terms) {
    terms.push_back({{"weight", to_fraction_string(term.weight)},
                     {"config", config_to_json(term.config)}});
  }
  return Json{{"point", config_to_json(combo.point)}, {"terms", terms}};
}

inline ConvexCombination combination_from_json(const Json& j) {
  ConvexCombination combo;
  combo.point = config_from_json(detail::require(j, "point"));
  const Json& terms = detail::require(j, "terms");
  if (!terms.is_array()) throw ParseError("terms must be an array");
  for (const auto& term : terms) {
    const Json& w = detail::require(term, "weight");
    if (!w.is_string()) throw ParseError("weight must be a \"p/q\" string");
    combo.terms.push_back({parse_rational(w.get<std::string>()),
                           config_from_json(detail::require(term, "config"))});
  }
  return combo;
}

inline Json idp_to_json(const IdpDecomposition& d) {
  Json parts = Json::array();
  for (const auto& p : d.parts) parts.push_back(config_to_json(p));
  return Json{{"point", config_to_json(d.point)}, {"t", d.t}, {"parts", parts}};
}

inline IdpDecomposition idp_from_json(const Json& j) {
  IdpDecomposition d;
  d.point = config_from_json(detail::require(j, "point"));
  const Json& t = detail::require(j, "t");
  if (!t.is_number_integer()) throw ParseError("t must be an integer");
  d.t = t.get<int>();
  const Json& parts = detail::require(j, "parts");
  if (!parts.is_array()) throw ParseError("parts must be an array");
  for (const auto& p : parts) d.parts.push_back(config_from_json(p));
  return d;
}

inline Json cube_map_to_json(const AffineUnimodularMap& m) {
  return Json{{"U", m.U}, {"b", m.b}};
}

inline AffineUnimodularMap cube_map_from_json(const Json& j) {
  AffineUnimodularMap m;
  const Json& u = detail::require(j, "U");
  const Json& b = detail::require(j, "b");
  if (!u.is_array() || !b.is_array()) throw ParseError("U and b must be arrays");
  for (const auto& row : u) {
    if (!row.is_array()) throw ParseError("U must be a matrix");
    std::vector<long long> r;
    for (const auto& x : row) {
      if (!x.is_number_integer()) throw ParseError("U must hold integers");
      r.push_back(x.get<long long>());
    }
    m.U.push_back(std::move(r));
  }
  for (const auto& x : b) {
    if (!x.is_number_integer()) throw ParseError("b must hold integers");
    m.b.push_back(x.get<long long>());
  }
  if (m.b.size() != m.U.size()) throw ParseError("U and b disagree in size");
  for (const auto& row : m.U) {
    if (row.size() != m.U.size()) throw ParseError("U must be square");
  }
  return m;
}

}  // namespace chipfire
