#pragma once

// JSON files for triangulations, structures and measures, and JSON export of developed balls.
// Serialization is canonical (sorted gluing pairs, sorted object keys, shortest round-trip
// decimals) so that load/save cycles are bit-stable.

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "brokenhyp/complex.hpp"
#include "brokenhyp/develop.hpp"
#include "brokenhyp/error.hpp"
#include "brokenhyp/fstruct.hpp"
#include "brokenhyp/hstruct.hpp"

namespace brokenhyp::io {

using json = nlohmann::json;

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

inline json load_json(const std::filesystem::path& path) { return parse(read_text(path)); }

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + path.string());
  out << text;
}

// "f.slot" keys
inline std::string pair_key(TriangleEdgePair p) { return std::to_string(p.face) + "." + std::to_string(p.slot); }

inline TriangleEdgePair parse_pair_key(const std::string& key) {
  const auto dot = key.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 >= key.size())
    throw Error(ErrorKind::ParseError, "bad triangle-edge key '" + key + "'");
  try {
    std::size_t used_f = 0, used_s = 0;
    const int f = std::stoi(key.substr(0, dot), &used_f);
    const int s = std::stoi(key.substr(dot + 1), &used_s);
    if (used_f != dot || used_s != key.size() - dot - 1) throw std::invalid_argument(key);
    return {f, s};
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::ParseError, "bad triangle-edge key '" + key + "'");
  }
}

// ---------------------------------------------------------------------------
// Triangulations

inline json to_json(const IdealTriangulation& t) {
  json gluing = json::array();
  for (const auto& [a, b] : t.canonical_gluing()) gluing.push_back({{a.face, a.slot}, {b.face, b.slot}});
  return json{{"faces", t.face_count()}, {"gluing", std::move(gluing)}};
}

inline IdealTriangulation triangulation_from_json(const json& j) {
  try {
    const int faces = j.at("faces").get<int>();
    std::vector<Gluing> gluing;
    for (const auto& g : j.at("gluing")) {
      if (g.size() != 2 || g[0].size() != 2 || g[1].size() != 2)
        throw Error(ErrorKind::ParseError, "gluing entries are [[f,slot],[f',slot']]");
      gluing.emplace_back(TriangleEdgePair{g[0][0].get<int>(), g[0][1].get<int>()},
                          TriangleEdgePair{g[1][0].get<int>(), g[1][1].get<int>()});
    }
    return IdealTriangulation::build(faces, gluing);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

// ---------------------------------------------------------------------------
// Structures and measures

namespace detail {

inline std::shared_ptr<const IdealTriangulation> resolve_triangulation(const json& ref,
                                                                       const std::filesystem::path& dir) {
  if (ref.is_string()) {
    const std::filesystem::path p = ref.get<std::string>();
    return std::make_shared<const IdealTriangulation>(
        triangulation_from_json(load_json(p.is_absolute() ? p : dir / p)));
  }
  return std::make_shared<const IdealTriangulation>(triangulation_from_json(ref));
}

inline std::vector<double> per_pair_values(const json& obj, const IdealTriangulation& t, const char* what) {
  if (!obj.is_object()) throw Error(ErrorKind::ParseError, std::string("'") + what + "' must be an object");
  std::vector<double> values(t.pair_count(), 0.0);
  std::vector<char> seen(t.pair_count(), 0);
  for (const auto& [key, value] : obj.items()) {
    const auto p = parse_pair_key(key);
    if (p.face < 0 || p.face >= t.face_count() || p.slot < 0 || p.slot > 2)
      throw Error(ErrorKind::ParseError, "key '" + key + "' names no triangle-edge pair");
    if (!value.is_number()) throw Error(ErrorKind::ParseError, "value for '" + key + "' is not a number");
    values[p.index()] = value.get<double>();
    seen[p.index()] = 1;
  }
  for (int i = 0; i < t.pair_count(); ++i)
    if (!seen[i])
      throw Error(ErrorKind::ParseError, std::string("missing '") + what + "' entry for " +
                                             pair_key(TriangleEdgePair::from_index(i)));
  return values;
}

inline json per_pair_object(std::span<const double> values) {
  json obj = json::object();
  for (int i = 0; i < static_cast<int>(values.size()); ++i) obj[pair_key(TriangleEdgePair::from_index(i))] = values[i];
  return obj;
}

}  // namespace detail

inline json to_json(const DecoratedBrokenHyperbolic& h) {
  return json{{"triangulation", to_json(h.triangulation())}, {"lambda", detail::per_pair_object(h.lambdas())}};
}

inline DecoratedBrokenHyperbolic structure_from_json(const json& j, const std::filesystem::path& dir = {}) {
  try {
    auto base = detail::resolve_triangulation(j.at("triangulation"), dir);
    auto lambda = detail::per_pair_values(j.at("lambda"), *base, "lambda");
    return DecoratedBrokenHyperbolic::from_lambda(std::move(base), lambda);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

inline json to_json(const BrokenMeasure& m) {
  return json{{"triangulation", to_json(m.triangulation())}, {"w", detail::per_pair_object(m.large_weights())}};
}

inline BrokenMeasure measure_from_json(const json& j, const std::filesystem::path& dir = {}) {
  try {
    auto base = detail::resolve_triangulation(j.at("triangulation"), dir);
    auto w = detail::per_pair_values(j.at("w"), *base, "w");
    return BrokenMeasure(std::move(base), std::move(w));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

enum class FileKind { Triangulation, Structure, Measure };

inline FileKind classify(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::ParseError, "top-level JSON value must be an object");
  if (j.contains("lambda")) return FileKind::Structure;
  if (j.contains("w")) return FileKind::Measure;
  if (j.contains("gluing")) return FileKind::Triangulation;
  throw Error(ErrorKind::ParseError, "unrecognized document: expected 'gluing', 'lambda' or 'w'");
}

// ---------------------------------------------------------------------------
// Developed balls

inline json to_json(const MinkVec& v) { return json::array({v.x, v.y, v.z}); }

inline json to_json(const DevelopedBall& ball) {
  json tris = json::array();
  for (const auto& t : ball.triangles) {
    tris.push_back(json{{"face", t.node.face},
                        {"depth", t.node.depth},
                        {"parent", t.node.parent},
                        {"scale", t.scale},
                        {"points", json::array({to_json(t.lift.u[0]), to_json(t.lift.u[1]), to_json(t.lift.u[2])})}});
  }
  return tris;
}

inline json to_json(const PathHolonomy& hol) {
  json m = json::array();
  for (int r = 0; r < 3; ++r) m.push_back(json::array({hol.linear(r, 0), hol.linear(r, 1), hol.linear(r, 2)}));
  return json{{"phi", hol.scale}, {"linear", std::move(m)}, {"lorentz_residual", hol.lorentz_residual()}};
}

}  // namespace brokenhyp::io
