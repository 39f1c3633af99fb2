// JSON form of VariantSpec and its stable fingerprint.
//
// {
//   "geometry": "linear" | "circular" | "grid" | "expandable" | "restricted3x3",
//   "n": 7, "rows": 2, "cols": 5,
//   "patterns": ["SOS"],
//   "goal": "normal" | "misere",
//   "directions": ["row", "column", "diagonal", "anti-diagonal"],
//   "orientation": "forward" | "bidirectional",
//   "stuck_rule": "draw" | "pass"
// }
//
// Only geometry and patterns are required; other fields default per geometry.
// Unknown fields are rejected.

#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "sos/types.hpp"

namespace sos {

using json = nlohmann::json;

namespace detail {

inline const char* geometry_name(GeometryKind g) {
  switch (g) {
    case GeometryKind::Linear: return "linear";
    case GeometryKind::Circular: return "circular";
    case GeometryKind::Grid: return "grid";
    case GeometryKind::Expandable: return "expandable";
    case GeometryKind::Restricted3x3: return "restricted3x3";
  }
  return "?";
}

inline GeometryKind geometry_from(const std::string& s) {
  if (s == "linear") return GeometryKind::Linear;
  if (s == "circular") return GeometryKind::Circular;
  if (s == "grid") return GeometryKind::Grid;
  if (s == "expandable") return GeometryKind::Expandable;
  if (s == "restricted3x3" || s == "restricted") return GeometryKind::Restricted3x3;
  throw Error(Error::Kind::InvalidSpec, "unknown geometry '" + s + "'");
}

inline unsigned direction_from(const std::string& s) {
  if (s == "row") return kRow;
  if (s == "column") return kColumn;
  if (s == "diagonal") return kDiagonal;
  if (s == "anti-diagonal") return kAntiDiagonal;
  throw Error(Error::Kind::InvalidSpec, "unknown direction '" + s + "'");
}

}  // namespace detail

inline json spec_to_json(const VariantSpec& spec) {
  json j;
  j["geometry"] = detail::geometry_name(spec.geometry);
  j["n"] = spec.n;
  j["rows"] = spec.rows;
  j["cols"] = spec.cols;
  j["patterns"] = spec.patterns.patterns();
  j["goal"] = spec.goal == Goal::Normal ? "normal" : "misere";
  json dirs = json::array();
  if (spec.directions & kRow) dirs.push_back("row");
  if (spec.directions & kColumn) dirs.push_back("column");
  if (spec.directions & kDiagonal) dirs.push_back("diagonal");
  if (spec.directions & kAntiDiagonal) dirs.push_back("anti-diagonal");
  j["directions"] = dirs;
  j["orientation"] = spec.orientation == Orientation::Forward ? "forward" : "bidirectional";
  j["stuck_rule"] = spec.stuck_rule == StuckRule::Draw ? "draw" : "pass";
  return j;
}

inline VariantSpec spec_from_json(const json& j) {
  auto fail = [](const std::string& why) { return Error(Error::Kind::InvalidSpec, why); };
  if (!j.is_object()) throw fail("spec must be a JSON object");
  static const char* known[] = {"geometry", "n", "rows", "cols", "patterns", "goal", "directions", "orientation", "stuck_rule"};
  for (const auto& [key, _] : j.items()) {
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) == std::end(known))
      throw fail("unknown field '" + key + "'");
  }
  if (!j.contains("geometry")) throw fail("missing field 'geometry'");
  if (!j.contains("patterns")) throw fail("missing field 'patterns'");

  try {
    std::vector<std::string> pats = j.at("patterns").get<std::vector<std::string>>();
    PatternSet patterns(pats);
    const GeometryKind g = detail::geometry_from(j.at("geometry").get<std::string>());
    VariantSpec spec;
    spec.geometry = g;
    spec.patterns = patterns;
    if (g != GeometryKind::Linear && g != GeometryKind::Circular) {
      spec.directions = kAllDirections;
      spec.orientation = Orientation::Bidirectional;
    }
    if (g == GeometryKind::Restricted3x3) spec.rows = spec.cols = 3;
    if (j.contains("n")) spec.n = j.at("n").get<int>();
    if (j.contains("rows")) spec.rows = j.at("rows").get<int>();
    if (j.contains("cols")) spec.cols = j.at("cols").get<int>();
    if (j.contains("goal")) {
      auto goal = j.at("goal").get<std::string>();
      if (goal != "normal" && goal != "misere") throw fail("unknown goal '" + goal + "'");
      spec.goal = goal == "normal" ? Goal::Normal : Goal::Misere;
    }
    if (j.contains("directions")) {
      spec.directions = 0;
      for (const auto& d : j.at("directions")) spec.directions |= detail::direction_from(d.get<std::string>());
    }
    if (j.contains("orientation")) {
      auto o = j.at("orientation").get<std::string>();
      if (o != "forward" && o != "bidirectional") throw fail("unknown orientation '" + o + "'");
      spec.orientation = o == "forward" ? Orientation::Forward : Orientation::Bidirectional;
    }
    if (j.contains("stuck_rule")) {
      auto r = j.at("stuck_rule").get<std::string>();
      if (r != "draw" && r != "pass") throw fail("unknown stuck_rule '" + r + "'");
      spec.stuck_rule = r == "draw" ? StuckRule::Draw : StuckRule::Pass;
    }
    spec.validate();
    return spec;
  } catch (const json::exception& e) {
    throw fail(std::string("malformed spec: ") + e.what());
  }
}

inline VariantSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Error::Kind::InvalidSpec, "cannot open spec file '" + path + "'");
  try {
    return spec_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw Error(Error::Kind::InvalidSpec, "spec file '" + path + "' is not JSON: " + e.what());
  }
}

// FNV-1a over the canonical (sorted-key, compact) JSON text.
inline std::string spec_fingerprint(const VariantSpec& spec) {
  const std::string text = spec_to_json(spec).dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string describe(const VariantSpec& spec) {
  std::ostringstream os;
  os << (spec.goal == Goal::Misere ? "misere " : "") << spec.patterns.joined('-') << " on ";
  switch (spec.geometry) {
    case GeometryKind::Linear: os << "1x" << spec.n; break;
    case GeometryKind::Circular: os << "circular " << spec.n; break;
    case GeometryKind::Grid: os << spec.rows << "x" << spec.cols; break;
    case GeometryKind::Expandable: os << "expandable board"; break;
    case GeometryKind::Restricted3x3: os << "restricted 3x3"; break;
  }
  return os.str();
}

}  // namespace sos
