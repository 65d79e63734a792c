#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "linesum/consistency.hpp"

namespace linesum {

using Json = nlohmann::json;

// ---- scalar encoding ----------------------------------------------------
//
// Integers that fit in 64 bits travel as JSON numbers, anything else as
// decimal strings; rationals with denominator 1 follow the integer rule and
// proper fractions are always "p/q" strings.

inline bool fits_int64(const Int& v) {
  return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
}

inline Json int_to_json(const Int& v) {
  if (fits_int64(v)) return v.convert_to<std::int64_t>();
  return v.str();
}

inline Int int_from_json(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Int(j.get<std::int64_t>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    auto r = rat_from_string(s);
    if (r && is_integral(*r)) return numerator(*r);
    throw ValidationError(where + ": '" + s + "' is not an integer");
  }
  throw ValidationError(where + ": expected an integer or a decimal string");
}

inline Json rat_to_json(const Rat& v) {
  if (is_integral(v)) {
    Rat c = v;
    return int_to_json(numerator(c));
  }
  return rat_to_string(v);
}

inline Rat rat_from_json(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Rat(j.get<std::int64_t>());
  if (j.is_number_float())
    throw ValidationError(where + ": floating point values are not accepted; use \"p/q\" strings");
  if (j.is_string()) {
    auto r = rat_from_string(j.get<std::string>());
    if (r) return *r;
    throw ValidationError(where + ": '" + j.get<std::string>() + "' is not a rational");
  }
  throw ValidationError(where + ": expected a number or a \"p/q\" string");
}

// ---- geometry -----------------------------------------------------------

inline Json point_to_json(const Point& p) { return Json::array({int_to_json(p.x), int_to_json(p.y)}); }

inline Point point_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw ValidationError(where + ": expected [x, y]");
  return Point{int_from_json(j[0], where + "[0]"), int_from_json(j[1], where + "[1]")};
}

inline Json rpoint_to_json(const RPoint& p) { return Json::array({rat_to_json(p.x), rat_to_json(p.y)}); }

inline Json direction_to_json(const Direction& d) {
  return Json::array({int_to_json(d.a()), int_to_json(d.b())});
}

inline Json region_spec_to_json(const RegionSpec& r) {
  Json out = Json::object();
  switch (r.kind) {
    case RegionSpec::Kind::Rect:
      out["rect"] = Json::array({int_to_json(r.width), int_to_json(r.height)});
      break;
    case RegionSpec::Kind::HullOf: {
      Json pts = Json::array();
      for (const Point& p : r.pts) pts.push_back(point_to_json(p));
      out["hull"] = std::move(pts);
      break;
    }
    case RegionSpec::Kind::Explicit: {
      Json pts = Json::array();
      for (const Point& p : r.pts) pts.push_back(point_to_json(p));
      out["points"] = std::move(pts);
      break;
    }
  }
  return out;
}

inline RegionSpec region_spec_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("region: expected an object with rect, hull or points");
  RegionSpec r;
  int found = 0;
  if (j.contains("rect")) ++found;
  if (j.contains("hull")) ++found;
  if (j.contains("points")) ++found;
  if (found != 1) throw ValidationError("region: exactly one of rect, hull, points is required");
  if (j.contains("rect")) {
    const Json& a = j.at("rect");
    if (!a.is_array() || a.size() != 2) throw ValidationError("region.rect: expected [width, height]");
    r.kind = RegionSpec::Kind::Rect;
    r.width = int_from_json(a[0], "region.rect[0]");
    r.height = int_from_json(a[1], "region.rect[1]");
    return r;
  }
  const bool hull = j.contains("hull");
  const Json& a = j.at(hull ? "hull" : "points");
  if (!a.is_array() || a.empty())
    throw ValidationError(std::string("region.") + (hull ? "hull" : "points") +
                          ": expected a non-empty array of points");
  r.kind = hull ? RegionSpec::Kind::HullOf : RegionSpec::Kind::Explicit;
  for (std::size_t i = 0; i < a.size(); ++i)
    r.pts.push_back(point_from_json(a[i], std::string("region.") + (hull ? "hull" : "points") + "[" +
                                              std::to_string(i) + "]"));
  return r;
}

// ---- instance files -----------------------------------------------------

struct Instance {
  std::vector<Direction> directions;
  RegionSpec region;
  RingSpec ring = RingSpec::rationals();
  std::optional<Table> table;
  std::optional<LineSumVector> line_sums;
};

inline Instance parse_instance(const Json& j) {
  if (!j.is_object()) throw ValidationError("instance: expected a JSON object");
  for (const auto& [key, val] : j.items())
    if (key != "directions" && key != "region" && key != "ring" && key != "table" && key != "line_sums")
      throw ValidationError("instance: unknown key '" + key + "'");
  if (!j.contains("directions") || !j.contains("region") || !j.contains("ring"))
    throw ValidationError("instance: directions, region and ring are required");

  Instance inst;
  const Json& ds = j.at("directions");
  if (!ds.is_array() || ds.empty())
    throw ValidationError("directions: expected a non-empty array of [a, b] pairs");
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const std::string where = "directions[" + std::to_string(i) + "]";
    if (!ds[i].is_array() || ds[i].size() != 2) throw ValidationError(where + ": expected [a, b]");
    Int a = int_from_json(ds[i][0], where + "[0]");
    Int b = int_from_json(ds[i][1], where + "[1]");
    if (a == 0 && b == 0) throw ValidationError(where + ": (0,0) is not a direction");
    Direction d(a, b);
    if (!d.is_primitive()) throw ValidationError(where + ": direction must be primitive");
    inst.directions.push_back(d);
  }
  require_pairwise_independent(inst.directions);

  inst.region = region_spec_from_json(j.at("region"));

  const Json& rj = j.at("ring");
  if (!rj.is_string()) throw ValidationError("ring: expected \"Z\", \"Q\" or \"F<p>\"");
  inst.ring = RingSpec::from_token(rj.get<std::string>());

  if (j.contains("table")) {
    const Json& tj = j.at("table");
    if (!tj.is_array()) throw ValidationError("table: expected an array of [x, y, value] triples");
    Table t(inst.ring);
    for (std::size_t i = 0; i < tj.size(); ++i) {
      const std::string where = "table[" + std::to_string(i) + "]";
      if (!tj[i].is_array() || tj[i].size() != 3)
        throw ValidationError(where + ": expected [x, y, value]");
      Point p{int_from_json(tj[i][0], where + "[0]"), int_from_json(tj[i][1], where + "[1]")};
      Rat v = rat_from_json(tj[i][2], where + "[2]");
      if (!inst.ring.contains(v))
        throw ValidationError(where + ": value " + rat_to_string(v) + " is not in " + inst.ring.name());
      t.add(p, v);
    }
    inst.table = std::move(t);
  }

  if (j.contains("line_sums")) {
    const Json& lj = j.at("line_sums");
    if (!lj.is_array())
      throw ValidationError("line_sums: expected an array of {dir, line, value} objects");
    LineSumVector p(inst.ring);
    for (std::size_t i = 0; i < lj.size(); ++i) {
      const std::string where = "line_sums[" + std::to_string(i) + "]";
      const Json& e = lj[i];
      if (!e.is_object() || !e.contains("dir") || !e.contains("line") || !e.contains("value"))
        throw ValidationError(where + ": expected {dir, line, value}");
      Int d = int_from_json(e.at("dir"), where + ".dir");
      if (d < 0 || d >= Int(inst.directions.size()))
        throw ValidationError(where + ".dir: direction index out of range");
      LineId l{d.convert_to<std::size_t>(), int_from_json(e.at("line"), where + ".line")};
      Rat v = rat_from_json(e.at("value"), where + ".value");
      if (!inst.ring.contains(v))
        throw ValidationError(where + ": value " + rat_to_string(v) + " is not in " + inst.ring.name());
      p.add(l, v);
    }
    inst.line_sums = std::move(p);
  }
  return inst;
}

inline Json instance_to_json(const Instance& inst) {
  Json out = Json::object();
  Json ds = Json::array();
  for (const Direction& d : inst.directions) ds.push_back(direction_to_json(d));
  out["directions"] = std::move(ds);
  out["region"] = region_spec_to_json(inst.region);
  out["ring"] = inst.ring.token();
  if (inst.table) {
    Json tj = Json::array();
    for (const auto& [p, v] : inst.table->values())
      tj.push_back(Json::array({int_to_json(p.x), int_to_json(p.y), rat_to_json(v)}));
    out["table"] = std::move(tj);
  }
  if (inst.line_sums) {
    Json lj = Json::array();
    for (const auto& [l, v] : inst.line_sums->entries()) {
      Json e = Json::object();
      e["dir"] = static_cast<std::int64_t>(l.dir);
      e["line"] = int_to_json(l.index);
      e["value"] = rat_to_json(v);
      lj.push_back(std::move(e));
    }
    out["line_sums"] = std::move(lj);
  }
  return out;
}

// ---- report serialization ----------------------------------------------

inline Json table_to_json(const Table& t) {
  Json out = Json::array();
  for (const auto& [p, v] : t.values())
    out.push_back(Json::array({int_to_json(p.x), int_to_json(p.y), rat_to_json(v)}));
  return out;
}

inline Json weights_to_json(const std::map<LineId, Rat>& weights) {
  Json out = Json::array();
  for (const auto& [l, v] : weights) {
    Json e = Json::object();
    e["dir"] = static_cast<std::int64_t>(l.dir);
    e["line"] = int_to_json(l.index);
    e["value"] = rat_to_json(v);
    out.push_back(std::move(e));
  }
  return out;
}

inline Json verdict_to_json(const ConsistencyVerdict& v) {
  Json out = Json::object();
  out["command"] = "check";
  out["status"] = v.status == VerdictStatus::Consistent ? "consistent" : "inconsistent";
  out["mode"] = v.mode == VerdictMode::DependencyBacked ? "dependency" : "solve";
  if (v.warning) out["warning"] = *v.warning;
  if (v.witness) out["witness"] = table_to_json(*v.witness);
  if (v.violated) {
    Json viol = Json::object();
    viol["value"] = rat_to_json(v.violated->value);
    viol["weights"] = weights_to_json(v.violated->dep.weights());
    out["violated"] = std::move(viol);
  }
  return out;
}

inline Json rank_report_to_json(const RankInvarianceReport& r) {
  Json out = Json::object();
  out["command"] = "ranks";
  out["rank_q"] = static_cast<std::int64_t>(r.rank_q);
  out["nullity_q"] = static_cast<std::int64_t>(r.nullity_q);
  out["left_nullity_q"] = static_cast<std::int64_t>(r.left_nullity_q);
  Json primes = Json::array();
  for (const auto& pr : r.primes) {
    Json e = Json::object();
    e["p"] = int_to_json(pr.p);
    e["rank"] = static_cast<std::int64_t>(pr.rank);
    e["nullity"] = static_cast<std::int64_t>(pr.nullity);
    e["left_nullity"] = static_cast<std::int64_t>(pr.left_nullity);
    primes.push_back(std::move(e));
  }
  out["primes"] = std::move(primes);
  Json factors = Json::array();
  for (const Int& d : r.invariant_factors) factors.push_back(int_to_json(d));
  out["invariant_factors"] = std::move(factors);
  out["ranks_agree"] = r.ranks_agree;
  out["torsion_free"] = r.torsion_free;
  return out;
}

inline Json hajdu_report_to_json(const HajduExampleReport& r) {
  Json out = Json::object();
  out["command"] = "verify-example";
  out["m"] = static_cast<std::int64_t>(r.m);
  out["n"] = static_cast<std::int64_t>(r.n);
  out["trials"] = static_cast<std::int64_t>(r.trials);
  out["seed"] = r.seed;
  Json fams = Json::array();
  for (const auto& f : r.families) {
    Json e = Json::object();
    e["name"] = f.name;
    e["relations"] = static_cast<std::int64_t>(f.relation_count);
    e["annihilates_matrix"] = f.annihilates_matrix;
    e["annihilates_samples"] = f.annihilates_samples;
    fams.push_back(std::move(e));
  }
  out["families"] = std::move(fams);
  out["relation_count"] = static_cast<std::int64_t>(r.relation_count);
  out["span_dim"] = static_cast<std::int64_t>(r.span_dim);
  out["dependency_dim"] = static_cast<std::int64_t>(r.dependency_dim);
  out["relations_hold"] = r.relations_hold;
  out["independent"] = r.independent;
  out["spans_dependency_space"] = r.spans_dependency_space;
  if (r.smallest_independent_grid)
    out["smallest_independent_grid"] =
        Json::array({static_cast<std::int64_t>(r.smallest_independent_grid->first),
                     static_cast<std::int64_t>(r.smallest_independent_grid->second)});
  else
    out["smallest_independent_grid"] = nullptr;
  return out;
}

// ---- schemas ------------------------------------------------------------

// Draft-07 JSON Schemas for the instance file and every command output.
// The copies shipped in schemas/ are kept byte-for-byte in sync by tests.
inline const std::map<std::string, std::string>& output_schemas() {
  static const std::map<std::string, std::string> schemas = {
      {"instance", R"({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "linesum instance",
  "type": "object",
  "required": ["directions", "region", "ring"],
  "additionalProperties": false,
  "properties": {
    "directions": {
      "type": "array", "minItems": 1,
      "items": {"$ref": "#/definitions/intpair"},
      "description": "primitive, pairwise independent lattice directions"
    },
    "region": {
      "type": "object",
      "minProperties": 1, "maxProperties": 1,
      "properties": {
        "rect": {"$ref": "#/definitions/intpair"},
        "hull": {"type": "array", "minItems": 1, "items": {"$ref": "#/definitions/intpair"}},
        "points": {"type": "array", "minItems": 1, "items": {"$ref": "#/definitions/intpair"}}
      },
      "additionalProperties": false
    },
    "ring": {"type": "string", "pattern": "^(Z|Q|F[0-9]+)$"},
    "table": {"type": "array", "items": {"$ref": "#/definitions/cell"}},
    "line_sums": {"type": "array", "items": {"$ref": "#/definitions/linesum"}}
  },
  "definitions": {
    "int": {"type": ["integer", "string"]},
    "value": {"type": ["integer", "string"]},
    "intpair": {"type": "array", "minItems": 2, "maxItems": 2, "items": {"$ref": "#/definitions/int"}},
    "cell": {"type": "array", "minItems": 3, "maxItems": 3},
    "linesum": {
      "type": "object",
      "required": ["dir", "line", "value"],
      "additionalProperties": false,
      "properties": {
        "dir": {"type": "integer", "minimum": 0},
        "line": {"$ref": "#/definitions/int"},
        "value": {"$ref": "#/definitions/value"}
      }
    }
  }
})"},
      {"deps", R"({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "linesum deps output",
  "type": "object",
  "required": ["command", "ring", "basis_ring", "convex", "dependency_count", "decomposition", "dependencies"],
  "additionalProperties": false,
  "properties": {
    "command": {"const": "deps"},
    "ring": {"type": "string"},
    "basis_ring": {"type": "string"},
    "convex": {"type": "boolean"},
    "region_size": {"type": "integer"},
    "directions": {"type": "array"},
    "dependency_count": {"type": "integer", "minimum": 0},
    "decomposition": {
      "type": "object",
      "required": ["available"],
      "properties": {
        "available": {"type": "boolean"},
        "global": {"type": "integer"},
        "local": {"type": "integer"},
        "rounded_size": {"type": "integer"}
      },
      "additionalProperties": false
    },
    "dependencies": {
      "type": "array",
      "items": {
        "type": "object",
        "required": ["weights"],
        "additionalProperties": false,
        "properties": {"weights": {"type": "array", "items": {"$ref": "#/definitions/weight"}}}
      }
    }
  },
  "definitions": {
    "weight": {
      "type": "object",
      "required": ["dir", "line", "value"],
      "additionalProperties": false,
      "properties": {
        "dir": {"type": "integer", "minimum": 0},
        "line": {"type": ["integer", "string"]},
        "value": {"type": ["integer", "string"]}
      }
    }
  }
})"},
      {"check", R"({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "linesum check output",
  "type": "object",
  "required": ["command", "status", "mode"],
  "additionalProperties": false,
  "properties": {
    "command": {"const": "check"},
    "status": {"enum": ["consistent", "inconsistent"]},
    "mode": {"enum": ["dependency", "solve"]},
    "warning": {"type": "string"},
    "witness": {"type": "array", "items": {"type": "array", "minItems": 3, "maxItems": 3}},
    "violated": {
      "type": "object",
      "required": ["value", "weights"],
      "additionalProperties": false,
      "properties": {
        "value": {"type": ["integer", "string"]},
        "weights": {"type": "array"}
      }
    }
  }
})"},
      {"kernel", R"({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "linesum kernel output",
  "type": "object",
  "required": ["command", "count", "basis"],
  "additionalProperties": false,
  "properties": {
    "command": {"const": "kernel"},
    "count": {"type": "integer", "minimum": 0},
    "basis": {
      "type": "array",
      "items": {"type": "array", "items": {"type": "array", "minItems": 3, "maxItems": 3}}
    }
  }
})"},
      {"rounded", R"({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "linesum rounded output",
  "type": "object",
  "required": ["command", "rounded"],
  "additionalProperties": false,
  "properties": {
    "command": {"const": "rounded"},
    "rounded": {
      "type": ["object", "null"],
      "required": ["points", "hull"],
      "additionalProperties": false,
      "properties": {
        "points": {"type": "array"},
        "hull": {"type": "array"}
      }
    }
  }
})"},
      {"ranks", R"({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "linesum ranks output",
  "type": "object",
  "required": ["command", "rank_q", "nullity_q", "left_nullity_q", "primes", "invariant_factors",
               "ranks_agree", "torsion_free"],
  "additionalProperties": false,
  "properties": {
    "command": {"const": "ranks"},
    "rank_q": {"type": "integer"},
    "nullity_q": {"type": "integer"},
    "left_nullity_q": {"type": "integer"},
    "primes": {
      "type": "array",
      "items": {
        "type": "object",
        "required": ["p", "rank", "nullity", "left_nullity"],
        "additionalProperties": false,
        "properties": {
          "p": {"type": ["integer", "string"]},
          "rank": {"type": "integer"},
          "nullity": {"type": "integer"},
          "left_nullity": {"type": "integer"}
        }
      }
    },
    "invariant_factors": {"type": "array", "items": {"type": ["integer", "string"]}},
    "ranks_agree": {"type": "boolean"},
    "torsion_free": {"type": "boolean"}
  }
})"},
      {"verify-example", R"({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "linesum verify-example output",
  "type": "object",
  "required": ["command", "m", "n", "trials", "seed", "families", "relation_count", "span_dim",
               "dependency_dim", "relations_hold", "independent", "spans_dependency_space",
               "smallest_independent_grid"],
  "additionalProperties": false,
  "properties": {
    "command": {"const": "verify-example"},
    "m": {"type": "integer"},
    "n": {"type": "integer"},
    "trials": {"type": "integer"},
    "seed": {"type": "integer"},
    "families": {
      "type": "array",
      "items": {
        "type": "object",
        "required": ["name", "relations", "annihilates_matrix", "annihilates_samples"],
        "additionalProperties": false,
        "properties": {
          "name": {"type": "string"},
          "relations": {"type": "integer"},
          "annihilates_matrix": {"type": "boolean"},
          "annihilates_samples": {"type": "boolean"}
        }
      }
    },
    "relation_count": {"type": "integer"},
    "span_dim": {"type": "integer"},
    "dependency_dim": {"type": "integer"},
    "relations_hold": {"type": "boolean"},
    "independent": {"type": "boolean"},
    "spans_dependency_space": {"type": "boolean"},
    "smallest_independent_grid": {
      "type": ["array", "null"],
      "minItems": 2, "maxItems": 2, "items": {"type": "integer"}
    }
  }
})"}};
  return schemas;
}

}  // namespace linesum
