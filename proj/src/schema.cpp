// SPDX-License-Identifier: Apache-2.0
#include "restaurant/schema.hpp"

#include <cmath>

#include "restaurant/error.hpp"

namespace restaurant::schema {

namespace {

constexpr const char* kSchemas = R"json(
{
  "definitions": {
    "prob": {"type": "number", "minimum": 0, "maximum": 1},
    "prob3": {"type": "array", "items": {"$ref": "#/definitions/prob"}, "minItems": 3, "maxItems": 3},
    "real3": {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3},
    "angles": {"type": "array", "items": {"type": "number", "minimum": 0, "maximum": 360},
               "minItems": 3, "maxItems": 3},
    "label": {"type": "integer", "minimum": 1, "maximum": 3},
    "count_row": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 3, "maxItems": 3},
    "counts": {"type": "array", "items": {"$ref": "#/definitions/count_row"}, "minItems": 3, "maxItems": 3},
    "matrix3": {"type": "array", "items": {"$ref": "#/definitions/real3"}, "minItems": 3, "maxItems": 3},
    "sender": {"type": "array", "minItems": 3, "maxItems": 3,
               "items": {"type": "array", "items": {"$ref": "#/definitions/prob"}, "minItems": 2, "maxItems": 2}},
    "receiver": {"type": "array", "minItems": 2, "maxItems": 2, "items": {"$ref": "#/definitions/prob3"}},
    "game": {
      "type": "object",
      "required": ["gamma"],
      "properties": {
        "gamma": {"$ref": "#/definitions/prob3"},
        "k1": {"type": "number", "minimum": 0},
        "k2": {"type": "number", "minimum": 0},
        "prior": {"$ref": "#/definitions/prob3"}
      },
      "additionalProperties": false
    },
    "quantum_strategy": {
      "type": "object",
      "required": ["encodings", "weights"],
      "properties": {
        "encodings": {"type": "array", "items": {"$ref": "#/definitions/real3"}, "minItems": 3, "maxItems": 3},
        "weights": {"type": "array", "items": {"type": "number", "minimum": 0, "maximum": 2},
                    "minItems": 3, "maxItems": 3}
      },
      "additionalProperties": false
    },
    "polarimeter_config": {
      "type": "object",
      "required": ["f", "u2", "u3", "u4", "routing"],
      "properties": {
        "f": {"$ref": "#/definitions/prob"},
        "u2": {"$ref": "#/definitions/angles"},
        "u3": {"$ref": "#/definitions/angles"},
        "u4": {"$ref": "#/definitions/angles"},
        "routing": {
          "type": "object",
          "required": ["transmitted_h", "transmitted_v", "reflected"],
          "properties": {
            "transmitted_h": {"$ref": "#/definitions/label"},
            "transmitted_v": {"$ref": "#/definitions/label"},
            "reflected": {"$ref": "#/definitions/label"}
          },
          "additionalProperties": false
        },
        "dump": {"enum": ["reflected_v", "reflected_h"]}
      },
      "additionalProperties": false
    },
    "noise": {
      "type": "object",
      "required": ["depolarizing", "angle_jitter_deg"],
      "properties": {
        "depolarizing": {"$ref": "#/definitions/prob"},
        "angle_jitter_deg": {"type": "number", "minimum": 0}
      },
      "additionalProperties": false
    }
  },
  "schemas": {
    "game": {"$ref": "#/definitions/game"},
    "quantum_strategy": {"$ref": "#/definitions/quantum_strategy"},
    "verify_report": {
      "type": "object",
      "required": ["completeness_residual", "weight_sum_residual", "min_weight", "coplanarity_residual",
                   "h1_residual", "distribution_residual", "tolerance", "pass"],
      "properties": {
        "completeness_residual": {"type": "number", "minimum": 0},
        "weight_sum_residual": {"type": "number", "minimum": 0},
        "min_weight": {"type": "number"},
        "coplanarity_residual": {"type": "number", "minimum": 0},
        "h1_residual": {"type": "number", "minimum": 0},
        "distribution_residual": {"type": "number", "minimum": 0},
        "tolerance": {"type": "number", "minimum": 0},
        "pass": {"type": "boolean"}
      },
      "additionalProperties": false
    },
    "classical_result": {
      "type": "object",
      "required": ["gamma", "k1", "k2", "eps_c", "sender", "receiver", "grid_step", "refine_rounds"],
      "properties": {
        "gamma": {"$ref": "#/definitions/prob3"},
        "k1": {"type": "number", "minimum": 0},
        "k2": {"type": "number", "minimum": 0},
        "eps_c": {"type": "number", "minimum": 0},
        "sender": {"$ref": "#/definitions/sender"},
        "receiver": {"$ref": "#/definitions/receiver"},
        "grid_step": {"type": "number", "minimum": 0, "maximum": 0.5},
        "refine_rounds": {"type": "integer", "minimum": 0},
        "lp_solves": {"type": "integer", "minimum": 0}
      },
      "additionalProperties": false
    },
    "polarimeter_config": {"$ref": "#/definitions/polarimeter_config"},
    "counts": {
      "type": "object",
      "required": ["counts"],
      "properties": {"counts": {"$ref": "#/definitions/counts"}}
    },
    "experiment_result": {
      "type": "object",
      "required": ["seed", "shots", "noise", "counts", "visit_estimate", "p_hat", "overlap_f", "eps_q",
                   "eps_q_stderr", "bootstrap_resamples"],
      "properties": {
        "seed": {"type": "integer", "minimum": 0},
        "shots": {"type": "integer", "minimum": 1},
        "noise": {"$ref": "#/definitions/noise"},
        "counts": {"$ref": "#/definitions/counts"},
        "visit_estimate": {"$ref": "#/definitions/matrix3"},
        "p_hat": {"$ref": "#/definitions/prob3"},
        "overlap_f": {"$ref": "#/definitions/prob"},
        "eps_q": {"type": "number", "minimum": 0},
        "eps_q_stderr": {"type": "number", "minimum": 0},
        "bootstrap_resamples": {"type": "integer", "minimum": 0},
        "dump_fraction": {"$ref": "#/definitions/prob3"}
      },
      "additionalProperties": false
    },
    "certificate": {
      "type": "object",
      "required": ["game", "counts", "z", "bootstrap_resamples", "bootstrap_seed", "eps_v", "eps_v_stderr",
                   "eps_c", "classical_grid", "margin", "verdict", "sigmas", "confidence_note"],
      "properties": {
        "game": {"$ref": "#/definitions/game"},
        "counts": {"$ref": "#/definitions/counts"},
        "z": {"type": "number", "minimum": 0},
        "bootstrap_resamples": {"type": "integer", "minimum": 0},
        "bootstrap_seed": {"type": "integer", "minimum": 0},
        "eps_v": {"type": "number", "minimum": 0},
        "eps_v_stderr": {"type": "number", "minimum": 0},
        "eps_c": {"type": "number", "minimum": 0},
        "classical_grid": {
          "type": "object",
          "required": ["grid_step", "refine_rounds"],
          "properties": {
            "grid_step": {"type": "number", "minimum": 0},
            "refine_rounds": {"type": "integer", "minimum": 0}
          },
          "additionalProperties": false
        },
        "margin": {"type": "number"},
        "verdict": {"enum": ["pass", "fail"]},
        "sigmas": {"type": ["number", "null"]},
        "confidence_note": {"type": "string"}
      },
      "additionalProperties": false
    },
    "repro_report": {
      "type": "object",
      "required": ["settings", "games", "summary", "verdicts", "convention_search"],
      "properties": {
        "settings": {"type": "object"},
        "games": {
          "type": "array", "minItems": 10, "maxItems": 10,
          "items": {
            "type": "object",
            "required": ["index", "gamma", "a_param", "eps_c_computed", "eps_c_reference", "quantum_ideal_eps",
                         "simulated_eps_q", "overlap_f", "polarimeter_config"],
            "properties": {
              "index": {"type": "integer", "minimum": 1, "maximum": 10},
              "gamma": {"$ref": "#/definitions/prob3"},
              "a_param": {"type": "number", "minimum": -1, "maximum": 1},
              "eps_c_computed": {"type": "number", "minimum": 0},
              "eps_c_reference": {"type": "number", "minimum": 0},
              "quantum_ideal_eps": {"type": "number", "minimum": 0},
              "simulated_eps_q": {"type": "number", "minimum": 0},
              "overlap_f": {"$ref": "#/definitions/prob"},
              "polarimeter_config": {"$ref": "#/definitions/polarimeter_config"},
              "quantum_strategy": {"$ref": "#/definitions/quantum_strategy"}
            }
          }
        },
        "summary": {"type": "object"},
        "verdicts": {"type": "object"},
        "convention_search": {"type": "array"}
      }
    }
  }
}
)json";

const Json& root() {
  static const Json doc = Json::parse(kSchemas);
  return doc;
}

const Json& resolve(const Json& node) {
  const auto it = node.find("$ref");
  if (it == node.end()) return node;
  const std::string ref = it->get<std::string>();
  const std::string prefix = "#/definitions/";
  if (ref.rfind(prefix, 0) != 0) throw Error(ErrorKind::InvalidInput, "unsupported schema reference " + ref);
  return resolve(root()["definitions"].at(ref.substr(prefix.size())));
}

// Copy of a schema with every $ref replaced by its target.
Json inline_refs(const Json& node) {
  if (node.is_object()) {
    if (node.contains("$ref")) return inline_refs(resolve(node));
    Json out = Json::object();
    for (auto it = node.begin(); it != node.end(); ++it) out[it.key()] = inline_refs(it.value());
    return out;
  }
  if (node.is_array()) {
    Json out = Json::array();
    for (const auto& v : node) out.push_back(inline_refs(v));
    return out;
  }
  return node;
}

bool has_type(const Json& doc, const std::string& t) {
  if (t == "object") return doc.is_object();
  if (t == "array") return doc.is_array();
  if (t == "string") return doc.is_string();
  if (t == "boolean") return doc.is_boolean();
  if (t == "null") return doc.is_null();
  if (t == "integer") return doc.is_number_integer() || (doc.is_number_float() && std::floor(doc.get<double>()) == doc.get<double>());
  if (t == "number") return doc.is_number();
  return false;
}

void check(const Json& doc, const Json& raw, const std::string& path, std::vector<std::string>& out) {
  const Json& s = resolve(raw);
  if (const auto t = s.find("type"); t != s.end()) {
    bool ok = false;
    if (t->is_array()) {
      for (const auto& alt : *t) ok = ok || has_type(doc, alt.get<std::string>());
    } else {
      ok = has_type(doc, t->get<std::string>());
    }
    if (!ok) {
      out.push_back(path + ": expected type " + t->dump());
      return;
    }
  }
  if (const auto e = s.find("enum"); e != s.end()) {
    bool ok = false;
    for (const auto& v : *e) ok = ok || v == doc;
    if (!ok) out.push_back(path + ": value not in " + e->dump());
  }
  if (doc.is_number()) {
    const double v = doc.get<double>();
    if (const auto m = s.find("minimum"); m != s.end() && v < m->get<double>()) {
      out.push_back(path + ": " + doc.dump() + " below minimum " + m->dump());
    }
    if (const auto m = s.find("maximum"); m != s.end() && v > m->get<double>()) {
      out.push_back(path + ": " + doc.dump() + " above maximum " + m->dump());
    }
  }
  if (doc.is_array()) {
    if (const auto m = s.find("minItems"); m != s.end() && doc.size() < m->get<std::size_t>()) {
      out.push_back(path + ": fewer than " + m->dump() + " items");
    }
    if (const auto m = s.find("maxItems"); m != s.end() && doc.size() > m->get<std::size_t>()) {
      out.push_back(path + ": more than " + m->dump() + " items");
    }
    if (const auto items = s.find("items"); items != s.end()) {
      for (std::size_t i = 0; i < doc.size(); ++i) check(doc[i], *items, path + "/" + std::to_string(i), out);
    }
  }
  if (doc.is_object()) {
    if (const auto req = s.find("required"); req != s.end()) {
      for (const auto& k : *req)
        if (!doc.contains(k.get<std::string>())) out.push_back(path + ": missing required field '" + k.get<std::string>() + "'");
    }
    const auto props = s.find("properties");
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      if (props != s.end() && props->contains(it.key())) {
        check(it.value(), (*props)[it.key()], path + "/" + it.key(), out);
      } else if (const auto ap = s.find("additionalProperties"); ap != s.end() && ap->is_boolean() && !ap->get<bool>()) {
        out.push_back(path + ": unexpected field '" + it.key() + "'");
      }
    }
  }
}

const Json& named(std::string_view name) {
  const Json& all = root()["schemas"];
  const auto it = all.find(std::string(name));
  if (it == all.end()) throw Error(ErrorKind::InvalidInput, "unknown schema '" + std::string(name) + "'");
  return *it;
}

}  // namespace

std::vector<std::string> names() {
  std::vector<std::string> out;
  for (auto it = root()["schemas"].begin(); it != root()["schemas"].end(); ++it) out.push_back(it.key());
  return out;
}

Json get(std::string_view name) {
  Json s = inline_refs(named(name));
  Json out;
  out["$schema"] = "http://json-schema.org/draft-07/schema#";
  out["title"] = std::string(name);
  for (auto it = s.begin(); it != s.end(); ++it) out[it.key()] = it.value();
  return out;
}

std::vector<std::string> violations(const Json& doc, std::string_view name) {
  std::vector<std::string> out;
  check(doc, named(name), "", out);
  for (auto& v : out)
    if (v.rfind(":", 0) == 0) v = "/" + v;  // root pointer
  return out;
}

void validate(const Json& doc, std::string_view name) {
  const auto v = violations(doc, name);
  if (v.empty()) return;
  std::string msg = "document does not match schema '" + std::string(name) + "':";
  for (std::size_t i = 0; i < v.size() && i < 5; ++i) msg += "\n  " + v[i];
  if (v.size() > 5) msg += "\n  ... (" + std::to_string(v.size() - 5) + " more)";
  throw Error(ErrorKind::InvalidInput, msg);
}

}  // namespace restaurant::schema
