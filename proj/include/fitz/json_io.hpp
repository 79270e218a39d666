#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "fitz/fitzpatrick.hpp"
#include "fitz/hilbert.hpp"
#include "fitz/operators.hpp"
#include "fitz/report.hpp"
#include "fitz/sigma.hpp"

namespace fitz {

using json = nlohmann::json;

// Extended reals: JSON numbers cannot hold infinities, so they are encoded
// as the strings "inf" / "-inf".
inline json extended_to_json(double v) {
  if (v == kInfinity) return "inf";
  if (v == -kInfinity) return "-inf";
  return v;
}

inline double extended_from_json(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return kInfinity;
    if (s == "-inf") return -kInfinity;
    throw Error(ErrorCode::io_error, "expected a number or 'inf', got '" + s + "'");
  }
  return j.get<double>();
}

inline json to_json(const PrimalDualPair& p) {
  return json{{"x", p.x}, {"xstar", p.x_star}};
}

inline PrimalDualPair pair_from_json(const json& j) {
  PrimalDualPair p;
  p.x = j.at("x").get<Vec>();
  p.x_star = j.at("xstar").get<Vec>();
  validate_pair(p, "pair document");
  return p;
}

inline json to_json(const CheckReport& r) {
  json j{{"passed", r.passed}, {"margin", extended_to_json(r.margin)}};
  if (r.witness) {
    j["witness"] = json{{"first", to_json(r.witness->first)},
                        {"second", to_json(r.witness->second)}};
  }
  return j;
}

inline CheckReport check_report_from_json(const json& j) {
  CheckReport r;
  r.passed = j.at("passed").get<bool>();
  r.margin = extended_from_json(j.at("margin"));
  if (j.contains("witness")) {
    r.witness = PairWitness{pair_from_json(j.at("witness").at("first")),
                            pair_from_json(j.at("witness").at("second"))};
  }
  return r;
}

inline json to_json(const FitzValue& v) {
  json j{{"status", v.finite() ? "finite" : "divergent"},
         {"stabilized", v.stabilized}};
  if (v.finite()) {
    j["value"] = extended_to_json(v.value);
    j["witness"] = json{{"y", v.witness.x}, {"ystar", v.witness.x_star}};
  } else {
    json trace = json::array();
    for (const auto& [radius, sup] : v.growth_trace) {
      trace.push_back(json::array({radius, extended_to_json(sup)}));
    }
    j["growth_trace"] = std::move(trace);
  }
  return j;
}

inline json to_json(const ResolventSolution& s) {
  return json{{"x", s.x}, {"xstar", s.x_star}, {"residual", s.residual}};
}

// ---------------------------------------------------------------------------
// Operator and sigma documents. Field names are pinned by the format
// reference (docs/formats.md).
// ---------------------------------------------------------------------------

inline json operator_to_json(const OperatorSpec& op) {
  if (const auto* g = std::get_if<FiniteGraph>(&op.rep)) {
    json points = json::array();
    for (const auto& p : g->points) points.push_back(to_json(p));
    return json{{"kind", "finite_graph"}, {"points", std::move(points)}};
  }
  if (const auto* t = std::get_if<Tabulated1D>(&op.rep)) {
    return json{{"kind", "tabulated"},
                {"xs", t->xs},
                {"value_sets", t->value_sets}};
  }
  if (const auto* e = std::get_if<Expression1D>(&op.rep)) {
    return json{{"kind", "expression"}, {"source", e->expr.source()}};
  }
  const auto& b = std::get<Builtin>(op.rep);
  json j{{"kind", "builtin"}, {"name", to_string(b.kind)}};
  if (b.kind == BuiltinKind::affine) {
    j["a"] = b.a;
    j["b"] = b.b;
  }
  if (b.kind == BuiltinKind::unit_interval) j["m"] = b.resolution;
  return j;
}

inline BuiltinKind builtin_kind_from_name(const std::string& name) {
  if (name == "triangular") return BuiltinKind::triangular;
  if (name == "normal") return BuiltinKind::normal;
  if (name == "unit_interval") return BuiltinKind::unit_interval;
  if (name == "identity") return BuiltinKind::identity;
  if (name == "affine") return BuiltinKind::affine;
  throw Error(ErrorCode::invalid_argument,
              "unknown builtin '" + name +
                  "'; expected triangular, normal, unit_interval, identity or affine");
}

inline OperatorSpec operator_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "finite_graph") {
    std::vector<PrimalDualPair> points;
    for (const auto& p : j.at("points")) points.push_back(pair_from_json(p));
    return make_graph_operator(std::move(points));
  }
  if (kind == "tabulated") {
    return make_tabulated_operator(
        j.at("xs").get<std::vector<double>>(),
        j.at("value_sets").get<std::vector<std::vector<double>>>());
  }
  if (kind == "expression") {
    return make_expression_operator(j.at("source").get<std::string>());
  }
  if (kind == "builtin") {
    const BuiltinKind bk = builtin_kind_from_name(j.at("name").get<std::string>());
    return make_builtin_operator(bk, j.value("a", 1.0), j.value("b", 0.0),
                                 j.value("m", 16));
  }
  throw Error(ErrorCode::io_error, "unknown operator kind '" + kind + "'");
}

inline json sigma_to_json(const SigmaSpec& s) {
  if (const auto* c = std::get_if<SigmaSpec::Constant>(&s.rep)) {
    return json{{"kind", "constant"}, {"c", c->c}};
  }
  if (const auto* t = std::get_if<SigmaSpec::Table>(&s.rep)) {
    json entries = json::array();
    for (const auto& [key, value] : t->entries) {
      entries.push_back(json{{"x", key}, {"value", value}});
    }
    return json{{"kind", "table"}, {"entries", std::move(entries)}};
  }
  const auto& e = std::get<SigmaSpec::Expr>(s.rep);
  return json{{"kind", "expression"}, {"source", e.expr.source()}};
}

inline SigmaSpec sigma_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") return sigma_constant(j.at("c").get<double>());
  if (kind == "table") {
    std::vector<std::pair<Vec, double>> entries;
    for (const auto& e : j.at("entries")) {
      entries.emplace_back(e.at("x").get<Vec>(), e.at("value").get<double>());
    }
    return sigma_table(std::move(entries));
  }
  if (kind == "expression") {
    return sigma_expression(j.at("source").get<std::string>());
  }
  throw Error(ErrorCode::io_error, "unknown sigma kind '" + kind + "'");
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::io_error, "cannot open '" + path + "'");
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::io_error,
                "cannot parse '" + path + "': " + e.what());
  }
  return j;
}

inline OperatorSpec load_operator(const std::string& path) {
  return operator_from_json(load_json_file(path));
}

inline SigmaSpec load_sigma(const std::string& path) {
  return sigma_from_json(load_json_file(path));
}

// ---------------------------------------------------------------------------
// Run reports.
// ---------------------------------------------------------------------------

/// One CLI invocation's output document. Serializes to a single JSON object
/// and round-trips losslessly.
struct RunReport {
  std::string command;
  json inputs = json::object();
  json results = json::array();
  double timing_ms = 0.0;
  std::string version;
};

inline json to_json(const RunReport& r) {
  return json{{"command", r.command},
              {"inputs", r.inputs},
              {"results", r.results},
              {"timing_ms", r.timing_ms},
              {"version", r.version}};
}

inline RunReport run_report_from_json(const json& j) {
  RunReport r;
  r.command = j.at("command").get<std::string>();
  r.inputs = j.at("inputs");
  r.results = j.at("results");
  r.timing_ms = j.at("timing_ms").get<double>();
  r.version = j.at("version").get<std::string>();
  return r;
}

}  // namespace fitz
