#pragma once

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fitz/grid_export.hpp"
#include "fitz/json_io.hpp"
#include "fitz/version.hpp"

namespace fitz::cli {

/// --sigma accepts a numeric literal, a JSON document path, or an
/// expression in x, in that order of interpretation.
inline SigmaSpec parse_sigma_arg(const std::string& text) {
  double c = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, c);
  if (ec == std::errc{} && ptr == last) return sigma_constant(c);
  if (std::filesystem::exists(text)) return load_sigma(text);
  return sigma_expression(text);
}

namespace detail {

struct OperatorArgs {
  std::string graph_path;
  std::string builtin_name;
  std::string expr_text;
  double affine_a = 1.0;
  double affine_b = 0.0;
  int unit_interval_m = 16;

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--graph", graph_path,
                    "operator JSON document (any representation)");
    cmd->add_option("--builtin", builtin_name,
                    "triangular|normal|unit_interval|identity|affine");
    cmd->add_option("--expr", expr_text, "1-D operator expression in x");
    cmd->add_option("--a", affine_a, "affine slope");
    cmd->add_option("--b", affine_b, "affine offset");
    cmd->add_option("--m", unit_interval_m, "unit_interval resolution");
  }

  OperatorSpec resolve() const {
    const int given = (!graph_path.empty()) + (!builtin_name.empty()) +
                      (!expr_text.empty());
    if (given != 1) {
      throw Error(ErrorCode::invalid_argument,
                  "give exactly one of --graph, --builtin, --expr");
    }
    if (!graph_path.empty()) return load_operator(graph_path);
    if (!builtin_name.empty()) {
      return make_builtin_operator(builtin_kind_from_name(builtin_name),
                                   affine_a, affine_b, unit_interval_m);
    }
    return make_expression_operator(expr_text);
  }

  json echo() const {
    json j = json::object();
    if (!graph_path.empty()) j["graph"] = graph_path;
    if (!builtin_name.empty()) j["builtin"] = builtin_name;
    if (!expr_text.empty()) j["expr"] = expr_text;
    return j;
  }
};

struct WindowArgs {
  std::vector<double> radii;
  int samples = 4097;
  double growth_threshold = 0.1;
  double tol = 1e-9;

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--window-radii", radii, "window radii, comma separated")
        ->delimiter(',');
    cmd->add_option("--samples", samples, "samples per window");
    cmd->add_option("--growth-threshold", growth_threshold,
                    "divergence growth threshold");
    cmd->add_option("--tol", tol, "tolerance");
  }

  WindowConfig resolve() const {
    WindowConfig cfg;
    if (!radii.empty()) cfg.radii = radii;
    cfg.samples_per_window = samples;
    cfg.growth_threshold = growth_threshold;
    cfg.tol = tol;
    return cfg;
  }
};

/// Extracts a finite graph from any operator document that stores one.
inline FiniteGraph require_graph(const OperatorSpec& op) {
  if (op.is_finite_graph()) return op.graph();
  if (op.is_tabulated()) {
    return tabulated_as_graph(std::get<Tabulated1D>(op.rep));
  }
  throw Error(ErrorCode::invalid_argument,
              "this command needs a finite graph (or tabulated) operator");
}

inline std::vector<PrimalDualPair> random_pairs(std::size_t n, std::size_t dim,
                                                double box, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-box, box);
  std::vector<PrimalDualPair> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    PrimalDualPair p;
    p.x.resize(dim);
    p.x_star.resize(dim);
    for (std::size_t c = 0; c < dim; ++c) p.x[c] = coord(rng);
    for (std::size_t c = 0; c < dim; ++c) p.x_star[c] = coord(rng);
    out.push_back(std::move(p));
  }
  return out;
}

inline std::vector<PrimalDualPair> load_pairs(const std::string& path) {
  std::vector<PrimalDualPair> out;
  for (const auto& j : load_json_file(path)) out.push_back(pair_from_json(j));
  return out;
}

}  // namespace detail

/// Built-in reproduction suite: closed form against sampled values for the
/// triangular and normal catalog operators at x* = 0, divergence evidence at
/// x* != 0, and divergence of the unit-interval operator everywhere on a
/// 5x5 probe grid. Returns the per-case results and whether all passed.
inline std::pair<json, bool> reproduce_examples() {
  json cases = json::array();
  bool all_ok = true;
  const WindowConfig cfg;
  const double tol = 1e-4;

  const auto closed_case = [&](BuiltinKind kind, const char* label, double x) {
    const OperatorSpec op = make_builtin_operator(kind);
    const PrimalDualPair p = pd1(x, 0.0);
    const double expected = fitz_closed_form(kind, p);
    const FitzValue got = fitz_sampled(op, p, cfg);
    const bool ok = got.finite() && std::abs(got.value - expected) <= tol;
    all_ok = all_ok && ok;
    cases.push_back(json{{"case", std::string(label) + "_closed_form"},
                         {"x", x},
                         {"xstar", 0.0},
                         {"expected", extended_to_json(expected)},
                         {"measured", got.finite() ? extended_to_json(got.value)
                                                   : json("inf")},
                         {"abs_error", got.finite()
                                           ? extended_to_json(std::abs(
                                                 got.value - expected))
                                           : json("inf")},
                         {"pass", ok}});
  };

  const auto divergent_case = [&](const OperatorSpec& op, const char* label,
                                  double x, double xstar) {
    const FitzValue got = fitz_sampled(op, pd1(x, xstar), cfg);
    const bool ok = got.divergent();
    all_ok = all_ok && ok;
    cases.push_back(json{{"case", std::string(label) + "_divergence"},
                         {"x", x},
                         {"xstar", xstar},
                         {"status", got.divergent() ? "divergent" : "finite"},
                         {"pass", ok}});
  };

  const std::vector<double> tri_xs{-2.0, -1.0, 0.0, 0.5, 1.0, 2.0};
  for (double x : tri_xs) closed_case(BuiltinKind::triangular, "triangular", x);
  const OperatorSpec tri = make_builtin_operator(BuiltinKind::triangular);
  for (double x : tri_xs) {
    for (double s : {-1.0, 0.5, 1.0}) divergent_case(tri, "triangular", x, s);
  }

  const std::vector<double> norm_xs{-1.0, 0.0, 1.0, 2.0};
  for (double x : norm_xs) closed_case(BuiltinKind::normal, "normal", x);
  const OperatorSpec nrm = make_builtin_operator(BuiltinKind::normal);
  for (double x : norm_xs) {
    for (double s : {-1.0, 0.5, 1.0}) divergent_case(nrm, "normal", x, s);
  }

  const OperatorSpec unit = make_builtin_operator(BuiltinKind::unit_interval);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      divergent_case(unit, "unit_interval", -2.0 + i, -2.0 + j);
    }
  }
  return {std::move(cases), all_ok};
}

/// Runs one CLI invocation. Exit codes: 0 all checks passed or evaluation
/// completed, 1 a check failed (the report carries a witness), 2 usage or
/// input error.
inline int run_command(const std::vector<std::string>& args, std::ostream& out,
                       std::ostream& err) {
  CLI::App app{"Fitzpatrick functions of sigma-monotone operators"};
  app.require_subcommand(1);

  RunReport report;
  report.version = kVersion;
  bool failed = false;
  std::string out_path;
  std::string csv_buffer;
  app.add_option("--out", out_path, "write the report (or CSV) to this path");

  detail::OperatorArgs op_args;
  detail::WindowArgs window_args;
  std::vector<double> x_flag, xstar_flag, y_flag, ystar_flag, z_flag;
  std::string sigma_arg, sigma2_arg;
  std::string points_path, candidates_path, graph2_path;
  std::size_t random_n = 0;
  double box = 5.0;
  std::uint64_t seed = 20240901;
  double check_tol = kDefaultCheckTol;
  double x_min = -2.0, x_max = 2.0, xstar_min = 0.0, xstar_max = 0.0;
  int grid_steps = 5;
  SolverConfig solver_cfg;
  BoundCheckConfig bound_cfg;
  MinorantSearchConfig minorant_cfg;

  const auto add_point_flags = [&](CLI::App* cmd, bool required) {
    auto* ox = cmd->add_option("--x", x_flag, "primal point")->delimiter(',');
    auto* os = cmd->add_option("--xstar", xstar_flag, "dual point")->delimiter(',');
    if (required) {
      ox->required();
      os->required();
    }
  };

  // --- eval ---------------------------------------------------------------
  auto* eval_cmd = app.add_subcommand("eval", "evaluate the Fitzpatrick function");
  op_args.add_flags(eval_cmd);
  window_args.add_flags(eval_cmd);
  add_point_flags(eval_cmd, true);
  eval_cmd->callback([&] {
    report.command = "eval";
    const OperatorSpec op = op_args.resolve();
    const PrimalDualPair p{x_flag, xstar_flag};
    const FitzValue v = op.is_finite_graph()
                            ? fitz_exact_finite(op.graph(), p)
                            : fitz_sampled(op, p, window_args.resolve());
    report.inputs = op_args.echo();
    report.inputs["x"] = x_flag;
    report.inputs["xstar"] = xstar_flag;
    report.results.push_back(to_json(v));
  });

  // --- grid ---------------------------------------------------------------
  auto* grid_cmd = app.add_subcommand("grid", "export a CSV evaluation grid");
  op_args.add_flags(grid_cmd);
  window_args.add_flags(grid_cmd);
  grid_cmd->add_option("--x-min", x_min);
  grid_cmd->add_option("--x-max", x_max);
  grid_cmd->add_option("--xstar-min", xstar_min);
  grid_cmd->add_option("--xstar-max", xstar_max);
  grid_cmd->add_option("--steps", grid_steps, "points per non-degenerate axis");
  grid_cmd->callback([&] {
    report.command = "grid";
    const OperatorSpec op = op_args.resolve();
    std::ostringstream csv;
    export_grid(op, x_min, x_max, xstar_min, xstar_max, grid_steps, csv,
                window_args.resolve());
    csv_buffer = csv.str();
    report.inputs = op_args.echo();
    report.inputs["x_range"] = json::array({x_min, x_max});
    report.inputs["xstar_range"] = json::array({xstar_min, xstar_max});
    report.inputs["steps"] = grid_steps;
    report.results.push_back(json{{"rows", std::count(csv_buffer.begin(),
                                                      csv_buffer.end(), '\n') -
                                               1}});
  });

  // --- check sigma / check related -----------------------------------------
  auto* check_cmd = app.add_subcommand("check", "sigma-monotonicity checks");
  check_cmd->require_subcommand(1);
  auto* check_sigma_cmd =
      check_cmd->add_subcommand("sigma", "certify sigma-monotonicity of a graph");
  op_args.add_flags(check_sigma_cmd);
  check_sigma_cmd->add_option("--sigma", sigma_arg, "const | path | expr")
      ->required();
  check_sigma_cmd->add_option("--tol", check_tol);
  check_sigma_cmd->callback([&] {
    report.command = "check sigma";
    const FiniteGraph g = detail::require_graph(op_args.resolve());
    const CheckReport r =
        check_sigma_monotone(g, parse_sigma_arg(sigma_arg), check_tol);
    failed = !r.passed;
    report.inputs = op_args.echo();
    report.inputs["sigma"] = sigma_arg;
    report.inputs["tol"] = check_tol;
    report.results.push_back(to_json(r));
  });

  auto* check_related_cmd = check_cmd->add_subcommand(
      "related", "test sigma-monotone relatedness of a candidate pair");
  op_args.add_flags(check_related_cmd);
  check_related_cmd->add_option("--sigma", sigma_arg)->required();
  check_related_cmd->add_option("--tol", check_tol);
  add_point_flags(check_related_cmd, true);
  check_related_cmd->callback([&] {
    report.command = "check related";
    const FiniteGraph g = detail::require_graph(op_args.resolve());
    const CheckReport r = is_sigma_related(PrimalDualPair{x_flag, xstar_flag}, g,
                                           parse_sigma_arg(sigma_arg), check_tol);
    failed = !r.passed;
    report.inputs = op_args.echo();
    report.inputs["sigma"] = sigma_arg;
    report.inputs["x"] = x_flag;
    report.inputs["xstar"] = xstar_flag;
    report.results.push_back(to_json(r));
  });

  // --- sigma-t --------------------------------------------------------------
  auto* sigma_t_cmd =
      app.add_subcommand("sigma-t", "estimate the pointwise sigma bound");
  op_args.add_flags(sigma_t_cmd);
  sigma_t_cmd->add_option("--x", x_flag, "domain point")->delimiter(',')->required();
  sigma_t_cmd->callback([&] {
    report.command = "sigma-t";
    const FiniteGraph g = detail::require_graph(op_args.resolve());
    report.inputs = op_args.echo();
    report.inputs["x"] = x_flag;
    report.results.push_back(json{{"sigma_t", estimate_sigma_T(x_flag, g)}});
  });

  // --- refute-max -----------------------------------------------------------
  auto* refute_cmd = app.add_subcommand(
      "refute-max", "search candidates for a maximality refutation");
  op_args.add_flags(refute_cmd);
  refute_cmd->add_option("--sigma", sigma_arg)->required();
  refute_cmd
      ->add_option("--candidates", candidates_path,
                   "JSON array of {x, xstar, sigma} candidates")
      ->required();
  refute_cmd->add_option("--tol", check_tol);
  refute_cmd->callback([&] {
    report.command = "refute-max";
    const FiniteGraph g = detail::require_graph(op_args.resolve());
    std::vector<PrimalDualPair> cands;
    std::vector<double> cand_sigma;
    for (const auto& j : load_json_file(candidates_path)) {
      cands.push_back(pair_from_json(j));
      cand_sigma.push_back(j.value("sigma", 0.0));
    }
    const CheckReport r = refute_maximality(g, parse_sigma_arg(sigma_arg), cands,
                                            cand_sigma, check_tol);
    failed = !r.passed;
    report.inputs = op_args.echo();
    report.inputs["sigma"] = sigma_arg;
    report.inputs["candidates"] = candidates_path;
    report.results.push_back(to_json(r));
  });

  // --- verify ... -----------------------------------------------------------
  auto* verify_cmd = app.add_subcommand("verify", "theorem-derived checks");
  verify_cmd->require_subcommand(1);

  const auto gather_points = [&](std::size_t dim) {
    if (!points_path.empty()) return detail::load_pairs(points_path);
    if (random_n == 0) {
      throw Error(ErrorCode::invalid_argument,
                  "give --points or --random N");
    }
    return detail::random_pairs(random_n, dim, box, seed);
  };

  auto* ineq_cmd = verify_cmd->add_subcommand(
      "inequality", "F(x, x*) >= <x*, x> at the test points");
  op_args.add_flags(ineq_cmd);
  window_args.add_flags(ineq_cmd);
  ineq_cmd->add_option("--points", points_path, "JSON array of pairs");
  ineq_cmd->add_option("--random", random_n, "number of random test points");
  ineq_cmd->add_option("--box", box);
  ineq_cmd->add_option("--seed", seed);
  ineq_cmd->callback([&] {
    report.command = "verify inequality";
    const OperatorSpec op = op_args.resolve();
    const auto pts = gather_points(op.dim());
    const InequalityReport r =
        verify_fitz_inequality(op, pts, window_args.resolve());
    failed = !r.check.passed;
    report.inputs = op_args.echo();
    report.inputs["points"] = pts.size();
    // The bound is a theorem about maximal sigma-monotone operators; the
    // tool cannot certify maximality, so the assertion is the caller's.
    report.inputs["maximality_asserted_by_caller"] = true;
    json flags = json::array();
    for (const auto& f : r.equality_points) {
      flags.push_back(json{{"point", to_json(f.point)},
                           {"on_graph", f.point_on_graph}});
    }
    report.results.push_back(json{{"check", to_json(r.check)},
                                  {"equality_points", std::move(flags)},
                                  {"divergent_skipped", r.divergent_skipped},
                                  {"checked", r.checked}});
  });

  auto* ext_cmd = verify_cmd->add_subcommand(
      "extension", "F_T <= F_S when gr T is contained in gr S");
  ext_cmd->add_option("--graph", op_args.graph_path, "graph of T")->required();
  ext_cmd->add_option("--graph2", graph2_path, "graph of S")->required();
  ext_cmd->add_option("--points", points_path);
  ext_cmd->add_option("--random", random_n);
  ext_cmd->add_option("--box", box);
  ext_cmd->add_option("--seed", seed);
  ext_cmd->callback([&] {
    report.command = "verify extension";
    const FiniteGraph t = detail::require_graph(load_operator(op_args.graph_path));
    const FiniteGraph s = detail::require_graph(load_operator(graph2_path));
    const auto pts = gather_points(t.dim());
    const CheckReport r = verify_extension_monotonicity(t, s, pts);
    failed = !r.passed;
    report.inputs["graph"] = op_args.graph_path;
    report.inputs["graph2"] = graph2_path;
    report.inputs["points"] = pts.size();
    report.results.push_back(to_json(r));
  });

  auto* convex_cmd =
      verify_cmd->add_subcommand("convexity", "midpoint convexity of F");
  op_args.add_flags(convex_cmd);
  window_args.add_flags(convex_cmd);
  convex_cmd->add_option("--random", random_n)->required();
  convex_cmd->add_option("--box", box);
  convex_cmd->add_option("--seed", seed);
  convex_cmd->callback([&] {
    report.command = "verify convexity";
    const OperatorSpec op = op_args.resolve();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> lam(0.0, 1.0);
    const auto ps = detail::random_pairs(random_n, op.dim(), box, seed + 1);
    const auto qs = detail::random_pairs(random_n, op.dim(), box, seed + 2);
    std::vector<ConvexityTriple> triples;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      triples.push_back(ConvexityTriple{ps[i], qs[i], lam(rng)});
    }
    const ConvexityReport r =
        verify_convexity(op, triples, window_args.resolve());
    failed = !r.check.passed;
    report.inputs = op_args.echo();
    report.inputs["triples"] = triples.size();
    report.results.push_back(json{{"check", to_json(r.check)},
                                  {"skipped", r.skipped},
                                  {"checked", r.checked}});
  });

  auto* infid_cmd = verify_cmd->add_subcommand(
      "inf-identity", "sup form equals the pairing-minus-inf form");
  op_args.add_flags(infid_cmd);
  infid_cmd->add_option("--points", points_path);
  infid_cmd->add_option("--random", random_n);
  infid_cmd->add_option("--box", box);
  infid_cmd->add_option("--seed", seed);
  add_point_flags(infid_cmd, false);
  infid_cmd->callback([&] {
    report.command = "verify inf-identity";
    const FiniteGraph g = detail::require_graph(op_args.resolve());
    std::vector<PrimalDualPair> pts;
    if (!x_flag.empty()) {
      pts.push_back(PrimalDualPair{x_flag, xstar_flag});
    } else {
      pts = gather_points(g.dim());
    }
    report.inputs = op_args.echo();
    report.inputs["points"] = pts.size();
    for (const auto& p : pts) {
      const CheckReport r = verify_fitz_inf_identity(g, p);
      failed = failed || !r.passed;
      report.results.push_back(to_json(r));
    }
  });

  auto* member_cmd = verify_cmd->add_subcommand(
      "membership", "membership bound consistency at a point");
  op_args.add_flags(member_cmd);
  member_cmd->add_option("--sigma", sigma_arg)->required();
  member_cmd->add_option("--tol", check_tol);
  add_point_flags(member_cmd, true);
  member_cmd->callback([&] {
    report.command = "verify membership";
    const FiniteGraph g = detail::require_graph(op_args.resolve());
    const MembershipReport r = membership_bound_check(
        g, parse_sigma_arg(sigma_arg), PrimalDualPair{x_flag, xstar_flag},
        check_tol);
    failed = !r.check.passed;
    report.inputs = op_args.echo();
    report.inputs["sigma"] = sigma_arg;
    report.inputs["x"] = x_flag;
    report.inputs["xstar"] = xstar_flag;
    report.results.push_back(json{{"check", to_json(r.check)},
                                  {"bound", extended_to_json(r.bound)},
                                  {"fitz", extended_to_json(r.fitz)},
                                  {"on_graph", r.point_on_graph}});
  });

  auto* mset_cmd = verify_cmd->add_subcommand(
      "m-set", "finite reach sup at a graph point");
  op_args.add_flags(mset_cmd);
  mset_cmd->add_option("--sigma", sigma_arg)->required();
  add_point_flags(mset_cmd, true);
  mset_cmd->callback([&] {
    report.command = "verify m-set";
    const FiniteGraph g = detail::require_graph(op_args.resolve());
    const PrimalDualPair p{x_flag, xstar_flag};
    const double v = m_set_value(g, parse_sigma_arg(sigma_arg), p);
    const double F = fitz_exact_finite(g, p).value;
    report.inputs = op_args.echo();
    report.inputs["sigma"] = sigma_arg;
    report.inputs["x"] = x_flag;
    report.inputs["xstar"] = xstar_flag;
    report.results.push_back(json{{"m_sup", v},
                                  {"fitz", extended_to_json(F)},
                                  {"fitz_finite", std::isfinite(F)}});
  });

  auto* rbound_cmd = verify_cmd->add_subcommand(
      "resolvent-bound", "nearness bound for a related pair");
  op_args.add_flags(rbound_cmd);
  rbound_cmd->add_option("--sigma", sigma_arg)->required();
  rbound_cmd->add_option("--y", y_flag, "related primal point")
      ->delimiter(',')
      ->required();
  rbound_cmd->add_option("--ystar", ystar_flag, "related dual point")
      ->delimiter(',')
      ->required();
  rbound_cmd->add_option("--tol", bound_cfg.tol);
  rbound_cmd->add_option("--scan-range", bound_cfg.solver.scan_range);
  rbound_cmd->add_option("--scan-points", bound_cfg.solver.scan_points);
  rbound_cmd->add_option("--sample-radius", bound_cfg.sample_radius);
  rbound_cmd->add_option("--sample-count", bound_cfg.sample_count);
  rbound_cmd->callback([&] {
    report.command = "verify resolvent-bound";
    const OperatorSpec op = op_args.resolve();
    const ResolventBoundReport r = verify_resolvent_bound(
        op, parse_sigma_arg(sigma_arg), PrimalDualPair{y_flag, ystar_flag},
        bound_cfg);
    failed = !r.check.passed;
    report.inputs = op_args.echo();
    report.inputs["sigma"] = sigma_arg;
    report.inputs["y"] = y_flag;
    report.inputs["ystar"] = ystar_flag;
    json j{{"precondition_ok", r.precondition_ok},
           {"skipped", r.skipped},
           {"check", to_json(r.check)}};
    if (r.solution) {
      j["solution"] = to_json(*r.solution);
      j["sigma_at_x"] = r.sigma_at_x;
      j["primal_distance"] = r.primal_distance;
      j["dual_distance"] = r.dual_distance;
    }
    report.results.push_back(std::move(j));
  });

  // --- resolvent --------------------------------------------------------------
  auto* resolvent_cmd =
      app.add_subcommand("resolvent", "solve (I + T)(x) = z");
  op_args.add_flags(resolvent_cmd);
  resolvent_cmd->add_option("--z", z_flag, "target point")->delimiter(',')->required();
  resolvent_cmd->add_option("--scan-range", solver_cfg.scan_range);
  resolvent_cmd->add_option("--scan-points", solver_cfg.scan_points);
  resolvent_cmd->add_option("--solver-tol", solver_cfg.tol);
  resolvent_cmd->callback([&] {
    report.command = "resolvent";
    const OperatorSpec op = op_args.resolve();
    const ResolventSolution s = resolvent_solve(op, z_flag, solver_cfg);
    report.inputs = op_args.echo();
    report.inputs["z"] = z_flag;
    report.results.push_back(to_json(s));
  });

  // --- minorant ---------------------------------------------------------------
  auto* minorant_cmd = app.add_subcommand(
      "minorant", "search the quadratic minorant shift");
  op_args.add_flags(minorant_cmd);
  minorant_cmd->add_option("--box-radius", minorant_cfg.box_radius);
  minorant_cmd->add_option("--grid-points", minorant_cfg.grid_points);
  minorant_cmd->add_option("--refine", minorant_cfg.refine_steps);
  minorant_cmd->add_option("--verify-samples", minorant_cfg.verify_samples);
  minorant_cmd->add_option("--seed", minorant_cfg.seed);
  minorant_cmd->add_option("--tol", minorant_cfg.tol);
  minorant_cmd->callback([&] {
    report.command = "minorant";
    const OperatorSpec op = op_args.resolve();
    const MinorantResult r = quadratic_minorant_search(op, minorant_cfg);
    failed = !r.check.passed;
    report.inputs = op_args.echo();
    report.results.push_back(json{{"shift", to_json(r.shift)},
                                  {"argmin", to_json(r.argmin)},
                                  {"min_value", extended_to_json(r.min_value)},
                                  {"check", to_json(r.check)},
                                  {"finite_grid_evals", r.finite_grid_evals}});
  });

  // --- reproduce examples -------------------------------------------------------
  auto* reproduce_cmd = app.add_subcommand("reproduce", "reproduction suites");
  reproduce_cmd->require_subcommand(1);
  auto* examples_cmd = reproduce_cmd->add_subcommand(
      "examples", "closed forms and divergence of the catalog operators");
  examples_cmd->callback([&] {
    report.command = "reproduce examples";
    auto [cases, ok] = reproduce_examples();
    failed = !ok;
    report.results = std::move(cases);
  });

  // --- parse and emit -------------------------------------------------------
  // Let flags placed after a subcommand (notably --out) reach the app level.
  const std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* a) {
    for (CLI::App* sub : a->get_subcommands([](const CLI::App*) { return true; })) {
      sub->fallthrough();
      enable_fallthrough(sub);
    }
  };
  enable_fallthrough(&app);

  std::vector<const char*> argv;
  argv.push_back("fitz");
  for (const auto& a : args) argv.push_back(a.c_str());

  const auto started = std::chrono::steady_clock::now();
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help() << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return 2;
  } catch (const json::exception& e) {
    err << "error [io]: " << e.what() << '\n';
    return 2;
  }
  const auto elapsed = std::chrono::steady_clock::now() - started;
  report.timing_ms =
      std::chrono::duration<double, std::milli>(elapsed).count();

  if (!csv_buffer.empty()) {
    // grid: CSV goes to --out (or stdout), the report JSON to stdout.
    if (!out_path.empty()) {
      std::ofstream file(out_path);
      if (!file) {
        err << "error [io]: cannot write '" << out_path << "'\n";
        return 2;
      }
      file << csv_buffer;
      out << to_json(report).dump(2) << '\n';
    } else {
      out << csv_buffer;
    }
    return failed ? 1 : 0;
  }

  const std::string doc = to_json(report).dump(2);
  if (!out_path.empty()) {
    std::ofstream file(out_path);
    if (!file) {
      err << "error [io]: cannot write '" << out_path << "'\n";
      return 2;
    }
    file << doc << '\n';
  } else {
    out << doc << '\n';
  }
  return failed ? 1 : 0;
}

}  // namespace fitz::cli
