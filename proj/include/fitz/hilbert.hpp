#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "fitz/fitzpatrick.hpp"
#include "fitz/operators.hpp"
#include "fitz/report.hpp"
#include "fitz/sigma.hpp"
#include "fitz/sigma_analysis.hpp"

namespace fitz {

/// A solution of (I + T)(x) ∋ z with x* the evaluated image element.
struct ResolventSolution {
  Vec x;
  Vec x_star;
  double residual = 0.0;  // ||x + x* - z||
};

struct SolverConfig {
  double scan_range = 64.0;
  int scan_points = 65537;
  double tol = 1e-8;
  int max_refine_iters = 200;

  void validate() const {
    if (scan_points < 3) {
      throw Error(ErrorCode::invalid_argument, "scan_points must be >= 3");
    }
    if (!(tol > 0.0)) {
      throw Error(ErrorCode::invalid_argument, "solver tol must be > 0");
    }
  }
};

namespace detail {

/// Bisection on a bracket [a, b] with g(a) and g(b) of opposite sign.
/// Runs to the floating-point limit of the bracket (or the iteration cap)
/// and returns the endpoint with the smaller |g|.
template <typename G>
double bisect(G&& g, double a, double b, double ga, double gb, int max_iters) {
  for (int it = 0; it < max_iters; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid == a || mid == b) break;
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((ga < 0.0) != (gm < 0.0)) {
      b = mid;
      gb = gm;
    } else {
      a = mid;
      ga = gm;
    }
  }
  return std::abs(ga) <= std::abs(gb) ? a : b;
}

}  // namespace detail

/// Solves (I + T)(x) ∋ z.
///
/// Finite graphs (and tabulated operators, whose images exist only on their
/// grid) take the exact minimizer of ||x + x* - z|| over the stored pairs,
/// first index on ties. Continuous 1-D operators are scanned for sign
/// changes of x + T(x) - z over [-scan_range, scan_range], one branch per
/// image element, and the leftmost bracket is refined by bisection; the root
/// with the smallest x wins.
inline ResolventSolution resolvent_solve(const OperatorSpec& op, const Vec& z,
                                         const SolverConfig& cfg = {}) {
  cfg.validate();
  if (!all_finite(z)) {
    throw Error(ErrorCode::invalid_argument, "z must be finite");
  }

  if (op.is_finite_graph() || op.is_tabulated()) {
    // Tabulated operators have images only on their grid, so both
    // representations reduce to an exact search over stored pairs.
    const FiniteGraph g =
        op.is_finite_graph() ? op.graph()
                             : tabulated_as_graph(std::get<Tabulated1D>(op.rep));
    if (z.size() != g.dim()) {
      throw DimensionMismatch("z dimension does not match operator");
    }
    ResolventSolution best;
    double best_res = kInfinity;
    for (const auto& q : g.points) {
      double s = 0.0;
      for (std::size_t i = 0; i < z.size(); ++i) {
        const double d = q.x[i] + q.x_star[i] - z[i];
        s += d * d;
      }
      const double res = std::sqrt(s);
      if (res < best_res) {
        best_res = res;
        best = ResolventSolution{q.x, q.x_star, res};
      }
    }
    if (best_res > cfg.tol) {
      throw NoSolutionInRange(
          "no graph point solves (I + T)(x) = z within tolerance; best residual " +
              std::to_string(best_res),
          best_res);
    }
    return best;
  }

  if (z.size() != 1) {
    throw DimensionMismatch("continuous resolvents are 1-D");
  }
  const double zz = z[0];
  std::vector<double> values;
  values.clear();
  detail::eval_1d_into(op, 0.0, values);
  const std::size_t branches = values.size();

  // Separate buffer: this runs inside bisection while the scan loop is
  // still iterating `values` for the current step.
  std::vector<double> refine_values;
  const auto branch_g = [&op, &refine_values, zz](std::size_t j, double x) {
    refine_values.clear();
    detail::eval_1d_into(op, x, refine_values);
    return x + refine_values[j] - zz;
  };

  const double step =
      2.0 * cfg.scan_range / static_cast<double>(cfg.scan_points - 1);
  std::vector<double> prev_g(branches, 0.0);
  double scan_min = kInfinity;
  bool have_root = false;
  double best_x = kInfinity;
  std::size_t best_branch = 0;

  for (int i = 0; i < cfg.scan_points; ++i) {
    const double x = -cfg.scan_range + static_cast<double>(i) * step;
    values.clear();
    detail::eval_1d_into(op, x, values);
    if (values.size() != branches) {
      throw Error(ErrorCode::invalid_argument,
                  "operator image count varies across the scan range");
    }
    for (std::size_t j = 0; j < branches; ++j) {
      const double gj = x + values[j] - zz;
      scan_min = std::min(scan_min, std::abs(gj));
      double root = kInfinity;
      bool got = false;
      if (gj == 0.0) {
        root = x;
        got = true;
      } else if (i > 0 && (prev_g[j] < 0.0) != (gj < 0.0)) {
        const double a = x - step;
        root = detail::bisect([&](double u) { return branch_g(j, u); }, a, x,
                              prev_g[j], gj, cfg.max_refine_iters);
        got = std::abs(branch_g(j, root)) <= cfg.tol;
      }
      if (got && (!have_root || root < best_x)) {
        have_root = true;
        best_x = root;
        best_branch = j;
      }
      prev_g[j] = gj;
    }
    // Roots surface in increasing x, so the first step that yields one
    // already holds the smallest root across all branches.
    if (have_root) break;
  }

  if (!have_root) {
    if (scan_min <= cfg.tol) {
      // A flat near-zero without a sign change still counts as a solution.
      double arg = 0.0;
      double best = kInfinity;
      for (int i = 0; i < cfg.scan_points; ++i) {
        const double x = -cfg.scan_range + static_cast<double>(i) * step;
        values.clear();
        detail::eval_1d_into(op, x, values);
        for (std::size_t j = 0; j < branches; ++j) {
          const double gj = std::abs(x + values[j] - zz);
          if (gj < best) {
            best = gj;
            arg = x;
            best_branch = j;
          }
        }
      }
      best_x = arg;
    } else {
      throw NoSolutionInRange(
          "no sign change of x + T(x) - z in the scan range; smallest |g| = " +
              std::to_string(scan_min),
          scan_min);
    }
  }

  values.clear();
  detail::eval_1d_into(op, best_x, values);
  const double xs = values[best_branch];
  return ResolventSolution{Vec{best_x}, Vec{xs},
                           std::abs(best_x + xs - zz)};
}

/// Result of the resolvent nearness-bound check. When the relatedness
/// precondition fails the check is skipped and reported as such.
struct ResolventBoundReport {
  bool precondition_ok = false;
  bool skipped = true;
  CheckReport check;
  std::optional<ResolventSolution> solution;
  double sigma_at_x = 0.0;
  double primal_distance = 0.0;
  double dual_distance = 0.0;
};

struct BoundCheckConfig {
  SolverConfig solver;
  double sample_radius = 16.0;  // relatedness graph window
  int sample_count = 2049;
  double related_tol = 1e-9;
  double tol = 1e-8;
};

/// Builds the finite graph used for relatedness preconditions.
inline FiniteGraph relatedness_graph(const OperatorSpec& op,
                                     const BoundCheckConfig& cfg) {
  if (op.is_finite_graph()) return op.graph();
  return sample_graph_1d(op, cfg.sample_radius,
                         static_cast<std::size_t>(cfg.sample_count));
}

/// For a related pair (y, y*), solves the resolvent at z = y + y* and checks
/// | ||x*-y*|| - ||x-y|| | <= tol and ||x-y|| <= sigma(x) + tol; when
/// sigma(x) <= tol it additionally requires both distances <= tol (the pair
/// must already lie on the graph).
inline ResolventBoundReport verify_resolvent_bound(const OperatorSpec& op,
                                                   const SigmaSpec& sigma,
                                                   const PrimalDualPair& related,
                                                   const BoundCheckConfig& cfg = {}) {
  validate_pair(related, "related pair");
  ResolventBoundReport report;

  const FiniteGraph graph = relatedness_graph(op, cfg);
  const CheckReport pre =
      is_sigma_related(related, graph, sigma, cfg.related_tol);
  report.precondition_ok = pre.passed;
  if (!pre.passed) {
    return report;  // skipped; check stays vacuously passed
  }
  report.skipped = false;

  Vec z(related.x.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    z[i] = related.x[i] + related.x_star[i];
  }
  ResolventSolution sol = resolvent_solve(op, z, cfg.solver);
  report.primal_distance = distance(sol.x, related.x);
  report.dual_distance = distance(sol.x_star, related.x_star);
  report.sigma_at_x = sigma_value(sigma, sol.x);

  double margin =
      std::min(cfg.tol - std::abs(report.dual_distance - report.primal_distance),
               report.sigma_at_x + cfg.tol - report.primal_distance);
  if (report.sigma_at_x <= cfg.tol) {
    margin = std::min({margin, cfg.tol - report.primal_distance,
                       cfg.tol - report.dual_distance});
  }
  report.check.margin = margin;
  report.check.passed = margin >= 0.0;
  if (!report.check.passed) {
    report.check.witness =
        PairWitness{related, PrimalDualPair{sol.x, sol.x_star}};
  }
  report.solution = std::move(sol);
  return report;
}

struct ProbeReport {
  CheckReport check;
  int checked = 0;
  int skipped_unrelated = 0;
};

/// For a monotone operator with R(I + T) = X, every monotonically related
/// pair must already lie on the graph. Each related candidate is sent
/// through the resolvent at z = y + y*; the solved x must land within tol of
/// the candidate's y. Unrelated candidates are skipped and counted.
inline ProbeReport corollary_monotone_maximality_probe(
    const OperatorSpec& op, const std::vector<PrimalDualPair>& candidates,
    const BoundCheckConfig& cfg = {}) {
  const FiniteGraph graph = relatedness_graph(op, cfg);
  const SigmaSpec zero = sigma_constant(0.0);
  if (!check_sigma_monotone(graph, zero, cfg.related_tol).passed) {
    throw Error(ErrorCode::invalid_argument,
                "operator sample is not monotone; the probe does not apply");
  }

  ProbeReport report;
  bool found = false;
  for (const auto& cand : candidates) {
    if (!is_sigma_related(cand, graph, zero, cfg.related_tol).passed) {
      ++report.skipped_unrelated;
      continue;
    }
    ++report.checked;
    Vec z(cand.x.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
      z[i] = cand.x[i] + cand.x_star[i];
    }
    const ResolventSolution sol = resolvent_solve(op, z, cfg.solver);
    const double slack = cfg.tol - distance(sol.x, cand.x);
    if (!found || slack < report.check.margin) {
      found = true;
      report.check.margin = slack;
      if (slack < 0.0) {
        report.check.witness =
            PairWitness{cand, PrimalDualPair{sol.x, sol.x_star}};
      }
    }
  }
  report.check.passed = !found || report.check.margin >= 0.0;
  if (report.check.passed) report.check.witness.reset();
  return report;
}

struct MinorantSearchConfig {
  double box_radius = 8.0;
  int grid_points = 33;  // per axis, odd keeps the origin on the grid
  int refine_steps = 60;
  double tol = 1e-9;
  int verify_samples = 1000;
  double verify_radius = 8.0;
  std::uint64_t seed = 0x5eedULL;
  WindowConfig window;
};

struct MinorantResult {
  PrimalDualPair shift;   // v = -argmin of F + 0.5 ||.||^2
  PrimalDualPair argmin;
  double min_value = 0.0;
  CheckReport check;      // margin = worst of F(p) + 0.5||p||^2 - 0.5||p+v||^2
  int finite_grid_evals = 0;
  int divergent_verify_skipped = 0;
};

/// Derivative-free search for the quadratic-minorant shift: minimizes
/// G(p) = F_T(p) + 0.5 ||p||^2 over a product grid with step-halving
/// refinement around the incumbent, then verifies
/// F_T(p) + 0.5||p||^2 >= 0.5||p + v||^2 - tol at sampled points.
/// Throws NowhereFinite when no grid point has a finite value (F_T is not
/// proper on the search box, so the minorant fact does not apply).
inline MinorantResult quadratic_minorant_search(const OperatorSpec& op,
                                                const MinorantSearchConfig& cfg = {}) {
  if (op.dim() != 1) {
    throw UnsupportedKind("minorant search is implemented for 1-D operators");
  }
  if (cfg.grid_points < 2) {
    throw Error(ErrorCode::invalid_argument, "grid_points must be >= 2");
  }

  const auto G = [&](double x, double s, double& out) {
    const double F = fitz_value(op, pd1(x, s), cfg.window);
    if (!std::isfinite(F)) return false;
    out = F + 0.5 * (x * x + s * s);
    return true;
  };

  MinorantResult result;
  double best = kInfinity;
  double bx = 0.0, bs = 0.0;
  const double step0 =
      2.0 * cfg.box_radius / static_cast<double>(cfg.grid_points - 1);
  for (int i = 0; i < cfg.grid_points; ++i) {
    const double x = -cfg.box_radius + static_cast<double>(i) * step0;
    for (int j = 0; j < cfg.grid_points; ++j) {
      const double s = -cfg.box_radius + static_cast<double>(j) * step0;
      double g;
      if (!G(x, s, g)) continue;
      ++result.finite_grid_evals;
      if (g < best) {
        best = g;
        bx = x;
        bs = s;
      }
    }
  }
  if (result.finite_grid_evals == 0) {
    throw NowhereFinite("no finite Fitzpatrick value in the search box");
  }

  double step = step0;
  for (int r = 0; r < cfg.refine_steps; ++r) {
    step *= 0.5;
    const double cx = bx, cs = bs;
    for (int di = -4; di <= 4; ++di) {
      for (int dj = -4; dj <= 4; ++dj) {
        const double x = cx + di * step;
        const double s = cs + dj * step;
        double g;
        if (!G(x, s, g)) continue;
        if (g < best) {
          best = g;
          bx = x;
          bs = s;
        }
      }
    }
  }

  result.argmin = pd1(bx, bs);
  result.shift = pd1(bx == 0.0 ? 0.0 : -bx, bs == 0.0 ? 0.0 : -bs);
  result.min_value = best;

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> coord(-cfg.verify_radius,
                                               cfg.verify_radius);
  bool found = false;
  PrimalDualPair worst_point;
  for (int k = 0; k < cfg.verify_samples; ++k) {
    const double x = coord(rng);
    double s = coord(rng);
    // Every other sample stays on the dual slice through the argmin, so
    // operators whose F is finite only there still get exercised.
    if (k % 2 == 1) s = bs;
    const double F = fitz_value(op, pd1(x, s), cfg.window);
    if (!std::isfinite(F)) {
      ++result.divergent_verify_skipped;
      continue;
    }
    const double lhs = F + 0.5 * (x * x + s * s);
    const double dx = x - bx;
    const double ds = s - bs;
    const double rhs = 0.5 * (dx * dx + ds * ds);
    const double margin = lhs - rhs;
    if (!found || margin < result.check.margin) {
      found = true;
      result.check.margin = margin;
      worst_point = pd1(x, s);
    }
  }
  result.check.passed = !found || result.check.margin >= -cfg.tol;
  if (!result.check.passed) {
    result.check.witness = PairWitness{worst_point, worst_point};
  }
  return result;
}

}  // namespace fitz
