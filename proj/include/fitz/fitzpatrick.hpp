#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "fitz/operators.hpp"
#include "fitz/report.hpp"
#include "fitz/sigma.hpp"

namespace fitz {

/// An extended-real Fitzpatrick evaluation.
///
/// finite: `value` is exactly the affine term re-evaluated at `witness`.
/// divergent: `growth_trace` holds (window radius, windowed sup) rows whose
/// increments exceeded the growth threshold over three consecutive windows.
/// `stabilized` is false when the windowed sups neither settled nor grew
/// fast enough to count as divergence evidence.
struct FitzValue {
  enum class Status { finite, divergent };

  Status status = Status::finite;
  double value = 0.0;
  PrimalDualPair witness;
  std::vector<std::pair<double, double>> growth_trace;
  bool stabilized = true;

  bool finite() const { return status == Status::finite; }
  bool divergent() const { return status == Status::divergent; }
};

/// Window ladder for sampled suprema over an unbounded graph.
struct WindowConfig {
  std::vector<double> radii = default_radii();
  int samples_per_window = 4097;
  double growth_threshold = 0.1;
  double tol = 1e-9;

  static std::vector<double> default_radii() {
    std::vector<double> r;
    for (int k = 0; k <= 12; ++k) r.push_back(std::ldexp(1.0, k));
    return r;
  }

  void validate() const {
    if (radii.empty()) {
      throw Error(ErrorCode::invalid_argument, "window radii must be non-empty");
    }
    for (std::size_t i = 1; i < radii.size(); ++i) {
      if (!(radii[i - 1] < radii[i])) {
        throw Error(ErrorCode::invalid_argument,
                    "window radii must be strictly increasing");
      }
    }
    if (samples_per_window < 3) {
      throw Error(ErrorCode::invalid_argument, "samples_per_window must be >= 3");
    }
  }
};

/// The affine term <x*, y> + <y*, x> - <y*, y> whose supremum over the graph
/// defines the Fitzpatrick function.
inline double fitz_term(const PrimalDualPair& p, const Vec& y, const Vec& ystar) {
  return dot(p.x_star, y) + dot(ystar, p.x) - dot(ystar, y);
}

/// Exact maximum of the affine term over a finite graph. The witness is the
/// first maximizer in index order; the stored value is the term at the
/// witness, bit for bit.
inline FitzValue fitz_exact_finite(const FiniteGraph& graph,
                                   const PrimalDualPair& p) {
  graph.validate();
  validate_pair(p, "evaluation point");
  if (p.dim() != graph.dim()) {
    throw DimensionMismatch("evaluation point dimension does not match graph");
  }
  FitzValue out;
  out.value = -kInfinity;
  for (const auto& q : graph.points) {
    const double t = fitz_term(p, q.x, q.x_star);
    if (t > out.value) {
      out.value = t;
      out.witness = q;
    }
  }
  return out;
}

/// One windowed-sup ladder: trace of (radius, sup over samples seen so far)
/// plus the best term and its witness. Sample sets are nested across windows
/// (each window's sup is cumulative), so the trace is non-decreasing.
struct WindowScan {
  std::vector<std::pair<double, double>> trace;
  double value = -kInfinity;
  PrimalDualPair witness;
};

inline WindowScan windowed_sups(const OperatorSpec& op, const PrimalDualPair& p,
                                const WindowConfig& cfg = {}) {
  cfg.validate();
  validate_pair(p, "evaluation point");
  WindowScan scan;

  if (op.is_finite_graph() || op.is_tabulated()) {
    // Tabulated operators have images only at their stored grid points, so
    // they scan as the finite graph they are.
    FiniteGraph converted;
    if (op.is_tabulated()) {
      converted = tabulated_as_graph(std::get<Tabulated1D>(op.rep));
    }
    const FiniteGraph& g = op.is_finite_graph() ? op.graph() : converted;
    if (p.dim() != g.dim()) {
      throw DimensionMismatch("evaluation point dimension does not match graph");
    }
    // Points nest by sup-norm radius, so each window's fresh rescan is the
    // exact reduction over everything seen so far; once a window covers the
    // whole graph the result matches fitz_exact_finite bit for bit,
    // including the first-maximizer tie-break.
    for (double radius : cfg.radii) {
      double sup = -kInfinity;
      const PrimalDualPair* window_witness = nullptr;
      for (const auto& q : g.points) {
        bool inside = true;
        for (double c : q.x) {
          if (std::abs(c) > radius) {
            inside = false;
            break;
          }
        }
        if (!inside) continue;
        const double t = fitz_term(p, q.x, q.x_star);
        if (t > sup) {
          sup = t;
          window_witness = &q;
        }
      }
      if (window_witness) {
        scan.value = sup;
        scan.witness = *window_witness;
      }
      scan.trace.emplace_back(radius, sup);
    }
    return scan;
  }

  if (p.dim() != 1) {
    throw DimensionMismatch("continuous operators are 1-D");
  }
  const double px = p.x[0];
  const double ps = p.x_star[0];
  std::vector<double> values;
  for (double radius : cfg.radii) {
    const double step =
        2.0 * radius / static_cast<double>(cfg.samples_per_window - 1);
    for (int i = 0; i < cfg.samples_per_window; ++i) {
      const double y = -radius + static_cast<double>(i) * step;
      values.clear();
      detail::eval_1d_into(op, y, values);
      for (double ys : values) {
        const double t = ps * y + ys * px - ys * y;
        if (t > scan.value) {
          scan.value = t;
          scan.witness = pd1(y, ys);
        }
      }
    }
    scan.trace.emplace_back(radius, scan.value);
  }
  return scan;
}

/// Sampled Fitzpatrick evaluation with divergence evidence.
///
/// Returns finite with the stabilized value when the last three windowed
/// sups agree within tol * (1 + |value|); returns divergent when the sup
/// increments exceed growth_threshold * R_k over three consecutive windows;
/// otherwise returns the last value with stabilized = false.
inline FitzValue fitz_sampled(const OperatorSpec& op, const PrimalDualPair& p,
                              const WindowConfig& cfg = {}) {
  const WindowScan scan = windowed_sups(op, p, cfg);
  const std::size_t n = scan.trace.size();
  if (!(scan.value > -kInfinity)) {
    throw EmptyGraph("operator has no graph point inside the largest window");
  }

  if (n >= 3) {
    const double a = scan.trace[n - 3].second;
    const double c = scan.trace[n - 1].second;
    if (std::isfinite(a) && c - a <= cfg.tol * (1.0 + std::abs(c))) {
      FitzValue out;
      out.value = scan.value;
      out.witness = scan.witness;
      return out;
    }
  }

  int streak = 0;
  for (std::size_t k = 1; k < n; ++k) {
    const double prev = scan.trace[k - 1].second;
    const double cur = scan.trace[k].second;
    const bool grew = std::isfinite(prev) &&
                      cur - prev >= cfg.growth_threshold * scan.trace[k].first;
    streak = grew ? streak + 1 : 0;
    if (streak >= 3) {
      FitzValue out;
      out.status = FitzValue::Status::divergent;
      out.value = kInfinity;
      out.growth_trace = scan.trace;
      out.stabilized = false;
      return out;
    }
  }

  FitzValue out;
  out.value = scan.value;
  out.witness = scan.witness;
  out.stabilized = false;
  return out;
}

/// Closed-form Fitzpatrick values for the catalog operators, as extended
/// reals (+inf off the effective domain).
///
/// triangular: finite only at x* = 0. The sup of (1+y)(x-y) over y in [-1,0]
/// hits the interior vertex (x-1)/2 only for |x| <= 1; outside that range
/// the boundary y = 0 (resp. y = -1) wins, giving x for x >= 1 and 0 for
/// x <= -1.
/// normal: finite only at x* = 0, with value (sqrt(x^2+1) + x) / 2 (the
/// cancellation-free form of 1 / (2 (sqrt(x^2+1) - x))).
/// identity: (x + x*)^2 / 4 everywhere.
inline double fitz_closed_form(BuiltinKind kind, const PrimalDualPair& p) {
  validate_pair(p, "evaluation point");
  if (p.dim() != 1) {
    throw DimensionMismatch("closed forms are 1-D");
  }
  const double x = p.x[0];
  const double xs = p.x_star[0];
  switch (kind) {
    case BuiltinKind::identity:
      return (x + xs) * (x + xs) / 4.0;
    case BuiltinKind::triangular:
      if (xs != 0.0) return kInfinity;
      if (x >= 1.0) return x;
      if (x <= -1.0) return 0.0;
      return (x + 1.0) * (x + 1.0) / 4.0;
    case BuiltinKind::normal:
      if (xs != 0.0) return kInfinity;
      return (std::sqrt(x * x + 1.0) + x) / 2.0;
    default:
      throw UnsupportedKind(std::string("no closed form for builtin '") +
                            to_string(kind) + "'");
  }
}

inline bool has_closed_form(const OperatorSpec& op) {
  const auto* b = std::get_if<Builtin>(&op.rep);
  if (!b) return false;
  return b->kind == BuiltinKind::identity ||
         b->kind == BuiltinKind::triangular || b->kind == BuiltinKind::normal;
}

/// Extended-real Fitzpatrick value by the cheapest exact route available:
/// exact reduction for finite graphs, closed form for catalog operators,
/// windowed sampling otherwise (+inf when divergence evidence was found).
inline double fitz_value(const OperatorSpec& op, const PrimalDualPair& p,
                         const WindowConfig& cfg = {}) {
  if (op.is_finite_graph()) return fitz_exact_finite(op.graph(), p).value;
  if (has_closed_form(op)) {
    return fitz_closed_form(std::get<Builtin>(op.rep).kind, p);
  }
  const FitzValue v = fitz_sampled(op, p, cfg);
  return v.finite() ? v.value : kInfinity;
}

/// True when (x, x*) lies on the operator graph within the match tolerance.
inline bool on_graph(const OperatorSpec& op, const PrimalDualPair& p) {
  if (op.dim() != p.dim()) return false;
  for (const Vec& image : evaluate_operator(op, p.x)) {
    if (matches(image, p.x_star)) return true;
  }
  return false;
}

struct EqualityFlag {
  PrimalDualPair point;
  bool point_on_graph = false;
};

/// verify_fitz_inequality outcome: the inequality check plus the points where
/// the value met <x*, x> to tolerance (the equality case happens on graph
/// points carrying sigma = 0).
struct InequalityReport {
  CheckReport check;
  std::vector<EqualityFlag> equality_points;
  int divergent_skipped = 0;
  int checked = 0;
};

/// Checks F_T(x, x*) >= <x*, x> - tol at every test point with a finite
/// evaluation; divergence evidence passes vacuously.
inline InequalityReport verify_fitz_inequality(
    const OperatorSpec& op, const std::vector<PrimalDualPair>& test_points,
    const WindowConfig& cfg = {}) {
  InequalityReport report;
  bool found = false;
  std::size_t worst = 0;
  for (std::size_t i = 0; i < test_points.size(); ++i) {
    const PrimalDualPair& p = test_points[i];
    const double F = fitz_value(op, p, cfg);
    if (!std::isfinite(F)) {
      ++report.divergent_skipped;
      continue;
    }
    ++report.checked;
    const double pairing = dot(p.x_star, p.x);
    const double slack = F - pairing;
    if (!found || slack < report.check.margin) {
      found = true;
      report.check.margin = slack;
      worst = i;
    }
    if (std::abs(slack) <= cfg.tol) {
      report.equality_points.push_back(EqualityFlag{p, on_graph(op, p)});
    }
  }
  report.check.passed = !found || report.check.margin >= -cfg.tol;
  if (!report.check.passed) {
    report.check.witness = PairWitness{test_points[worst], test_points[worst]};
  }
  return report;
}

/// Checks the rearrangement F_T(p) = <x*, x> - min over the graph of
/// <y* - x*, y - x>, which is exact on finite graphs up to roundoff.
inline CheckReport verify_fitz_inf_identity(const FiniteGraph& graph,
                                            const PrimalDualPair& p,
                                            double tol = 1e-9) {
  const double lhs = fitz_exact_finite(graph, p).value;
  double inf_side = kInfinity;
  for (const auto& q : graph.points) {
    double inner = 0.0;
    for (std::size_t i = 0; i < p.dim(); ++i) {
      inner += (q.x_star[i] - p.x_star[i]) * (q.x[i] - p.x[i]);
    }
    inf_side = std::min(inf_side, inner);
  }
  const double rhs = dot(p.x_star, p.x) - inf_side;
  CheckReport report;
  report.margin = -std::abs(lhs - rhs);
  report.passed = std::abs(lhs - rhs) <= tol;
  if (!report.passed) report.witness = PairWitness{p, p};
  return report;
}

/// With gr T contained in gr S, checks F_T <= F_S + 1e-12 at each test point.
inline CheckReport verify_extension_monotonicity(
    const FiniteGraph& graph_T, const FiniteGraph& graph_S,
    const std::vector<PrimalDualPair>& test_points) {
  graph_T.validate();
  graph_S.validate();
  for (const auto& p : graph_T.points) {
    bool present = false;
    for (const auto& q : graph_S.points) {
      if (pairs_match(p, q)) {
        present = true;
        break;
      }
    }
    if (!present) {
      throw NotAnExtension("graph_S does not contain every point of graph_T");
    }
  }
  CheckReport report;
  bool found = false;
  std::size_t worst = 0;
  for (std::size_t i = 0; i < test_points.size(); ++i) {
    const double ft = fitz_exact_finite(graph_T, test_points[i]).value;
    const double fs = fitz_exact_finite(graph_S, test_points[i]).value;
    const double slack = fs - ft;
    if (!found || slack < report.margin) {
      found = true;
      report.margin = slack;
      worst = i;
    }
  }
  report.passed = !found || report.margin >= -1e-12;
  if (!report.passed) {
    report.witness = PairWitness{test_points[worst], test_points[worst]};
  }
  return report;
}

/// membership_bound_check outcome; `bound` is
/// <x*, x> + max_y min{sigma(x), sigma(y)} ||x - y|| over graph domain points.
struct MembershipReport {
  CheckReport check;
  double bound = 0.0;
  double fitz = 0.0;
  bool point_on_graph = false;
};

/// Checks the finitely decidable direction of the membership bound: a graph
/// point must satisfy bound >= F - tol (equivalently, bound < F - tol forces
/// the point off the graph).
inline MembershipReport membership_bound_check(const FiniteGraph& graph,
                                               const SigmaSpec& sigma,
                                               const PrimalDualPair& p,
                                               double tol = 1e-9) {
  graph.validate();
  validate_pair(p, "test point");
  if (p.dim() != graph.dim()) {
    throw DimensionMismatch("test point dimension does not match graph");
  }
  const double sigma_x = sigma_value(sigma, p.x);
  double reach = 0.0;
  for (const auto& q : graph.points) {
    const double v =
        std::min(sigma_x, sigma_value(sigma, q.x)) * distance(p.x, q.x);
    reach = std::max(reach, v);
  }
  MembershipReport report;
  report.bound = dot(p.x_star, p.x) + reach;
  report.fitz = fitz_exact_finite(graph, p).value;
  for (const auto& q : graph.points) {
    if (pairs_match(q, p)) {
      report.point_on_graph = true;
      break;
    }
  }
  report.check.margin = report.bound - report.fitz;
  report.check.passed =
      !(report.point_on_graph && report.bound < report.fitz - tol);
  if (!report.check.passed) report.check.witness = PairWitness{p, p};
  return report;
}

/// Exact finite-graph value of sup_y min{sigma(x), sigma(y)} ||x - y|| at a
/// graph point; pairing it with a finite Fitzpatrick value illustrates the
/// membership of co M in the domain of F_T.
inline double m_set_value(const FiniteGraph& graph, const SigmaSpec& sigma,
                          const PrimalDualPair& p) {
  graph.validate();
  validate_pair(p, "graph point");
  bool present = false;
  for (const auto& q : graph.points) {
    if (pairs_match(q, p)) {
      present = true;
      break;
    }
  }
  if (!present) {
    throw NotInGraph("point is not on the graph");
  }
  const double sigma_x = sigma_value(sigma, p.x);
  double best = 0.0;
  for (const auto& q : graph.points) {
    const double v =
        std::min(sigma_x, sigma_value(sigma, q.x)) * distance(p.x, q.x);
    best = std::max(best, v);
  }
  return best;
}

struct ConvexityTriple {
  PrimalDualPair p;
  PrimalDualPair q;
  double lambda = 0.5;
};

struct ConvexityReport {
  CheckReport check;
  int skipped = 0;
  int checked = 0;
};

/// Checks F(lambda p + (1-lambda) q) <= lambda F(p) + (1-lambda) F(q) + tol,
/// with the convex combination taken componentwise in (x, x*). Triples with
/// a divergent endpoint or midpoint are skipped and counted.
inline ConvexityReport verify_convexity(const OperatorSpec& op,
                                        const std::vector<ConvexityTriple>& triples,
                                        const WindowConfig& cfg = {}) {
  ConvexityReport report;
  bool found = false;
  std::size_t worst = 0;
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const auto& [p, q, lambda] = triples[i];
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
      throw Error(ErrorCode::invalid_argument, "lambda must lie in [0, 1]");
    }
    if (p.dim() != q.dim()) {
      throw DimensionMismatch("triple endpoints must share dimension");
    }
    PrimalDualPair mid;
    mid.x.resize(p.dim());
    mid.x_star.resize(p.dim());
    for (std::size_t c = 0; c < p.dim(); ++c) {
      mid.x[c] = lambda * p.x[c] + (1.0 - lambda) * q.x[c];
      mid.x_star[c] = lambda * p.x_star[c] + (1.0 - lambda) * q.x_star[c];
    }
    const double fp = fitz_value(op, p, cfg);
    const double fq = fitz_value(op, q, cfg);
    const double fm = fitz_value(op, mid, cfg);
    if (!std::isfinite(fp) || !std::isfinite(fq) || !std::isfinite(fm)) {
      ++report.skipped;
      continue;
    }
    ++report.checked;
    const double slack = lambda * fp + (1.0 - lambda) * fq - fm;
    if (!found || slack < report.check.margin) {
      found = true;
      report.check.margin = slack;
      worst = i;
    }
  }
  report.check.passed = !found || report.check.margin >= -cfg.tol;
  if (!report.check.passed) {
    report.check.witness = PairWitness{triples[worst].p, triples[worst].q};
  }
  return report;
}

}  // namespace fitz
