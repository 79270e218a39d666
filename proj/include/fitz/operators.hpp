#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "fitz/expression.hpp"
#include "fitz/types.hpp"

namespace fitz {

/// An explicit finite graph {(x_i, x*_i)}; the only n-D representation.
struct FiniteGraph {
  std::vector<PrimalDualPair> points;

  std::size_t dim() const { return points.empty() ? 0 : points.front().dim(); }

  void validate() const {
    if (points.empty()) {
      throw EmptyGraph("finite graph must contain at least one point");
    }
    const std::size_t n = points.front().dim();
    for (const auto& p : points) {
      validate_pair(p, "finite graph point");
      if (p.dim() != n) {
        throw DimensionMismatch("finite graph points must share dimension");
      }
    }
  }
};

/// 1-D operator given by value sets on a strictly increasing grid.
struct Tabulated1D {
  std::vector<double> xs;
  std::vector<std::vector<double>> value_sets;

  void validate() const {
    if (xs.empty() || xs.size() != value_sets.size()) {
      throw Error(ErrorCode::invalid_argument,
                  "tabulated operator needs one value set per grid point");
    }
    for (std::size_t i = 1; i < xs.size(); ++i) {
      if (!(xs[i - 1] < xs[i])) {
        throw Error(ErrorCode::invalid_argument,
                    "tabulated grid must be strictly increasing");
      }
    }
    for (const auto& vs : value_sets) {
      if (vs.empty()) {
        throw Error(ErrorCode::invalid_argument,
                    "tabulated value sets must be non-empty");
      }
    }
  }
};

/// 1-D operator defined by an expression in x.
struct Expression1D {
  Expression expr;
};

enum class BuiltinKind {
  triangular,    // T(x) = max{1 - |x|, 0}
  normal,        // T(x) = 1 / (1 + x^2)
  unit_interval, // T(x) = [0, 1], discretized as {k/m : k = 0..m}
  identity,      // T(x) = x
  affine,        // T(x) = a*x + b
};

inline const char* to_string(BuiltinKind kind) {
  switch (kind) {
    case BuiltinKind::triangular: return "triangular";
    case BuiltinKind::normal: return "normal";
    case BuiltinKind::unit_interval: return "unit_interval";
    case BuiltinKind::identity: return "identity";
    case BuiltinKind::affine: return "affine";
  }
  return "unknown";
}

struct Builtin {
  BuiltinKind kind = BuiltinKind::identity;
  double a = 1.0;      // affine slope
  double b = 0.0;      // affine offset
  int resolution = 16; // unit_interval discretization m; endpoints always kept

  void validate() const {
    if (kind == BuiltinKind::unit_interval && resolution < 1) {
      throw Error(ErrorCode::invalid_argument,
                  "unit_interval resolution must be >= 1");
    }
  }
};

/// One operator T: R^n -> 2^{R^n} in any of the four representations.
struct OperatorSpec {
  std::variant<FiniteGraph, Tabulated1D, Expression1D, Builtin> rep;

  bool is_finite_graph() const {
    return std::holds_alternative<FiniteGraph>(rep);
  }
  bool is_tabulated() const { return std::holds_alternative<Tabulated1D>(rep); }

  const FiniteGraph& graph() const { return std::get<FiniteGraph>(rep); }

  /// Continuous representations are 1-D by construction.
  std::size_t dim() const {
    if (is_finite_graph()) return graph().dim();
    return 1;
  }
};

inline OperatorSpec make_graph_operator(std::vector<PrimalDualPair> points) {
  FiniteGraph g{std::move(points)};
  g.validate();
  return OperatorSpec{std::move(g)};
}

inline OperatorSpec make_tabulated_operator(std::vector<double> xs,
                                            std::vector<std::vector<double>> value_sets) {
  Tabulated1D t{std::move(xs), std::move(value_sets)};
  t.validate();
  return OperatorSpec{std::move(t)};
}

inline OperatorSpec make_expression_operator(const std::string& source) {
  return OperatorSpec{Expression1D{parse_expression(source)}};
}

inline OperatorSpec make_builtin_operator(BuiltinKind kind, double a = 1.0,
                                          double b = 0.0, int resolution = 16) {
  Builtin bi{kind, a, b, resolution};
  bi.validate();
  return OperatorSpec{bi};
}

namespace detail {

/// Scalar image of a 1-D representation, appended into `out` (not cleared).
/// Hot path for window scans; avoids per-sample allocations.
inline void eval_1d_into(const OperatorSpec& op, double x,
                         std::vector<double>& out) {
  if (const auto* e = std::get_if<Expression1D>(&op.rep)) {
    out.push_back(e->expr.evaluate(x));
    return;
  }
  if (const auto* b = std::get_if<Builtin>(&op.rep)) {
    switch (b->kind) {
      case BuiltinKind::triangular:
        out.push_back(std::max(1.0 - std::abs(x), 0.0));
        return;
      case BuiltinKind::normal:
        out.push_back(1.0 / (1.0 + x * x));
        return;
      case BuiltinKind::unit_interval: {
        const int m = b->resolution;
        for (int k = 0; k <= m; ++k) {
          out.push_back(static_cast<double>(k) / static_cast<double>(m));
        }
        return;
      }
      case BuiltinKind::identity:
        out.push_back(x);
        return;
      case BuiltinKind::affine:
        out.push_back(b->a * x + b->b);
        return;
    }
  }
  if (const auto* t = std::get_if<Tabulated1D>(&op.rep)) {
    // Nearest grid point within the match tolerance, else no image.
    auto it = std::lower_bound(t->xs.begin(), t->xs.end(), x);
    std::size_t best = t->xs.size();
    double best_dist = kMatchTol;
    if (it != t->xs.end() && std::abs(*it - x) <= best_dist) {
      best = static_cast<std::size_t>(it - t->xs.begin());
      best_dist = std::abs(*it - x);
    }
    if (it != t->xs.begin()) {
      const std::size_t j = static_cast<std::size_t>(it - t->xs.begin()) - 1;
      if (std::abs(t->xs[j] - x) <= best_dist) best = j;
    }
    if (best < t->xs.size()) {
      for (double v : t->value_sets[best]) out.push_back(v);
    }
    return;
  }
  throw UnsupportedKind("operator has no 1-D evaluation");
}

}  // namespace detail

/// T(x) as a finite list of image vectors; empty when x is not in D(T).
inline ValueSet evaluate_operator(const OperatorSpec& op, const Vec& x) {
  if (op.is_finite_graph()) {
    const FiniteGraph& g = op.graph();
    if (x.size() != g.dim()) {
      throw DimensionMismatch("operator expects dimension " +
                              std::to_string(g.dim()) + ", got " +
                              std::to_string(x.size()));
    }
    ValueSet out;
    for (const auto& p : g.points) {
      if (matches(p.x, x)) out.push_back(p.x_star);
    }
    return out;
  }
  if (x.size() != 1) {
    throw DimensionMismatch("continuous operators are 1-D");
  }
  std::vector<double> values;
  detail::eval_1d_into(op, x[0], values);
  ValueSet out;
  out.reserve(values.size());
  for (double v : values) out.push_back(Vec{v});
  return out;
}

/// The stored pairs of a tabulated operator as a finite graph.
inline FiniteGraph tabulated_as_graph(const Tabulated1D& t) {
  FiniteGraph g;
  for (std::size_t i = 0; i < t.xs.size(); ++i) {
    for (double v : t.value_sets[i]) g.points.push_back(pd1(t.xs[i], v));
  }
  return g;
}

/// Uniform sampling of a 1-D operator into a finite graph, taking every
/// image element at every grid point. Graph-backed representations return
/// their stored pairs unchanged.
inline FiniteGraph sample_graph_1d(const OperatorSpec& op, double radius,
                                   std::size_t count) {
  if (op.is_finite_graph()) return op.graph();
  if (op.is_tabulated()) {
    return tabulated_as_graph(std::get<Tabulated1D>(op.rep));
  }
  if (count < 2) {
    throw Error(ErrorCode::invalid_argument, "need at least 2 sample points");
  }
  FiniteGraph g;
  std::vector<double> values;
  const double step = 2.0 * radius / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const double x = -radius + static_cast<double>(i) * step;
    values.clear();
    detail::eval_1d_into(op, x, values);
    for (double v : values) g.points.push_back(pd1(x, v));
  }
  if (g.points.empty()) {
    throw EmptyGraph("operator has no image on the sample grid");
  }
  return g;
}

}  // namespace fitz
