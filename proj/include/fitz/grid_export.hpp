#pragma once

#include <charconv>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "fitz/fitzpatrick.hpp"
#include "fitz/operators.hpp"

namespace fitz {

namespace detail {

inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

inline std::vector<double> axis_points(double lo, double hi, int steps) {
  if (!(std::isfinite(lo) && std::isfinite(hi)) || hi < lo) {
    throw Error(ErrorCode::invalid_argument, "grid range must be finite with lo <= hi");
  }
  if (lo == hi) return {lo};
  if (steps < 2) {
    throw Error(ErrorCode::invalid_argument, "grid needs steps >= 2");
  }
  std::vector<double> pts;
  const double step = (hi - lo) / static_cast<double>(steps - 1);
  for (int i = 0; i < steps; ++i) {
    pts.push_back(lo + static_cast<double>(i) * step);
  }
  return pts;
}

}  // namespace detail

/// Writes the evaluation grid as CSV with header
/// `x,xstar,F,status,witness_y,witness_ystar`, x outer and x* inner.
/// Divergent entries carry the literal "inf" and empty witness columns.
inline void export_grid(const OperatorSpec& op, double x_lo, double x_hi,
                        double xstar_lo, double xstar_hi, int steps,
                        std::ostream& out, const WindowConfig& cfg = {}) {
  if (op.dim() != 1) {
    throw UnsupportedKind("grid export is 1-D");
  }
  const std::vector<double> xs = detail::axis_points(x_lo, x_hi, steps);
  const std::vector<double> ss = detail::axis_points(xstar_lo, xstar_hi, steps);

  out << "x,xstar,F,status,witness_y,witness_ystar\n";
  for (double x : xs) {
    for (double s : ss) {
      const PrimalDualPair p = pd1(x, s);
      const FitzValue v = op.is_finite_graph()
                              ? fitz_exact_finite(op.graph(), p)
                              : fitz_sampled(op, p, cfg);
      out << detail::format_double(x) << ',' << detail::format_double(s) << ',';
      if (v.finite()) {
        out << detail::format_double(v.value) << ",finite,"
            << detail::format_double(v.witness.x[0]) << ','
            << detail::format_double(v.witness.x_star[0]);
      } else {
        out << "inf,divergent,,";
      }
      out << '\n';
    }
  }
}

}  // namespace fitz
