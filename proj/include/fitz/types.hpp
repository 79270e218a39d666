#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "fitz/errors.hpp"

namespace fitz {

using Vec = std::vector<double>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Absolute tolerance for exact-match lookups in graphs and tables.
inline constexpr double kMatchTol = 1e-12;

inline bool all_finite(const Vec& v) {
  for (double c : v) {
    if (!std::isfinite(c)) return false;
  }
  return true;
}

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vec& a) {
  double s = 0.0;
  for (double c : a) s += c * c;
  return std::sqrt(s);
}

inline double distance(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline double max_abs_diff(const Vec& a, const Vec& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a[i] - b[i]));
  }
  return m;
}

/// Componentwise match within kMatchTol; vectors must have equal length.
inline bool matches(const Vec& a, const Vec& b, double tol = kMatchTol) {
  if (a.size() != b.size()) return false;
  return max_abs_diff(a, b) <= tol;
}

/// A point (x, x*) of X x X* with the Euclidean pairing.
struct PrimalDualPair {
  Vec x;
  Vec x_star;

  std::size_t dim() const { return x.size(); }
};

inline PrimalDualPair pd1(double x, double x_star) {
  return PrimalDualPair{{x}, {x_star}};
}

inline bool pairs_match(const PrimalDualPair& a, const PrimalDualPair& b,
                        double tol = kMatchTol) {
  return matches(a.x, b.x, tol) && matches(a.x_star, b.x_star, tol);
}

inline void validate_pair(const PrimalDualPair& p,
                          const std::string& context) {
  if (p.x.empty() || p.x.size() != p.x_star.size()) {
    throw DimensionMismatch(context + ": x and x* must share dimension >= 1");
  }
  if (!all_finite(p.x) || !all_finite(p.x_star)) {
    throw Error(ErrorCode::invalid_argument,
                context + ": components must be finite");
  }
}

/// Image T(x); empty exactly when x is outside the domain.
using ValueSet = std::vector<Vec>;

}  // namespace fitz
