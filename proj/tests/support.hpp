#pragma once

// Test-only oracles and generators. These stay independent of the library's
// evaluation paths: plain loops, plain arithmetic.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "fitz/operators.hpp"
#include "fitz/types.hpp"

namespace testsupport {

/// Brute-force sup of x*.y + T(y).x - T(y).y over a uniform grid, for a
/// single-valued 1-D callable.
inline double oracle_sup_1d(const std::function<double(double)>& T, double x,
                            double xstar, double lo, double hi, int n) {
  double best = -fitz::kInfinity;
  const double step = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) {
    const double y = lo + i * step;
    const double ys = T(y);
    const double t = xstar * y + ys * x - ys * y;
    if (t > best) best = t;
  }
  return best;
}

/// Direct evaluation of the smallest feasible constant at x over the graph.
inline double oracle_sigma_t(const fitz::Vec& x, const fitz::FiniteGraph& g) {
  double best = 0.0;
  for (const auto& xp : g.points) {
    if (!fitz::matches(xp.x, x)) continue;
    for (const auto& q : g.points) {
      if (fitz::matches(q.x, x)) continue;
      double inner = 0.0;
      double dist2 = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = xp.x[i] - q.x[i];
        inner += (xp.x_star[i] - q.x_star[i]) * dx;
        dist2 += dx * dx;
      }
      const double ratio = -inner / std::sqrt(dist2);
      if (ratio > best) best = ratio;
    }
  }
  return best;
}

/// Plain bisection to a bracket width.
inline double oracle_bisect(const std::function<double(double)>& g, double a,
                            double b, double width) {
  double ga = g(a);
  for (int i = 0; i < 200 && b - a > width; ++i) {
    const double mid = 0.5 * (a + b);
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((ga < 0.0) != (gm < 0.0)) {
      b = mid;
    } else {
      a = mid;
      ga = gm;
    }
  }
  return 0.5 * (a + b);
}

inline fitz::FiniteGraph random_graph(std::mt19937_64& rng, std::size_t dim,
                                      std::size_t count, double box = 5.0) {
  std::uniform_real_distribution<double> coord(-box, box);
  fitz::FiniteGraph g;
  for (std::size_t i = 0; i < count; ++i) {
    fitz::PrimalDualPair p;
    p.x.resize(dim);
    p.x_star.resize(dim);
    for (auto& c : p.x) c = coord(rng);
    for (auto& c : p.x_star) c = coord(rng);
    g.points.push_back(std::move(p));
  }
  return g;
}

/// 1-D graph sampled from a random nondecreasing step profile; such graphs
/// are monotone exactly (products of same-signed differences).
inline fitz::FiniteGraph random_monotone_graph(std::mt19937_64& rng,
                                               std::size_t count) {
  std::uniform_real_distribution<double> gap(0.0, 1.0);
  fitz::FiniteGraph g;
  double x = -3.0, y = -2.0;
  for (std::size_t i = 0; i < count; ++i) {
    x += 0.05 + gap(rng);
    y += gap(rng);
    g.points.push_back(fitz::pd1(x, y));
  }
  return g;
}

inline fitz::PrimalDualPair random_pair(std::mt19937_64& rng, std::size_t dim,
                                        double box = 5.0) {
  std::uniform_real_distribution<double> coord(-box, box);
  fitz::PrimalDualPair p;
  p.x.resize(dim);
  p.x_star.resize(dim);
  for (auto& c : p.x) c = coord(rng);
  for (auto& c : p.x_star) c = coord(rng);
  return p;
}

}  // namespace testsupport
