#pragma once

#include <cstddef>
#include <vector>

#include "fitz/operators.hpp"
#include "fitz/report.hpp"
#include "fitz/sigma.hpp"

namespace fitz {

inline constexpr double kDefaultCheckTol = 1e-9;

namespace detail {

/// Slack of the defining inequality for one pair of graph points:
///   <x* - y*, x - y> + min{sigma(x), sigma(y)} * ||x - y||.
/// Nonnegative slack means the inequality holds for that pair.
inline double pair_slack(const PrimalDualPair& a, double sigma_a,
                         const PrimalDualPair& b, double sigma_b) {
  double inner = 0.0;
  double dist2 = 0.0;
  for (std::size_t i = 0; i < a.x.size(); ++i) {
    const double dx = a.x[i] - b.x[i];
    inner += (a.x_star[i] - b.x_star[i]) * dx;
    dist2 += dx * dx;
  }
  return inner + std::min(sigma_a, sigma_b) * std::sqrt(dist2);
}

inline std::vector<double> sigma_on_domain(const FiniteGraph& graph,
                                           const SigmaSpec& sigma) {
  std::vector<double> out;
  out.reserve(graph.points.size());
  for (const auto& p : graph.points) out.push_back(sigma_value(sigma, p.x));
  return out;
}

}  // namespace detail

/// Scans all distinct pairs of the graph against the sigma-monotonicity
/// inequality. Pairs with coinciding primal points are vacuous (both sides
/// zero) and are skipped. Enumeration is index-lexicographic; the first
/// minimizing pair becomes the witness on failure.
inline CheckReport check_sigma_monotone(const FiniteGraph& graph,
                                        const SigmaSpec& sigma,
                                        double tol = kDefaultCheckTol) {
  graph.validate();
  const std::vector<double> sig = detail::sigma_on_domain(graph, sigma);

  CheckReport report;
  bool found = false;
  std::size_t wi = 0, wj = 0;
  for (std::size_t i = 0; i < graph.points.size(); ++i) {
    for (std::size_t j = i + 1; j < graph.points.size(); ++j) {
      if (matches(graph.points[i].x, graph.points[j].x)) continue;
      const double slack =
          detail::pair_slack(graph.points[i], sig[i], graph.points[j], sig[j]);
      if (!found || slack < report.margin) {
        found = true;
        report.margin = slack;
        wi = i;
        wj = j;
      }
    }
  }
  report.passed = !found || report.margin >= -tol;
  if (!report.passed) {
    report.witness = PairWitness{graph.points[wi], graph.points[wj]};
  }
  return report;
}

/// Tests whether `candidate` is sigma-monotonically related to every pair of
/// `graph`. `sigma_ext` must cover the graph domain and the candidate point.
inline CheckReport is_sigma_related(const PrimalDualPair& candidate,
                                    const FiniteGraph& graph,
                                    const SigmaSpec& sigma_ext,
                                    double tol = kDefaultCheckTol) {
  graph.validate();
  validate_pair(candidate, "candidate");
  if (candidate.dim() != graph.dim()) {
    throw DimensionMismatch("candidate dimension does not match graph");
  }
  const double sigma_c = sigma_value(sigma_ext, candidate.x);

  CheckReport report;
  bool found = false;
  std::size_t wj = 0;
  for (std::size_t j = 0; j < graph.points.size(); ++j) {
    if (matches(candidate.x, graph.points[j].x)) continue;  // vacuous
    const double sigma_j = sigma_value(sigma_ext, graph.points[j].x);
    const double slack =
        detail::pair_slack(candidate, sigma_c, graph.points[j], sigma_j);
    if (!found || slack < report.margin) {
      found = true;
      report.margin = slack;
      wj = j;
    }
  }
  report.passed = !found || report.margin >= -tol;
  if (!report.passed) {
    report.witness = PairWitness{candidate, graph.points[wj]};
  }
  return report;
}

/// Smallest constant a >= 0 such that <x* - y*, x - y> >= -a ||x - y|| holds
/// at x against the whole graph, maximized over x* in T(x). Pairs with y = x
/// contribute nothing and are skipped; a single-point graph yields 0.
inline double estimate_sigma_T(const Vec& x, const FiniteGraph& graph) {
  graph.validate();
  if (x.size() != graph.dim()) {
    throw DimensionMismatch("point dimension does not match graph");
  }
  std::vector<const PrimalDualPair*> images;
  for (const auto& p : graph.points) {
    if (matches(p.x, x)) images.push_back(&p);
  }
  if (images.empty()) {
    throw NotInDomain("x is not a domain point of the graph");
  }
  double best = 0.0;
  for (const PrimalDualPair* xp : images) {
    for (const auto& q : graph.points) {
      if (matches(q.x, x)) continue;
      double inner = 0.0;
      double dist2 = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = xp->x[i] - q.x[i];
        inner += (xp->x_star[i] - q.x_star[i]) * dx;
        dist2 += dx * dx;
      }
      const double ratio = -inner / std::sqrt(dist2);
      if (ratio > best) best = ratio;
    }
  }
  return best;
}

/// Searches the candidate list for a point outside the graph that is
/// sigma-related to all of it under the extension sigma'(x0) = given value.
/// passed = false means maximality is refuted by the witness candidate;
/// passed = true only means no refutation was found among the candidates.
inline CheckReport refute_maximality(
    const FiniteGraph& graph, const SigmaSpec& sigma,
    const std::vector<PrimalDualPair>& candidates,
    const std::vector<double>& sigma_candidate_values,
    double tol = kDefaultCheckTol) {
  if (candidates.size() != sigma_candidate_values.size()) {
    throw Error(ErrorCode::invalid_argument,
                "need one sigma value per candidate");
  }
  const CheckReport base = check_sigma_monotone(graph, sigma, tol);
  if (!base.passed) {
    throw Error(ErrorCode::invalid_argument,
                "graph is not sigma-monotone; refutation is meaningless");
  }

  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const PrimalDualPair& cand = candidates[k];
    validate_pair(cand, "candidate");
    const double sigma_c = sigma_candidate_values[k];
    if (!(sigma_c >= 0.0)) {
      throw NegativeSigma("candidate sigma values must be >= 0");
    }
    bool on_graph = false;
    for (const auto& p : graph.points) {
      if (pairs_match(p, cand)) {
        on_graph = true;
        break;
      }
    }
    if (on_graph) continue;

    double worst = kInfinity;
    bool related = true;
    for (const auto& q : graph.points) {
      if (matches(cand.x, q.x)) continue;
      const double slack = detail::pair_slack(
          cand, sigma_c, q, sigma_value(sigma, q.x));
      worst = std::min(worst, slack);
      if (slack < -tol) {
        related = false;
        break;
      }
    }
    if (related) {
      CheckReport report;
      report.passed = false;
      report.witness = PairWitness{cand, cand};
      // Strength of the refutation: how comfortably the candidate relates.
      report.margin = std::min(0.0, -worst);
      return report;
    }
  }
  return CheckReport{};  // not refuted; margin stays at the +inf sentinel
}

}  // namespace fitz
