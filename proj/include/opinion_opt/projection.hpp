#ifndef OPINION_OPT_PROJECTION_HPP
#define OPINION_OPT_PROJECTION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>

#include "opinion_opt/error.hpp"
#include "opinion_opt/instance.hpp"
#include "opinion_opt/vector_ops.hpp"

namespace opinion_opt {

/// Budget slack allowed by the feasibility test inside the bisection.
inline constexpr double kBisectionTolerance = 1e-12;

inline constexpr int kDefaultBisectionDepth = 200;

/// Elementwise clamp onto [l, u].
inline Vector project_box(std::span<const double> alpha, std::span<const double> lower,
                          std::span<const double> upper) {
  Vector out(alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) out[i] = std::clamp(alpha[i], lower[i], upper[i]);
  return out;
}

/// Penalty g1(alpha) = ||alpha - alpha_init||_p^p.
inline double penalty_g1(std::span<const double> alpha, const FeasibleRegion& region) {
  const double d = distance(alpha, region.alpha_init, region.p);
  return region.p == NormOrder::L1 ? d : d * d;
}

/// prox_{lambda g1}: soft thresholding towards alpha_init (p = 1) or shrinkage (p = 2).
inline Vector prox_g1(std::span<const double> alpha, double lambda, const FeasibleRegion& region) {
  if (!(lambda >= 0.0)) throw InvalidInput("prox parameter lambda must be >= 0");
  if (lambda == 0.0) return Vector(alpha.begin(), alpha.end());
  const auto init = region.alpha_init;
  Vector out(alpha.size());
  switch (region.p) {
    case NormOrder::L1:
      for (std::size_t i = 0; i < alpha.size(); ++i) {
        out[i] = alpha[i] >= init[i] ? std::max(alpha[i] - lambda, init[i]) : std::min(alpha[i] + lambda, init[i]);
      }
      return out;
    case NormOrder::L2:
      for (std::size_t i = 0; i < alpha.size(); ++i) out[i] = init[i] + (alpha[i] - init[i]) / (2.0 * lambda + 1.0);
      return out;
  }
  throw InvalidInput("unsupported norm order");
}

/// An upper bound on the smallest lambda for which the prox point is feasible.
///
/// p = 1: prox_{lambda g1}(alpha) = alpha_init at lambda = ||alpha - alpha_init||_inf.
/// p = 2: the shrinkage lands exactly on the radius-k sphere at
///        lambda = (||alpha - alpha_init||_2 / k - 1) / 2. Requires k > 0.
inline double lambda_upper_bound(std::span<const double> alpha, const FeasibleRegion& region) {
  if (region.p == NormOrder::L1) {
    double m = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) m = std::max(m, std::abs(alpha[i] - region.alpha_init[i]));
    return m;
  }
  const double d = distance(alpha, region.alpha_init, NormOrder::L2);
  if (d == 0.0) return 0.0;
  if (!(region.budget > 0.0)) throw InvalidInput("p=2 lambda bound needs k > 0");
  return std::max(0.0, (d / region.budget - 1.0) / 2.0);
}

/// Euclidean projection onto C = box cap l_p ball, via bisection on the
/// prox parameter. The returned point is feasible by construction (it is the
/// prox point at the feasible end of the bracket) and lies within O(2^-depth)
/// of the exact projection.
inline Vector project(std::span<const double> alpha, const FeasibleRegion& region,
                      int depth = kDefaultBisectionDepth) {
  if (!(region.budget >= 0.0)) throw InvalidInput("budget k must be >= 0");
  if (depth < 1) throw InvalidInput("bisection depth must be >= 1");
  if (alpha.size() != region.size()) throw InvalidInput("vector length does not match the region");
  if (region.budget == 0.0) return Vector(region.alpha_init.begin(), region.alpha_init.end());

  auto feasible = [&](const Vector& candidate) {
    return region.budget_used(candidate) <= region.budget + kBisectionTolerance;
  };

  Vector boxed = project_box(alpha, region.lower, region.upper);
  if (feasible(boxed)) return boxed;

  double left = 0.0;
  double right = lambda_upper_bound(alpha, region);
  Vector at_right = project_box(prox_g1(alpha, right, region), region.lower, region.upper);
  if (!feasible(at_right)) throw InternalError("bound violated: prox at the lambda upper bound is infeasible");

  for (int t = 0; t < depth; ++t) {
    const double mid = 0.5 * (left + right);
    if (mid <= left || mid >= right) break;  // bracket exhausted in floating point
    Vector candidate = project_box(prox_g1(alpha, mid, region), region.lower, region.upper);
    if (feasible(candidate)) {
      right = mid;
      at_right = std::move(candidate);
    } else {
      left = mid;
    }
  }
  return at_right;
}

inline Vector project(std::span<const double> alpha, const Instance& inst, int depth = kDefaultBisectionDepth) {
  return project(alpha, inst.region(), depth);
}

}  // namespace opinion_opt

#endif  // OPINION_OPT_PROJECTION_HPP
