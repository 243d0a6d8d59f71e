#ifndef OPINION_OPT_DENSE_HPP
#define OPINION_OPT_DENSE_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>

#include <Eigen/Dense>

#include "opinion_opt/dynamics.hpp"
#include "opinion_opt/error.hpp"
#include "opinion_opt/instance.hpp"
#include "opinion_opt/rng.hpp"

namespace opinion_opt {

/// Largest agent count accepted by the dense diagnostics.
inline constexpr std::size_t kDenseThreshold = 500;

inline Eigen::MatrixXd dense_interaction_matrix(const SparseRowStochasticMatrix& P) {
  const auto n = static_cast<Eigen::Index>(P.size());
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
  const auto offsets = P.row_offsets();
  const auto cols = P.col_indices();
  const auto vals = P.values();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (std::size_t e = offsets[i]; e < offsets[i + 1]; ++e) dense(i, cols[e]) += vals[e];
  }
  return dense;
}

/// M = I - Diag(1 - alpha) P as a dense matrix.
inline Eigen::MatrixXd dense_system_matrix(const Instance& inst, std::span<const double> alpha) {
  Eigen::MatrixXd M = -dense_interaction_matrix(inst.P);
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    M.row(i) *= 1.0 - alpha[i];
    M(i, i) += 1.0;
  }
  return M;
}

/// Exact (LU) equilibrium; reference path for small instances.
inline Eigen::VectorXd dense_equilibrium(const Instance& inst, std::span<const double> alpha) {
  const auto n = static_cast<Eigen::Index>(inst.size());
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) rhs(i) = alpha[i] * inst.s[i];
  return dense_system_matrix(inst, alpha).partialPivLu().solve(rhs);
}

/// Hessian of f: H = -A - A^T with A = Diag(v) P M^{-1} Diag(s - P z), v = M^{-T} 1.
inline Eigen::MatrixXd hessian_dense(const Instance& inst, std::span<const double> alpha,
                                     std::size_t threshold = kDenseThreshold) {
  detail::check_resistance(inst, alpha);
  const std::size_t n = inst.size();
  if (n > threshold) throw InvalidInput("dense-only diagnostic: n=" + std::to_string(n) + " exceeds threshold");
  const auto N = static_cast<Eigen::Index>(n);

  const Eigen::MatrixXd P = dense_interaction_matrix(inst.P);
  const Eigen::MatrixXd M_inv = dense_system_matrix(inst, alpha).partialPivLu().inverse();
  Eigen::VectorXd weighted(N);
  const Eigen::Map<const Eigen::VectorXd> s(inst.s.data(), N);
  for (Eigen::Index i = 0; i < N; ++i) weighted(i) = alpha[i] * inst.s[i];
  const Eigen::VectorXd z = M_inv * weighted;
  const Eigen::VectorXd v = M_inv.transpose() * Eigen::VectorXd::Ones(N);
  const Eigen::VectorXd residual = s - P * z;

  const Eigen::MatrixXd A = v.asDiagonal() * (P * M_inv) * residual.asDiagonal();
  Eigen::MatrixXd H = -(A + A.transpose());
  return H;
}

/// Spectral norm of a symmetric matrix by power iteration (a lower estimate).
inline double spectral_norm_power(const Eigen::MatrixXd& H, int steps = 100) {
  const Eigen::Index n = H.rows();
  if (n == 0) return 0.0;
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = 1.0 + 0.1 * std::sin(static_cast<double>(i) + 1.0);
  x.normalize();
  double estimate = 0.0;
  for (int k = 0; k < steps; ++k) {
    Eigen::VectorXd y = H * x;
    estimate = y.norm();
    if (estimate == 0.0) return 0.0;
    x = y / estimate;
  }
  return estimate;
}

/// Empirical lower estimate of the Lipschitz constant of grad f over [l, u].
///
/// The first sample is alpha_init; the remaining sample_count - 1 points are
/// drawn uniformly from [l, u] with a fixed stream, so a larger sample_count
/// evaluates a superset of the points of a smaller one.
inline double estimate_lipschitz(const Instance& inst, std::size_t sample_count, std::uint64_t seed = 0,
                                 std::size_t threshold = kDenseThreshold) {
  if (sample_count == 0) throw InvalidInput("needs at least one sample");
  if (inst.size() > threshold) throw InvalidInput("dense-only diagnostic: instance too large");
  double best = spectral_norm_power(hessian_dense(inst, inst.alpha_init, threshold));
  Rng rng(seed, streams::kSynthetic + 1);
  Vector alpha(inst.size());
  for (std::size_t sample = 1; sample < sample_count; ++sample) {
    for (std::size_t i = 0; i < alpha.size(); ++i) alpha[i] = rng.uniform(inst.lower[i], inst.upper[i]);
    best = std::max(best, spectral_norm_power(hessian_dense(inst, alpha, threshold)));
  }
  return best;
}

}  // namespace opinion_opt

#endif  // OPINION_OPT_DENSE_HPP
