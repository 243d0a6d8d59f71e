#ifndef OPINION_OPT_DYNAMICS_HPP
#define OPINION_OPT_DYNAMICS_HPP

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "opinion_opt/bicg.hpp"
#include "opinion_opt/error.hpp"
#include "opinion_opt/instance.hpp"
#include "opinion_opt/vector_ops.hpp"

namespace opinion_opt {

/// Equilibrium opinions z = M^{-1} Diag(alpha) s with M = I - Diag(1 - alpha) P.
struct EquilibriumResult {
  Vector z;
  double objective = 0.0;
  LinearSolveReport report;
};

struct GradientResult {
  Vector grad;
  /// Equilibrium opinions; a by-product of the second solve.
  Vector z;
  double objective = 0.0;
  /// [0]: M^T v = 1, [1]: M y = Diag(alpha) s.
  std::array<LinearSolveReport, 2> reports;
};

namespace detail {

inline void check_resistance(const Instance& inst, std::span<const double> alpha) {
  if (alpha.size() != inst.size()) throw InvalidInput("resistance vector has wrong length");
  for (double a : alpha) {
    if (!(a > 0.0)) throw InvalidInput("resistance values must be positive");
  }
}

}  // namespace detail

/// Matrix-free M = I - Diag(1 - alpha) P bound to one resistance vector.
class InteractionOperator {
 public:
  InteractionOperator(const SparseRowStochasticMatrix& P, std::span<const double> alpha)
      : P_(P), damping_(alpha.size()), scratch_(alpha.size()), diagonal_(alpha.size(), 1.0) {
    for (std::size_t i = 0; i < alpha.size(); ++i) damping_[i] = 1.0 - alpha[i];
    const auto offsets = P.row_offsets();
    const auto cols = P.col_indices();
    const auto vals = P.values();
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      for (std::size_t e = offsets[i]; e < offsets[i + 1]; ++e) {
        if (cols[e] == i) diagonal_[i] -= damping_[i] * vals[e];
      }
    }
  }

  /// y = M x
  void apply(std::span<const double> x, std::span<double> y) const {
    P_.multiply(x, y);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] - damping_[i] * y[i];
  }

  /// y = M^T x
  void apply_transpose(std::span<const double> x, std::span<double> y) const {
    for (std::size_t i = 0; i < x.size(); ++i) scratch_[i] = damping_[i] * x[i];
    P_.multiply_transpose(scratch_, y);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] - y[i];
  }

  std::span<const double> diagonal() const { return diagonal_; }

  LinearSolveReport solve(std::span<const double> rhs, std::span<double> x,
                          const LinearSolverOptions& options) const {
    return bicg_solve([this](auto in, auto out) { apply(in, out); },
                      [this](auto in, auto out) { apply_transpose(in, out); }, rhs, x, options, diagonal_);
  }

  LinearSolveReport solve_transpose(std::span<const double> rhs, std::span<double> x,
                                    const LinearSolverOptions& options) const {
    return bicg_solve([this](auto in, auto out) { apply_transpose(in, out); },
                      [this](auto in, auto out) { apply(in, out); }, rhs, x, options, diagonal_);
  }

 private:
  const SparseRowStochasticMatrix& P_;
  std::vector<double> damping_;
  // per-operator scratch; an operator is never shared between threads
  mutable std::vector<double> scratch_;
  std::vector<double> diagonal_;
};

/// Runs t_max steps of z <- Diag(alpha) s + Diag(1 - alpha) P z from z = s.
inline Vector simulate_dynamics(const Instance& inst, std::span<const double> alpha, std::size_t t_max) {
  detail::check_resistance(inst, alpha);
  const std::size_t n = inst.size();
  Vector z = inst.s, pz(n), anchor(n);
  for (std::size_t i = 0; i < n; ++i) anchor[i] = alpha[i] * inst.s[i];
  for (std::size_t t = 0; t < t_max; ++t) {
    inst.P.multiply(z, pz);
    for (std::size_t i = 0; i < n; ++i) z[i] = anchor[i] + (1.0 - alpha[i]) * pz[i];
  }
  return z;
}

inline EquilibriumResult equilibrium(const Instance& inst, std::span<const double> alpha,
                                     const LinearSolverOptions& options = {}) {
  detail::check_resistance(inst, alpha);
  const std::size_t n = inst.size();
  const InteractionOperator M(inst.P, alpha);
  Vector rhs(n);
  for (std::size_t i = 0; i < n; ++i) rhs[i] = alpha[i] * inst.s[i];
  EquilibriumResult out;
  out.z.assign(n, 0.0);
  out.report = M.solve(rhs, out.z, options);
  out.objective = sum(out.z);
  return out;
}

/// f(alpha) = sum of equilibrium opinions.
inline double objective(const Instance& inst, std::span<const double> alpha,
                        const LinearSolverOptions& options = {}) {
  return equilibrium(inst, alpha, options).objective;
}

/// grad f(alpha) = Diag(M^{-T} 1) (s - P M^{-1} Diag(alpha) s), from two sparse solves.
inline GradientResult gradient(const Instance& inst, std::span<const double> alpha,
                               const LinearSolverOptions& options = {}) {
  detail::check_resistance(inst, alpha);
  const std::size_t n = inst.size();
  const InteractionOperator M(inst.P, alpha);
  GradientResult out;

  const Vector ones(n, 1.0);
  Vector v(n, 0.0);
  out.reports[0] = M.solve_transpose(ones, v, options);

  Vector rhs(n);
  for (std::size_t i = 0; i < n; ++i) rhs[i] = alpha[i] * inst.s[i];
  out.z.assign(n, 0.0);
  out.reports[1] = M.solve(rhs, out.z, options);
  out.objective = sum(out.z);

  Vector pz(n);
  inst.P.multiply(out.z, pz);
  out.grad.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.grad[i] = v[i] * (inst.s[i] - pz[i]);
  return out;
}

}  // namespace opinion_opt

#endif  // OPINION_OPT_DYNAMICS_HPP
