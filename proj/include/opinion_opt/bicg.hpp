#ifndef OPINION_OPT_BICG_HPP
#define OPINION_OPT_BICG_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "opinion_opt/error.hpp"
#include "opinion_opt/vector_ops.hpp"

namespace opinion_opt {

struct LinearSolveReport {
  std::size_t iterations = 0;
  double final_relative_residual = 0.0;
  bool converged = false;
  int restarts = 0;
};

struct LinearSolverOptions {
  double tolerance = 1e-10;
  /// 0 means 10 * n.
  std::size_t max_iterations = 0;
  bool jacobi = false;
};

/// Raised when an iterative solve fails; carries the solver statistics.
class SolveError : public Error {
 public:
  SolveError(const std::string& what, LinearSolveReport report) : Error(what), report_(report) {}
  const LinearSolveReport& report() const { return report_; }

 private:
  LinearSolveReport report_;
};

/// Biconjugate gradient for a general square system A x = b, started from x = 0.
///
/// `apply(x, y)` computes y = A x, `apply_t(x, y)` computes y = A^T x.
/// `diagonal` (may be empty) enables Jacobi preconditioning when
/// options.jacobi is set. Convergence is declared on the true residual
/// ||b - A x|| / ||b|| <= tolerance. A breakdown restarts once from the
/// current iterate with a perturbed shadow residual; a second breakdown or
/// running out of iterations throws SolveError.
template <class Apply, class ApplyTranspose>
LinearSolveReport bicg_solve(const Apply& apply, const ApplyTranspose& apply_t, std::span<const double> b,
                             std::span<double> x, const LinearSolverOptions& options,
                             std::span<const double> diagonal = {}) {
  const std::size_t n = b.size();
  const std::size_t max_iter = options.max_iterations > 0 ? options.max_iterations : 10 * n;
  LinearSolveReport report;
  std::fill(x.begin(), x.end(), 0.0);

  const double b_norm = norm2(b);
  if (b_norm == 0.0) {
    report.converged = true;
    return report;
  }

  const bool precondition = options.jacobi && diagonal.size() == n;
  auto precond = [&](std::span<const double> in, std::span<double> out) {
    if (precondition) {
      for (std::size_t i = 0; i < n; ++i) out[i] = in[i] / diagonal[i];
    } else {
      std::copy(in.begin(), in.end(), out.begin());
    }
  };

  std::vector<double> r(b.begin(), b.end()), rt(n), z(n), zt(n), p(n), pt(n), q(n), qt(n);
  rt = r;

  auto true_residual = [&]() {
    apply(std::span<const double>(x), std::span<double>(q));
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];
    return norm2(r) / b_norm;
  };

  // relative size below which a BiCG inner product counts as a breakdown
  constexpr double kBreakdown = 1e-30;
  int breakdowns = 0;
  bool fresh = true;
  double rho_prev = 0.0;

  auto restart = [&](bool perturb) {
    fresh = true;
    rt = r;
    if (perturb) {
      for (std::size_t i = 0; i < n; ++i) rt[i] *= 1.0 + 0.5 * std::sin(static_cast<double>(i) + 1.0);
    }
  };

  while (report.iterations < max_iter) {
    precond(r, z);
    precond(rt, zt);
    const double rho = dot(z, rt);
    if (!(std::abs(rho) > kBreakdown * norm2(z) * norm2(rt))) {
      if (++breakdowns > 1) {
        report.final_relative_residual = true_residual();
        throw SolveError("BiCG breakdown (rho = 0) after restart", report);
      }
      ++report.restarts;
      restart(true);
      continue;
    }
    if (fresh) {
      p = z;
      pt = zt;
      fresh = false;
    } else {
      const double beta = rho / rho_prev;
      for (std::size_t i = 0; i < n; ++i) {
        p[i] = z[i] + beta * p[i];
        pt[i] = zt[i] + beta * pt[i];
      }
    }
    apply(std::span<const double>(p), std::span<double>(q));
    apply_t(std::span<const double>(pt), std::span<double>(qt));
    const double denom = dot(pt, q);
    if (!(std::abs(denom) > kBreakdown * norm2(pt) * norm2(q)) || !std::isfinite(denom)) {
      if (++breakdowns > 1) {
        report.final_relative_residual = true_residual();
        throw SolveError("BiCG breakdown (p~.Ap = 0) after restart", report);
      }
      ++report.restarts;
      true_residual();
      restart(true);
      continue;
    }
    const double step = rho / denom;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += step * p[i];
      r[i] -= step * q[i];
      rt[i] -= step * qt[i];
    }
    rho_prev = rho;
    ++report.iterations;

    if (norm2(r) / b_norm <= options.tolerance) {
      const double actual = true_residual();
      if (actual <= options.tolerance) {
        report.final_relative_residual = actual;
        report.converged = true;
        return report;
      }
      // recursive residual drifted from the true one: continue from the true residual
      restart(false);
    }
  }
  report.final_relative_residual = true_residual();
  throw SolveError("BiCG did not converge in " + std::to_string(max_iter) + " iterations (residual " +
                       std::to_string(report.final_relative_residual) + ")",
                   report);
}

}  // namespace opinion_opt

#endif  // OPINION_OPT_BICG_HPP
