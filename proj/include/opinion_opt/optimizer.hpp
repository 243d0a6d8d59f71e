#ifndef OPINION_OPT_OPTIMIZER_HPP
#define OPINION_OPT_OPTIMIZER_HPP

#include <chrono>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "opinion_opt/dynamics.hpp"
#include "opinion_opt/error.hpp"
#include "opinion_opt/instance.hpp"
#include "opinion_opt/instance_io.hpp"
#include "opinion_opt/projection.hpp"

namespace opinion_opt {

enum class StopMode {
  /// ||alpha^t - alpha^{t-1}||_2 <= eta * epsilon, i.e. ||G_eta(alpha^{t-1})|| <= epsilon.
  GradientMapping,
  /// (f(alpha^{t-1}) - f(alpha^t)) / f(alpha^{t-1}) <= relative_threshold.
  RelativeObjective,
};

struct SolverOptions {
  double eta0 = 1.0;
  double gamma = 0.5;
  double gamma_inc = 1.25;
  double epsilon = 1e-6;
  int bisect_T = kDefaultBisectionDepth;
  StopMode stop_mode = StopMode::RelativeObjective;
  double relative_threshold = 1e-3;
  std::size_t max_iters = 100000;
  double time_limit = std::numeric_limits<double>::infinity();
  /// Backtracking shrinks allowed within one outer iteration.
  int max_backtracks = 200;
  LinearSolverOptions linear;

  void validate() const {
    if (!(eta0 > 0.0)) throw InvalidInput("eta0 must be > 0");
    if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidInput("gamma must lie in (0,1)");
    if (!(gamma_inc >= 1.0)) throw InvalidInput("gamma_inc must be >= 1");
    if (!(epsilon >= 0.0)) throw InvalidInput("epsilon must be >= 0");
    if (!(relative_threshold >= 0.0)) throw InvalidInput("relative threshold must be >= 0");
    if (bisect_T < 1) throw InvalidInput("bisection depth must be >= 1");
    if (!(time_limit > 0.0)) throw InvalidInput("time limit must be > 0");
  }
};

/// One accepted outer iteration.
struct TraceRow {
  std::size_t iter = 0;
  double objective = 0.0;
  /// Stepsize at which the step was accepted.
  double eta = 0.0;
  int backtracks = 0;
  /// ||G_eta(alpha^{t-1})||_2 = ||alpha^t - alpha^{t-1}||_2 / eta.
  double grad_map_norm = 0.0;
  /// k - ||alpha^t - alpha_init||_p
  double slack = 0.0;
  double seconds = 0.0;
  /// f(alpha^{t-1}) and ||alpha^t - alpha^{t-1}||_2^2 exactly as used by the acceptance test.
  double previous_objective = 0.0;
  double step_norm_sq = 0.0;
};

struct RunTrace {
  double initial_objective = 0.0;
  std::vector<TraceRow> rows;
};

enum class RunStatus { Converged, MaxIterations, TimeLimit };

inline const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return "ok";
    case RunStatus::MaxIterations: return "max_iters";
    case RunStatus::TimeLimit: return "timeout";
  }
  return "?";
}

struct MinimizeResult {
  ResistanceVector alpha;
  double objective = 0.0;
  RunTrace trace;
  RunStatus status = RunStatus::Converged;
};

/// Called with every accepted iterate alpha^t.
using IterateObserver = std::function<void(std::size_t iter, std::span<const double> alpha)>;

inline void write_trace_csv(std::ostream& out, const RunTrace& trace) {
  out << "iter,objective,eta,backtracks,grad_map_norm,slack,seconds\n";
  for (const auto& r : trace.rows) {
    out << r.iter << ',' << format_double(r.objective) << ',' << format_double(r.eta) << ',' << r.backtracks
        << ',' << format_double(r.grad_map_norm) << ',' << format_double(r.slack) << ','
        << format_double(r.seconds) << '\n';
  }
}

/// ||(alpha - project(alpha - eta grad f(alpha))) / eta||_2
inline double gradient_mapping_norm(std::span<const double> alpha, double eta, const Instance& inst,
                                    const SolverOptions& options = {}) {
  if (!(eta > 0.0)) throw InvalidInput("eta must be > 0");
  const auto g = gradient(inst, alpha, options.linear);
  Vector trial(alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) trial[i] = alpha[i] - eta * g.grad[i];
  const Vector next = project(trial, inst, options.bisect_T);
  return distance_l2(alpha, next) / eta;
}

/// Projected gradient method with backtracking on the stepsize.
///
/// Each outer iteration takes alpha^t = proj_C(alpha^{t-1} - eta grad f(alpha^{t-1}))
/// and halves (gamma) eta until f(alpha^t) <= f(alpha^{t-1}) - ||alpha^t - alpha^{t-1}||^2 / (2 eta).
/// After the stop test, eta grows by gamma_inc. In GradientMapping mode the
/// returned point is alpha^{t-1}; otherwise the last accepted iterate.
inline MinimizeResult minimize(const Instance& inst, std::span<const double> alpha0, const SolverOptions& options = {},
                               const IterateObserver& observer = {}) {
  options.validate();
  const auto region = inst.region();
  if (!region.contains(alpha0)) throw InvalidInput("starting point is infeasible");

  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

  const std::size_t n = inst.size();
  MinimizeResult result;
  Vector current(alpha0.begin(), alpha0.end());
  double f_current = objective(inst, current, options.linear);
  result.trace.initial_objective = f_current;

  auto finish = [&](Vector alpha, double f, RunStatus status) {
    result.alpha = std::move(alpha);
    result.objective = f;
    result.status = status;
    return std::move(result);
  };

  if (options.stop_mode == StopMode::RelativeObjective && f_current == 0.0) {
    return finish(std::move(current), f_current, RunStatus::Converged);
  }

  double eta = options.eta0;
  Vector trial(n);
  for (std::size_t t = 1; t <= options.max_iters; ++t) {
    const auto g = gradient(inst, current, options.linear);
    Vector next;
    double f_next = 0.0;
    double step_sq = 0.0;
    int backtracks = 0;
    while (true) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = current[i] - eta * g.grad[i];
      next = project(trial, region, options.bisect_T);
      f_next = objective(inst, next, options.linear);
      step_sq = 0.0;
      for (std::size_t i = 0; i < n; ++i) step_sq += (next[i] - current[i]) * (next[i] - current[i]);
      if (f_next <= f_current - step_sq / (2.0 * eta)) break;
      if (++backtracks > options.max_backtracks) {
        throw Error("stepsize underflow: " + std::to_string(options.max_backtracks) +
                    " backtracking steps without sufficient decrease");
      }
      eta *= options.gamma;
    }

    const double step = std::sqrt(step_sq);
    TraceRow row;
    row.iter = t;
    row.objective = f_next;
    row.eta = eta;
    row.backtracks = backtracks;
    row.grad_map_norm = step / eta;
    row.slack = region.budget - region.budget_used(next);
    row.seconds = elapsed();
    row.previous_objective = f_current;
    row.step_norm_sq = step_sq;
    result.trace.rows.push_back(row);
    if (observer) observer(t, next);

    if (options.stop_mode == StopMode::GradientMapping) {
      if (step <= eta * options.epsilon) return finish(std::move(current), f_current, RunStatus::Converged);
    } else {
      const double rel = (f_current - f_next) / f_current;
      if (rel <= options.relative_threshold || f_next == 0.0) {
        return finish(std::move(next), f_next, RunStatus::Converged);
      }
    }

    current = std::move(next);
    f_current = f_next;
    if (row.seconds >= options.time_limit) return finish(std::move(current), f_current, RunStatus::TimeLimit);
    eta *= options.gamma_inc;
  }
  return finish(std::move(current), f_current, RunStatus::MaxIterations);
}

}  // namespace opinion_opt

#endif  // OPINION_OPT_OPTIMIZER_HPP
