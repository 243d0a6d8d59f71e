#ifndef OPINION_OPT_BASELINES_HPP
#define OPINION_OPT_BASELINES_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "opinion_opt/dense.hpp"
#include "opinion_opt/dynamics.hpp"
#include "opinion_opt/error.hpp"
#include "opinion_opt/instance.hpp"

namespace opinion_opt {

/// Resistance vector with every coordinate exactly at l_i or u_i.
struct CornerSolution {
  ResistanceVector values;
  double objective = 0.0;
};

struct LocalSearchOptions {
  /// Instances up to this size keep a dense inverse of M and score every
  /// switch exactly; larger ones use the sparse batched path.
  std::size_t dense_threshold = 3000;
  LinearSolverOptions linear;
};

/// Wall-clock budget shared by the greedy baselines.
class Deadline {
 public:
  explicit Deadline(double seconds = std::numeric_limits<double>::infinity())
      : start_(std::chrono::steady_clock::now()), limit_(seconds) {}

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }
  bool expired() const { return elapsed() >= limit_; }

 private:
  std::chrono::steady_clock::time_point start_;
  double limit_;
};

struct BaselineResult {
  ResistanceVector alpha;
  double objective = 0.0;
  /// Number of coordinate changes made.
  std::size_t steps = 0;
  bool timed_out = false;
};

namespace detail {

inline Vector nearest_corner(const Instance& inst) {
  Vector alpha(inst.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    alpha[i] = inst.alpha_init[i] - inst.lower[i] <= inst.upper[i] - inst.alpha_init[i] ? inst.lower[i]
                                                                                        : inst.upper[i];
  }
  return alpha;
}

inline double switch_delta(const Instance& inst, const Vector& alpha, std::size_t i) {
  return alpha[i] == inst.lower[i] ? inst.upper[i] - inst.lower[i] : inst.lower[i] - inst.upper[i];
}

inline double tie_tolerance(double f) { return 1e-15 * std::max(1.0, std::abs(f)); }

/// Exact single-switch scoring with a dense inverse of M kept current by
/// Sherman-Morrison updates. Switching alpha_i by delta changes f by
/// delta * g_i / (1 + delta * (P M^{-1})_ii).
inline Vector local_search_dense(const Instance& inst, Vector alpha) {
  const auto n = static_cast<Eigen::Index>(inst.size());
  const Eigen::MatrixXd P = dense_interaction_matrix(inst.P);
  const Eigen::Map<const Eigen::VectorXd> s(inst.s.data(), n);
  Eigen::MatrixXd M_inv = dense_system_matrix(inst, alpha).partialPivLu().inverse();

  constexpr int kRefactorEvery = 64;
  const std::size_t move_cap = 50 * inst.size() + 1000;
  int since_refactor = 0;
  for (std::size_t moves = 0;; ++moves) {
    if (moves > move_cap) throw InternalError("local search did not terminate");
    Eigen::VectorXd weighted(n);
    for (Eigen::Index i = 0; i < n; ++i) weighted(i) = alpha[i] * inst.s[i];
    const Eigen::VectorXd z = M_inv * weighted;
    const Eigen::VectorXd v = M_inv.transpose() * Eigen::VectorXd::Ones(n);
    const Eigen::VectorXd residual = s - P * z;
    const double f = z.sum();
    const double tol = tie_tolerance(f);

    Eigen::Index best = -1;
    double best_change = -tol;
    Eigen::Index tie = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double delta = switch_delta(inst, alpha, static_cast<std::size_t>(i));
      if (delta == 0.0) continue;
      const double d = P.row(i).dot(M_inv.col(i));
      const double change = delta * v(i) * residual(i) / (1.0 + delta * d);
      if (change < best_change) {
        best_change = change;
        best = i;
      } else if (tie < 0 && delta < 0.0 && change <= tol) {
        tie = i;
      }
    }
    const Eigen::Index pick = best >= 0 ? best : tie;
    if (pick < 0) break;

    const double delta = switch_delta(inst, alpha, static_cast<std::size_t>(pick));
    alpha[pick] = delta > 0.0 ? inst.upper[pick] : inst.lower[pick];
    if (++since_refactor >= kRefactorEvery) {
      M_inv = dense_system_matrix(inst, alpha).partialPivLu().inverse();
      since_refactor = 0;
    } else {
      // M gains delta * e_pick * P.row(pick)
      const Eigen::VectorXd col = M_inv.col(pick);
      const Eigen::RowVectorXd row = P.row(pick) * M_inv;
      const double denom = 1.0 + delta * row(pick);
      M_inv.noalias() -= (delta / denom) * col * row;
    }
  }
  return alpha;
}

/// Sparse path: the sign of each switch's change equals the sign of
/// delta_i * g_i, so improving switches are read off the gradient. Improving
/// switches are applied as a batch, halving the batch (largest first-order
/// gain first) until the objective drops; a single improving switch always does.
inline Vector local_search_sparse(const Instance& inst, Vector alpha, const LinearSolverOptions& linear) {
  const std::size_t n = inst.size();
  const std::size_t round_cap = 50 * n + 1000;
  double f = objective(inst, alpha, linear);
  for (std::size_t round = 0;; ++round) {
    if (round > round_cap) throw InternalError("local search did not terminate");
    const auto g = gradient(inst, alpha, linear);
    f = g.objective;
    const double tol = tie_tolerance(f);
    std::vector<std::pair<double, std::size_t>> improving;
    std::ptrdiff_t tie = -1;
    for (std::size_t i = 0; i < n; ++i) {
      const double delta = switch_delta(inst, alpha, i);
      if (delta == 0.0) continue;
      const double first_order = delta * g.grad[i];
      if (first_order < -tol) {
        improving.emplace_back(first_order, i);
      } else if (tie < 0 && delta < 0.0 && first_order <= tol) {
        tie = static_cast<std::ptrdiff_t>(i);
      }
    }
    if (improving.empty()) {
      if (tie < 0) break;
      alpha[tie] = inst.lower[tie];
      continue;
    }
    std::stable_sort(improving.begin(), improving.end());
    std::size_t batch = improving.size();
    while (true) {
      Vector candidate = alpha;
      for (std::size_t b = 0; b < batch; ++b) {
        const auto i = improving[b].second;
        candidate[i] = candidate[i] == inst.lower[i] ? inst.upper[i] : inst.lower[i];
      }
      if (batch == 1) {
        alpha = std::move(candidate);
        break;
      }
      const double f_candidate = objective(inst, candidate, linear);
      if (f_candidate < f - tol) {
        alpha = std::move(candidate);
        break;
      }
      batch /= 2;
    }
  }
  return alpha;
}

}  // namespace detail

/// Global minimiser of f over the box [l, u] (budget ignored).
///
/// Starts from the corner nearest alpha_init and repeatedly applies the
/// single switch l_i <-> u_i with the largest decrease of f; switches with
/// no change prefer l_i. Any local optimum of this neighbourhood is global.
inline CornerSolution local_search_unconstrained(const Instance& inst, const LocalSearchOptions& options = {}) {
  Vector alpha = detail::nearest_corner(inst);
  alpha = inst.size() <= options.dense_threshold ? detail::local_search_dense(inst, std::move(alpha))
                                                 : detail::local_search_sparse(inst, std::move(alpha), options.linear);
  CornerSolution out;
  out.objective = objective(inst, alpha, options.linear);
  out.values = std::move(alpha);
  return out;
}

namespace detail {

inline std::size_t pick_unselected(const Vector& grad, const std::vector<char>& selected, bool largest) {
  std::size_t pick = grad.size();
  double best = 0.0;
  for (std::size_t v = 0; v < grad.size(); ++v) {
    if (selected[v]) continue;
    const double score = std::abs(grad[v]);
    if (pick == grad.size() || (largest ? score > best : score < best)) {
      best = score;
      pick = v;
    }
  }
  return pick;
}

}  // namespace detail

/// Greedy repair of alpha^Chan+: reset the unselected vertex with the smallest
/// |df/dalpha_v| to alpha_init_v until the budget holds.
inline BaselineResult baseline_gradient_chanplus(const Instance& inst, const CornerSolution& chanplus,
                                                 const Deadline& deadline = Deadline(),
                                                 const LinearSolverOptions& linear = {}) {
  const auto region = inst.region();
  BaselineResult out;
  out.alpha = chanplus.values;
  std::vector<char> selected(inst.size(), 0);
  while (region.budget_used(out.alpha) > region.budget) {
    if (deadline.expired()) {
      out.timed_out = true;
      break;
    }
    const auto g = gradient(inst, out.alpha, linear);
    const std::size_t v = detail::pick_unselected(g.grad, selected, /*largest=*/false);
    if (v == inst.size()) throw InternalError("every vertex reset but the budget still fails");
    out.alpha[v] = inst.alpha_init[v];
    selected[v] = 1;
    ++out.steps;
  }
  out.objective = objective(inst, out.alpha, linear);
  return out;
}

/// Greedy descent from alpha_init: move the unselected vertex with the largest
/// |df/dalpha_v| to l_v (gradient >= 0) or u_v, stopping before the first move
/// that breaks the budget.
inline BaselineResult baseline_gradient_init(const Instance& inst, const Deadline& deadline = Deadline(),
                                             const LinearSolverOptions& linear = {}) {
  const auto region = inst.region();
  BaselineResult out;
  out.alpha = inst.alpha_init;
  std::vector<char> selected(inst.size(), 0);
  for (std::size_t round = 0; round < inst.size(); ++round) {
    if (deadline.expired()) {
      out.timed_out = true;
      break;
    }
    const auto g = gradient(inst, out.alpha, linear);
    const std::size_t v = detail::pick_unselected(g.grad, selected, /*largest=*/true);
    const double previous = out.alpha[v];
    out.alpha[v] = g.grad[v] >= 0.0 ? inst.lower[v] : inst.upper[v];
    if (region.budget_used(out.alpha) > region.budget) {
      out.alpha[v] = previous;
      break;
    }
    selected[v] = 1;
    ++out.steps;
  }
  out.objective = objective(inst, out.alpha, linear);
  return out;
}

/// Gradient-free repair of alpha^Chan+: reset vertices in increasing order of
/// their column sum of P until the budget holds.
inline BaselineResult baseline_columnsum_chanplus(const Instance& inst, const CornerSolution& chanplus,
                                                  const Deadline& deadline = Deadline(),
                                                  const LinearSolverOptions& linear = {}) {
  const auto region = inst.region();
  const std::size_t n = inst.size();
  const Vector column = inst.P.column_sums();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return column[a] < column[b]; });

  BaselineResult out;
  out.alpha = chanplus.values;
  // running l1 sum or squared l2 sum, confirmed exactly before stopping
  auto term = [&](std::size_t i) {
    const double d = std::abs(out.alpha[i] - inst.alpha_init[i]);
    return inst.p == NormOrder::L1 ? d : d * d;
  };
  double running = 0.0;
  for (std::size_t i = 0; i < n; ++i) running += term(i);
  auto within = [&]() {
    const double approx = inst.p == NormOrder::L1 ? running : std::sqrt(std::max(running, 0.0));
    return approx <= region.budget * (1.0 + 1e-12) && region.budget_used(out.alpha) <= region.budget;
  };
  for (std::size_t idx = 0; idx < n; ++idx) {
    if (within()) break;
    if (deadline.expired()) {
      out.timed_out = true;
      break;
    }
    const std::size_t v = order[idx];
    running -= term(v);
    out.alpha[v] = inst.alpha_init[v];
    ++out.steps;
  }
  out.objective = objective(inst, out.alpha, linear);
  return out;
}

}  // namespace opinion_opt

#endif  // OPINION_OPT_BASELINES_HPP
