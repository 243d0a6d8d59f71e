#ifndef OPINION_OPT_INSTANCE_HPP
#define OPINION_OPT_INSTANCE_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "opinion_opt/error.hpp"
#include "opinion_opt/graph.hpp"
#include "opinion_opt/rng.hpp"
#include "opinion_opt/sparse_matrix.hpp"
#include "opinion_opt/vector_ops.hpp"

namespace opinion_opt {

/// Candidate resistance vector alpha in (0, 1]^V.
using ResistanceVector = Vector;

/// Absolute tolerance used when a resistance vector is declared feasible.
inline constexpr double kFeasibilityTolerance = 1e-9;

/// Non-owning view of the constraint set C = { a : ||a - a_init||_p <= k, l <= a <= u }.
struct FeasibleRegion {
  std::span<const double> alpha_init;
  std::span<const double> lower;
  std::span<const double> upper;
  double budget = 0.0;
  NormOrder p = NormOrder::L1;

  std::size_t size() const { return alpha_init.size(); }

  double budget_used(std::span<const double> alpha) const { return distance(alpha, alpha_init, p); }

  bool in_box(std::span<const double> alpha) const {
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if (alpha[i] < lower[i] || alpha[i] > upper[i]) return false;
    }
    return true;
  }

  bool contains(std::span<const double> alpha, double tol = kFeasibilityTolerance) const {
    return alpha.size() == size() && in_box(alpha) && budget_used(alpha) <= budget + tol;
  }
};

/// Full input of the budgeted opinion minimization problem.
///
/// Invariants (checked by validate()): 0 < l <= alpha_init <= u <= 1,
/// 0 <= s <= 1 and k >= 0. Instances are treated as immutable once built.
struct Instance {
  std::vector<double> s;
  SparseRowStochasticMatrix P;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> alpha_init;
  double budget = 0.0;
  NormOrder p = NormOrder::L1;

  std::size_t size() const { return s.size(); }

  FeasibleRegion region() const { return {alpha_init, lower, upper, budget, p}; }

  void validate() const {
    const std::size_t n = s.size();
    if (n == 0) throw InvalidInput("instance has no agents");
    if (P.size() != n || lower.size() != n || upper.size() != n || alpha_init.size() != n) {
      throw InvalidInput("instance vectors disagree on agent count");
    }
    if (!(budget >= 0.0) || !std::isfinite(budget)) throw InvalidInput("budget k must be >= 0");
    for (std::size_t i = 0; i < n; ++i) {
      const auto where = " at agent " + std::to_string(i);
      if (!(s[i] >= 0.0 && s[i] <= 1.0)) throw InvalidInput("innate opinion outside [0,1]" + where);
      if (!(lower[i] > 0.0)) throw InvalidInput("lower bound must be positive" + where);
      if (!(lower[i] <= alpha_init[i] && alpha_init[i] <= upper[i] && upper[i] <= 1.0)) {
        throw InvalidInput("require l <= alpha_init <= u <= 1" + where);
      }
    }
  }

  friend bool operator==(const Instance&, const Instance&) = default;
};

inline Instance with_budget(Instance inst, double budget, NormOrder p) {
  inst.budget = budget;
  inst.p = p;
  inst.validate();
  return inst;
}

/// Random instance on a connected graph: s_i ~ U[0,1), symmetric edge weights
/// w_ij ~ U[0,1) normalised per row, l_i = 0.001 w.p. 0.99 else U[0.001,0.1),
/// u_i = 0.999 w.p. 0.99 else U[0.9,0.999), alpha_init_i ~ U[l_i,u_i).
/// The budget is left at k = 0 with p = 1; see with_budget().
inline Instance generate_instance(const UndirectedGraph& graph, std::uint64_t seed) {
  const std::uint32_t n = graph.n;
  if (n < 2) throw InvalidInput("instance generation needs at least two vertices");
  if (!graph.is_connected()) throw InvalidInput("instance generation needs a connected graph");

  Instance inst;
  {
    Rng rng(seed, streams::kInnateOpinion);
    inst.s.resize(n);
    for (auto& x : inst.s) x = rng.uniform01();
  }

  std::vector<double> weights(graph.edges.size());
  {
    Rng rng(seed, streams::kEdgeWeight);
    for (auto& w : weights) w = rng.uniform01();
  }
  std::vector<double> row_total(n, 0.0);
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    row_total[graph.edges[e].first] += weights[e];
    row_total[graph.edges[e].second] += weights[e];
  }
  std::vector<Triplet> triplets;
  triplets.reserve(2 * graph.edges.size());
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    const auto [a, b] = graph.edges[e];
    triplets.push_back({a, b, weights[e] / row_total[a]});
    triplets.push_back({b, a, weights[e] / row_total[b]});
  }
  inst.P = SparseRowStochasticMatrix::from_triplets(n, std::move(triplets));

  inst.lower.resize(n);
  {
    Rng rng(seed, streams::kLowerBound);
    for (auto& l : inst.lower) {
      const bool common = rng.bernoulli(0.99);
      const double draw = rng.uniform(0.001, 0.1);
      l = common ? 0.001 : draw;
    }
  }
  inst.upper.resize(n);
  {
    Rng rng(seed, streams::kUpperBound);
    for (auto& u : inst.upper) {
      const bool common = rng.bernoulli(0.99);
      const double draw = rng.uniform(0.9, 0.999);
      u = common ? 0.999 : draw;
    }
  }
  inst.alpha_init.resize(n);
  {
    Rng rng(seed, streams::kInitialResistance);
    for (std::uint32_t i = 0; i < n; ++i) inst.alpha_init[i] = rng.uniform(inst.lower[i], inst.upper[i]);
  }
  inst.validate();
  return inst;
}

/// k = c * ||alpha_ref - alpha_init||_p, the budget of the c-sweep.
inline double budget_from_reference(std::span<const double> alpha_ref, const Instance& inst, double c) {
  if (!(c >= 0.0 && c <= 1.0)) throw InvalidInput("budget scale c must lie in [0,1]");
  return c * distance(alpha_ref, inst.alpha_init, inst.p);
}

}  // namespace opinion_opt

#endif  // OPINION_OPT_INSTANCE_HPP
