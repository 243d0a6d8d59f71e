#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "opinion_opt/baselines.hpp"
#include "oracles.hpp"

using namespace opinion_opt;

namespace {

double relative_gap(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

bool is_corner(const Instance& inst, const Vector& alpha) {
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] != inst.lower[i] && alpha[i] != inst.upper[i]) return false;
  }
  return true;
}

// closed-form objective and gradient of the two-agent instance
// P = [[0,1],[1,0]], s = (0,1)
struct TwoAgent {
  static long double f(long double a0, long double a1) {
    return (2 - a0) * a1 / (a0 + a1 - a0 * a1);
  }
  static std::pair<long double, long double> grad(long double a0, long double a1) {
    const long double D = a0 + a1 - a0 * a1;
    const long double g0 = (-a1 * D - (2 - a0) * a1 * (1 - a1)) / (D * D);
    const long double g1 = ((2 - a0) * D - (2 - a0) * a1 * (1 - a0)) / (D * D);
    return {g0, g1};
  }
};

}  // namespace

TEST(LocalSearch, SelfLoopTieGoesToLowerBound) {
  Instance inst;
  inst.s = {0.7};
  inst.P = SparseRowStochasticMatrix::from_triplets(1, {{0, 0, 1.0}});
  inst.lower = {0.2};
  inst.upper = {0.9};
  inst.alpha_init = {0.8};
  const auto sol = local_search_unconstrained(inst);
  EXPECT_EQ(sol.values, Vector{0.2});
  EXPECT_NEAR(sol.objective, 0.7, 1e-15);
  LocalSearchOptions sparse;
  sparse.dense_threshold = 0;
  EXPECT_EQ(local_search_unconstrained(inst, sparse).values, Vector{0.2});
}

TEST(LocalSearch, MatchesExhaustiveEnumeration) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto n = static_cast<std::uint32_t>(2 + seed % 9);
    const auto inst = oracle::random_instance(n, seed + 500);
    const auto sol = local_search_unconstrained(inst);
    const auto [best, arg] = oracle::best_corner(inst);
    EXPECT_TRUE(is_corner(inst, sol.values));
    EXPECT_LE(relative_gap(oracle::objective_d(inst, sol.values), best), 1e-12) << "seed " << seed;
  }
}

TEST(LocalSearch, SparsePathAgreesWithDense) {
  LocalSearchOptions sparse;
  sparse.dense_threshold = 0;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto inst = oracle::random_instance(40 + 30 * static_cast<std::uint32_t>(seed), seed + 700);
    const auto dense = local_search_unconstrained(inst);
    const auto batched = local_search_unconstrained(inst, sparse);
    EXPECT_TRUE(is_corner(inst, batched.values));
    EXPECT_LE(relative_gap(batched.objective, dense.objective), 1e-10) << "seed " << seed;
  }
}

TEST(LocalSearch, NoSingleSwitchImproves) {
  const auto inst = oracle::random_instance(60, 801);
  const auto sol = local_search_unconstrained(inst);
  const double f = oracle::objective_d(inst, sol.values);
  for (std::size_t i = 0; i < inst.size(); ++i) {
    Vector flipped = sol.values;
    flipped[i] = flipped[i] == inst.lower[i] ? inst.upper[i] : inst.lower[i];
    EXPECT_GE(oracle::objective_d(inst, flipped), f - 1e-12 * std::max(1.0, f)) << "vertex " << i;
  }
}

TEST(GradientChanplus, BudgetEndpoints) {
  const auto inst = oracle::random_instance(30, 900, NormOrder::L1, 0.0);
  const auto chan = local_search_unconstrained(inst);

  const auto zero = baseline_gradient_chanplus(inst, chan);
  EXPECT_EQ(zero.alpha, inst.alpha_init);

  const auto loose = baseline_gradient_chanplus(with_budget(inst, 1e6, NormOrder::L1), chan);
  EXPECT_EQ(loose.alpha, chan.values);
  EXPECT_EQ(loose.steps, 0u);
  EXPECT_EQ(loose.objective, chan.objective);
}

TEST(GradientChanplus, StopsAsSoonAsFeasible) {
  for (auto p : {NormOrder::L1, NormOrder::L2}) {
    auto inst = oracle::random_instance(40, 901, p, 0.0);
    const auto chan = local_search_unconstrained(inst);
    inst = with_budget(inst, 0.5 * inst.region().budget_used(chan.values), p);
    const auto out = baseline_gradient_chanplus(inst, chan);
    const auto region = inst.region();
    EXPECT_TRUE(region.contains(out.alpha));
    std::size_t reset = 0;
    for (std::size_t i = 0; i < inst.size(); ++i) {
      if (out.alpha[i] != chan.values[i]) {
        EXPECT_EQ(out.alpha[i], inst.alpha_init[i]);
        ++reset;
      }
    }
    EXPECT_EQ(reset, out.steps);
  }
}

TEST(GradientInit, TwoAgentHandOracle) {
  auto inst = oracle::two_agent_instance(0.5, NormOrder::L1);
  inst.alpha_init = {0.7, 0.5};
  const auto [g0, g1] = TwoAgent::grad(0.7L, 0.5L);
  ASSERT_LT(g0, 0.0L);
  ASSERT_GT(g1, 0.0L);
  ASSERT_GT(std::abs(g1), std::abs(g0));
  // vertex 1 goes to l = 0.01 (cost 0.49); vertex 0 to u = 1 would cost 0.3 more
  const auto out = baseline_gradient_init(inst);
  EXPECT_EQ(out.alpha, (Vector{0.7, 0.01}));
  EXPECT_EQ(out.steps, 1u);
  EXPECT_NEAR(out.objective, static_cast<double>(TwoAgent::f(0.7L, 0.01L)), 1e-13);

  const auto wide = baseline_gradient_init(with_budget(inst, 1.0, NormOrder::L1));
  EXPECT_EQ(wide.alpha, (Vector{1.0, 0.01}));
  EXPECT_NEAR(wide.objective, 0.01, 1e-13);
}

TEST(GradientInit, ZeroBudgetAndFeasibility) {
  const auto inst = oracle::random_instance(25, 902, NormOrder::L2, 0.0);
  const auto zero = baseline_gradient_init(inst);
  EXPECT_EQ(zero.alpha, inst.alpha_init);
  EXPECT_EQ(zero.steps, 0u);
  for (double k : {0.3, 1.0, 3.0, 100.0}) {
    const auto sized = with_budget(inst, k, NormOrder::L2);
    const auto out = baseline_gradient_init(sized);
    EXPECT_TRUE(sized.region().contains(out.alpha)) << k;
    if (k == 100.0) EXPECT_EQ(out.steps, inst.size());
  }
}

TEST(ColumnSum, ResetsInIncreasingColumnSumOrder) {
  auto inst = oracle::random_instance(30, 903, NormOrder::L1, 0.0);
  const auto chan = local_search_unconstrained(inst);
  inst = with_budget(inst, 0.4 * inst.region().budget_used(chan.values), NormOrder::L1);
  const auto out = baseline_columnsum_chanplus(inst, chan);
  EXPECT_TRUE(inst.region().contains(out.alpha));

  // independent replay
  const auto column = inst.P.column_sums();
  std::vector<std::size_t> order(inst.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return column[a] < column[b]; });
  Vector expected = chan.values;
  std::size_t steps = 0;
  for (std::size_t idx = 0; inst.region().budget_used(expected) > inst.budget; ++idx) {
    expected[order[idx]] = inst.alpha_init[order[idx]];
    ++steps;
  }
  EXPECT_EQ(out.alpha, expected);
  EXPECT_EQ(out.steps, steps);
}

TEST(ColumnSum, BudgetEndpoints) {
  const auto inst = oracle::random_instance(20, 904, NormOrder::L2, 0.0);
  const auto chan = local_search_unconstrained(inst);
  EXPECT_EQ(baseline_columnsum_chanplus(inst, chan).alpha, inst.alpha_init);
  const auto loose = baseline_columnsum_chanplus(with_budget(inst, 1e6, NormOrder::L2), chan);
  EXPECT_EQ(loose.alpha, chan.values);
  EXPECT_EQ(loose.steps, 0u);
}

TEST(Baselines, ExpiredDeadlineIsReported) {
  const auto inst = oracle::random_instance(20, 905, NormOrder::L1, 0.1);
  const auto chan = local_search_unconstrained(inst);
  const Deadline expired(0.0);
  EXPECT_TRUE(baseline_gradient_chanplus(inst, chan, expired).timed_out);
  EXPECT_TRUE(baseline_gradient_init(inst, expired).timed_out);
  EXPECT_TRUE(baseline_columnsum_chanplus(inst, chan, expired).timed_out);
}
