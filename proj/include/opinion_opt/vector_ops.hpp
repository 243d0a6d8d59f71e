#ifndef OPINION_OPT_VECTOR_OPS_HPP
#define OPINION_OPT_VECTOR_OPS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "opinion_opt/error.hpp"

namespace opinion_opt {

using Vector = std::vector<double>;

/// Norm order of the budget constraint. Only p = 1 and p = 2 have closed-form proxes.
enum class NormOrder : int { L1 = 1, L2 = 2 };

inline NormOrder norm_order_from_int(int p) {
  if (p == 1) return NormOrder::L1;
  if (p == 2) return NormOrder::L2;
  throw InvalidInput("unsupported norm order p=" + std::to_string(p) + " (expected 1 or 2)");
}

inline int to_int(NormOrder p) { return static_cast<int>(p); }

inline double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

inline double sum(std::span<const double> a) { return std::accumulate(a.begin(), a.end(), 0.0); }

/// ||a - b||_p for p in {1, 2}.
inline double distance(std::span<const double> a, std::span<const double> b, NormOrder p) {
  double acc = 0.0;
  if (p == NormOrder::L1) {
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
    return acc;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

inline double distance_l2(std::span<const double> a, std::span<const double> b) {
  return distance(a, b, NormOrder::L2);
}

}  // namespace opinion_opt

#endif  // OPINION_OPT_VECTOR_OPS_HPP
