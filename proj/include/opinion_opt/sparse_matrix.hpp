#ifndef OPINION_OPT_SPARSE_MATRIX_HPP
#define OPINION_OPT_SPARSE_MATRIX_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "opinion_opt/error.hpp"
#include "opinion_opt/vector_ops.hpp"

namespace opinion_opt {

struct Triplet {
  std::uint32_t row;
  std::uint32_t col;
  double value;
};

/// Row-major compressed sparse matrix with nonnegative entries and unit row sums.
///
/// The constructor enforces: every stored value lies in [0, 1], every row has
/// at least one stored entry, and every row sums to 1 within kRowSumTolerance.
class SparseRowStochasticMatrix {
 public:
  static constexpr double kRowSumTolerance = 1e-12;

  SparseRowStochasticMatrix() = default;

  SparseRowStochasticMatrix(std::size_t n, std::vector<std::size_t> row_offsets,
                            std::vector<std::uint32_t> col_indices, std::vector<double> values)
      : n_(n),
        row_offsets_(std::move(row_offsets)),
        col_indices_(std::move(col_indices)),
        values_(std::move(values)) {
    validate();
  }

  /// Builds from unordered triplets; duplicate (row, col) pairs are summed.
  static SparseRowStochasticMatrix from_triplets(std::size_t n, std::vector<Triplet> triplets) {
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
      return std::tie(a.row, a.col) < std::tie(b.row, b.col);
    });
    std::vector<std::size_t> offsets(n + 1, 0);
    std::vector<std::uint32_t> cols;
    std::vector<double> vals;
    cols.reserve(triplets.size());
    vals.reserve(triplets.size());
    for (std::size_t t = 0; t < triplets.size(); ++t) {
      const Triplet& e = triplets[t];
      if (e.row >= n || e.col >= n) {
        throw InvalidInput("triplet (" + std::to_string(e.row) + "," + std::to_string(e.col) +
                           ") outside " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
      }
      if (!cols.empty() && t > 0 && triplets[t - 1].row == e.row && triplets[t - 1].col == e.col) {
        vals.back() += e.value;
        continue;
      }
      cols.push_back(e.col);
      vals.push_back(e.value);
      ++offsets[e.row + 1];
    }
    for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
    return SparseRowStochasticMatrix(n, std::move(offsets), std::move(cols), std::move(vals));
  }

  std::size_t size() const { return n_; }
  std::size_t nonzeros() const { return values_.size(); }

  std::span<const std::size_t> row_offsets() const { return row_offsets_; }
  std::span<const std::uint32_t> col_indices() const { return col_indices_; }
  std::span<const double> values() const { return values_; }

  /// y = P x
  void multiply(std::span<const double> x, std::span<double> y) const {
    for (std::size_t i = 0; i < n_; ++i) {
      double acc = 0.0;
      for (std::size_t e = row_offsets_[i]; e < row_offsets_[i + 1]; ++e) {
        acc += values_[e] * x[col_indices_[e]];
      }
      y[i] = acc;
    }
  }

  /// y = P^T x
  void multiply_transpose(std::span<const double> x, std::span<double> y) const {
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      const double xi = x[i];
      for (std::size_t e = row_offsets_[i]; e < row_offsets_[i + 1]; ++e) {
        y[col_indices_[e]] += values_[e] * xi;
      }
    }
  }

  Vector multiply(std::span<const double> x) const {
    Vector y(n_);
    multiply(x, y);
    return y;
  }

  /// Column sums: entry j is sum_i P_ij.
  Vector column_sums() const {
    Vector ones(n_, 1.0);
    Vector y(n_);
    multiply_transpose(ones, y);
    return y;
  }

  bool is_pattern_symmetric() const {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> fwd, bwd;
    fwd.reserve(nonzeros());
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t e = row_offsets_[i]; e < row_offsets_[i + 1]; ++e) {
        if (values_[e] == 0.0) continue;
        fwd.emplace_back(static_cast<std::uint32_t>(i), col_indices_[e]);
        bwd.emplace_back(col_indices_[e], static_cast<std::uint32_t>(i));
      }
    }
    std::sort(fwd.begin(), fwd.end());
    std::sort(bwd.begin(), bwd.end());
    return fwd == bwd;
  }

  friend bool operator==(const SparseRowStochasticMatrix&, const SparseRowStochasticMatrix&) = default;

 private:
  void validate() const {
    if (row_offsets_.size() != n_ + 1 || row_offsets_.front() != 0 ||
        row_offsets_.back() != values_.size() || col_indices_.size() != values_.size()) {
      throw InvalidInput("inconsistent CSR layout");
    }
    for (std::size_t i = 0; i < n_; ++i) {
      if (row_offsets_[i + 1] < row_offsets_[i]) throw InvalidInput("row offsets not monotone");
      if (row_offsets_[i + 1] == row_offsets_[i]) {
        throw InvalidInput("row " + std::to_string(i) + " has no nonzero (isolated agent)");
      }
      double row_sum = 0.0;
      for (std::size_t e = row_offsets_[i]; e < row_offsets_[i + 1]; ++e) {
        const double v = values_[e];
        if (!(v >= 0.0 && v <= 1.0)) {
          throw InvalidInput("entry in row " + std::to_string(i) + " outside [0,1]");
        }
        if (col_indices_[e] >= n_) throw InvalidInput("column index out of range");
        row_sum += v;
      }
      if (std::abs(row_sum - 1.0) > kRowSumTolerance) {
        throw InvalidInput("row " + std::to_string(i) + " sums to " + std::to_string(row_sum));
      }
    }
  }

  std::size_t n_ = 0;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<std::uint32_t> col_indices_;
  std::vector<double> values_;
};

}  // namespace opinion_opt

#endif  // OPINION_OPT_SPARSE_MATRIX_HPP
