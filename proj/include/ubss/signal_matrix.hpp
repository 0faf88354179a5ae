#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ubss {

/// Dense T x K sample matrix, row-major. Rows are time samples and columns
/// are channels (sources, mixtures or estimates).
class SignalMatrix {
 public:
  SignalMatrix() = default;
  SignalMatrix(std::size_t rows, std::size_t cols);
  SignalMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  double& operator()(std::size_t t, std::size_t k) noexcept { return data_[t * cols_ + k]; }
  double operator()(std::size_t t, std::size_t k) const noexcept { return data_[t * cols_ + k]; }

  std::span<double> row(std::size_t t) noexcept { return {data_.data() + t * cols_, cols_}; }
  std::span<const double> row(std::size_t t) const noexcept {
    return {data_.data() + t * cols_, cols_};
  }

  /// Copy of one column as a contiguous sequence.
  std::vector<double> column(std::size_t k) const;

  std::span<const double> data() const noexcept { return data_; }

  /// Throws NumericError if any entry is NaN or infinite.
  void require_finite() const;

  friend bool operator==(const SignalMatrix&, const SignalMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// M x N mixing matrix. Columns are the mixing directions of the sources.
class MixingMatrix {
 public:
  MixingMatrix() = default;
  /// Builds from a list of rows; throws ConfigError on ragged or empty input.
  explicit MixingMatrix(const std::vector<std::vector<double>>& rows);

  std::size_t n_mixtures() const noexcept { return rows_; }
  std::size_t n_sources() const noexcept { return cols_; }

  double operator()(std::size_t m, std::size_t n) const noexcept { return data_[m * cols_ + n]; }

  /// Ratio of the second to the first entry of column n.
  double column_ratio(std::size_t n) const;

  /// Checks the invariants needed by the two-channel estimation model:
  /// nonzero first-row entries and pairwise non-parallel columns.
  void validate() const;

  static MixingMatrix identity(std::size_t n);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace ubss
