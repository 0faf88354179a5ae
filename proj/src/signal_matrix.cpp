#include "ubss/signal_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ubss/error.hpp"

namespace ubss {

SignalMatrix::SignalMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

SignalMatrix::SignalMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw DimensionError("signal matrix: expected " + std::to_string(rows_ * cols_) +
                         " entries, got " + std::to_string(data_.size()));
  }
}

std::vector<double> SignalMatrix::column(std::size_t k) const {
  std::vector<double> out(rows_);
  for (std::size_t t = 0; t < rows_; ++t) out[t] = (*this)(t, k);
  return out;
}

void SignalMatrix::require_finite() const {
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      throw NumericError("signal matrix: non-finite entry at row " + std::to_string(i / cols_ + 1) +
                         ", column " + std::to_string(i % cols_ + 1));
    }
  }
}

MixingMatrix::MixingMatrix(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty()) throw ConfigError("mixing matrix: empty");
  rows_ = rows.size();
  cols_ = rows.front().size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ConfigError("mixing matrix: rows have different lengths");
    for (double v : r) {
      if (!std::isfinite(v)) throw ConfigError("mixing matrix: non-finite entry");
      data_.push_back(v);
    }
  }
}

double MixingMatrix::column_ratio(std::size_t n) const {
  if (rows_ < 2) throw DimensionError("mixing matrix: column ratio needs two rows");
  return (*this)(1, n) / (*this)(0, n);
}

void MixingMatrix::validate() const {
  for (std::size_t n = 0; n < cols_; ++n) {
    if ((*this)(0, n) == 0.0) {
      throw ConfigError("mixing matrix: column " + std::to_string(n + 1) +
                        " has a zero first entry");
    }
  }
  // Columns i and j are parallel iff every 2x2 minor built from them vanishes.
  for (std::size_t i = 0; i < cols_; ++i) {
    for (std::size_t j = i + 1; j < cols_; ++j) {
      bool parallel = true;
      double scale = 0.0;
      for (std::size_t m = 0; m < rows_; ++m) {
        scale = std::max(scale, std::abs((*this)(m, i)) * std::abs((*this)(m, j)));
      }
      for (std::size_t m = 0; m < rows_ && parallel; ++m) {
        for (std::size_t p = m + 1; p < rows_; ++p) {
          double minor = (*this)(m, i) * (*this)(p, j) - (*this)(p, i) * (*this)(m, j);
          if (std::abs(minor) > 1e-12 * scale) {
            parallel = false;
            break;
          }
        }
      }
      if (parallel) {
        throw ConfigError("mixing matrix: columns " + std::to_string(i + 1) + " and " +
                          std::to_string(j + 1) + " are parallel");
      }
    }
  }
}

MixingMatrix MixingMatrix::identity(std::size_t n) {
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) rows[i][i] = 1.0;
  return MixingMatrix(rows);
}

}  // namespace ubss
