#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ubss/signal_matrix.hpp"

namespace ubss {

/// Pearson correlation cov(x,y) / sqrt(cov(x,x) cov(y,y)), with mean removal
/// and 1/(T-1) normalization. Throws NumericError for a zero-variance input.
double correlation(std::span<const double> x, std::span<const double> y);

struct MatchedPair {
  std::size_t estimate_idx = 0;
  std::size_t true_idx = 0;
  double correlation = 0.0;
};

struct SeparationReport {
  /// permutation[e] is the true source matched to estimated column e, if any.
  std::vector<std::optional<std::size_t>> permutation;
  /// Matched pairs ordered by estimated column.
  std::vector<MatchedPair> matches;
  std::size_t n_sources_estimated = 0;
  std::size_t n_sources_true = 0;

  double min_abs_correlation() const;
  /// Correlation of the estimate matched to true source k, if matched.
  std::optional<double> correlation_for_true(std::size_t k) const;
};

enum class MatchStrategy { greedy, exhaustive };

/// Matches estimated columns to true sources by absolute correlation and
/// reports the signed coefficients. Exhaustive search is limited to six
/// estimated columns.
SeparationReport align_and_score(const SignalMatrix& truth, const SignalMatrix& estimates,
                                 MatchStrategy strategy = MatchStrategy::greedy);

}  // namespace ubss
