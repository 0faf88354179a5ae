#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <vector>

#include "ubss/signal_matrix.hpp"

namespace ubss {

/// Occurrence counts of quantized mixture ratios. Keys are stored as integer
/// multiples of the quantum so that bin identity is exact.
class RatioHistogram {
 public:
  explicit RatioHistogram(double quantum);

  double quantum() const noexcept { return quantum_; }
  std::uint64_t active_samples() const noexcept { return active_samples_; }
  bool empty() const noexcept { return bins_.empty(); }
  std::size_t size() const noexcept { return bins_.size(); }

  /// Bins keyed by multiple index; ratio value is index * quantum.
  const std::map<std::int64_t, std::uint64_t>& bins() const noexcept { return bins_; }
  double ratio_of(std::int64_t index) const noexcept { return static_cast<double>(index) * quantum_; }

  /// Nearest multiple index for a ratio, ties away from zero.
  std::int64_t index_of(double ratio) const;

  void add(double ratio);
  void add_index(std::int64_t index, std::uint64_t count = 1);

  /// Sums the counts of another histogram with the same quantum.
  void merge(const RatioHistogram& other);

 private:
  double quantum_;
  std::uint64_t active_samples_ = 0;
  std::map<std::int64_t, std::uint64_t> bins_;
};

/// Normalized two-row estimate of the mixing matrix: a row of ones over the
/// detected ratios, in detection order.
class EstimatedMatrix {
 public:
  /// Throws NumericError when a ratio is non-finite or two ratios coincide.
  explicit EstimatedMatrix(std::vector<double> ratios);

  std::size_t n_sources() const noexcept { return ratios_.size(); }
  const std::vector<double>& ratios() const noexcept { return ratios_; }
  double ratio(std::size_t i) const noexcept { return ratios_[i]; }

 private:
  std::vector<double> ratios_;
};

struct ModeDetectionOptions {
  double peak_fraction = 0.1;
  /// When nonzero, keep exactly the top_k heaviest bins instead of applying
  /// the relative threshold (for a known number of sources).
  std::size_t top_k = 0;
};

/// Largest |x1| times this factor is the default activity threshold.
inline constexpr double kDefaultRelativeActivity = 1e-6;

/// Default activity threshold for a two-channel mixture: a small fraction of
/// the largest |x1|.
double default_ratio_activity(const SignalMatrix& mixtures);

/// x2/x1 for every sample with |x1| > activity_eps, in time order.
std::vector<double> compute_ratios(const SignalMatrix& mixtures, double activity_eps);

std::vector<double> compute_ratios(const SignalMatrix& mixtures);

RatioHistogram build_histogram(std::span<const double> ratios, double quantum);

/// Merges each bin into a heavier neighbour one quantum away. Ties go to
/// the lower key.
RatioHistogram merge_neighbor_bins(const RatioHistogram& hist);

/// Dominant ratio modes, heaviest first. The number of returned ratios is the
/// source-count estimate.
EstimatedMatrix estimate_mixing(const RatioHistogram& hist, const ModeDetectionOptions& opts = {});

/// CSV `ratio,count` sorted by ratio, four decimals.
void export_bar_graph(const RatioHistogram& hist, const std::filesystem::path& path);

}  // namespace ubss
