#include "ubss/matrix_est.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "ubss/error.hpp"

namespace ubss {

RatioHistogram::RatioHistogram(double quantum) : quantum_(quantum) {
  if (!(quantum > 0.0) || !std::isfinite(quantum)) {
    throw ConfigError("histogram: quantum must be a positive finite number");
  }
}

std::int64_t RatioHistogram::index_of(double ratio) const {
  const double scaled = ratio / quantum_;
  if (!std::isfinite(scaled) || std::abs(scaled) >= 0x1.0p62) {
    throw NumericError("histogram: ratio " + std::to_string(ratio) + " cannot be quantized");
  }
  return std::llround(scaled);
}

void RatioHistogram::add(double ratio) { add_index(index_of(ratio)); }

void RatioHistogram::add_index(std::int64_t index, std::uint64_t count) {
  if (count == 0) return;
  bins_[index] += count;
  active_samples_ += count;
}

void RatioHistogram::merge(const RatioHistogram& other) {
  if (other.quantum_ != quantum_) throw ConfigError("histogram: cannot merge different quanta");
  for (const auto& [k, c] : other.bins_) add_index(k, c);
}

EstimatedMatrix::EstimatedMatrix(std::vector<double> ratios) : ratios_(std::move(ratios)) {
  if (ratios_.empty()) throw NumericError("estimated matrix: no columns");
  for (std::size_t i = 0; i < ratios_.size(); ++i) {
    if (!std::isfinite(ratios_[i])) {
      throw NumericError("estimated matrix: ratio " + std::to_string(i + 1) + " is not finite");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (ratios_[i] == ratios_[j]) {
        throw NumericError("estimated matrix: degenerate pair, columns " + std::to_string(j + 1) +
                           " and " + std::to_string(i + 1) + " share ratio " +
                           std::to_string(ratios_[i]));
      }
    }
  }
}

double default_ratio_activity(const SignalMatrix& mixtures) {
  double peak = 0.0;
  for (std::size_t t = 0; t < mixtures.rows(); ++t) peak = std::max(peak, std::abs(mixtures(t, 0)));
  return peak > 0.0 ? kDefaultRelativeActivity * peak : kDefaultRelativeActivity;
}

std::vector<double> compute_ratios(const SignalMatrix& mixtures, double activity_eps) {
  if (mixtures.cols() != 2) {
    throw DimensionError("estimation requires exactly 2 mixture channels, got " +
                         std::to_string(mixtures.cols()));
  }
  if (!(activity_eps > 0.0)) throw ConfigError("activity threshold must be positive");
  std::vector<double> out;
  for (std::size_t t = 0; t < mixtures.rows(); ++t) {
    const double x1 = mixtures(t, 0);
    if (std::abs(x1) > activity_eps) out.push_back(mixtures(t, 1) / x1);
  }
  return out;
}

std::vector<double> compute_ratios(const SignalMatrix& mixtures) {
  if (mixtures.cols() != 2) {
    throw DimensionError("estimation requires exactly 2 mixture channels, got " +
                         std::to_string(mixtures.cols()));
  }
  return compute_ratios(mixtures, default_ratio_activity(mixtures));
}

RatioHistogram build_histogram(std::span<const double> ratios, double quantum) {
  RatioHistogram hist(quantum);
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    if (!std::isfinite(ratios[i])) {
      throw NumericError("histogram: ratio at index " + std::to_string(i) + " is not finite");
    }
    hist.add(ratios[i]);
  }
  return hist;
}

RatioHistogram merge_neighbor_bins(const RatioHistogram& hist) {
  std::vector<std::pair<std::int64_t, std::uint64_t>> order(hist.bins().begin(),
                                                            hist.bins().end());
  // Heaviest first; lower key wins ties.
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::map<std::int64_t, std::uint64_t> remaining = hist.bins();
  RatioHistogram out(hist.quantum());
  for (const auto& [key, count] : order) {
    auto self = remaining.find(key);
    if (self == remaining.end()) continue;
    std::uint64_t total = self->second;
    remaining.erase(self);
    for (std::int64_t nb : {key - 1, key + 1}) {
      auto it = remaining.find(nb);
      if (it != remaining.end()) {
        total += it->second;
        remaining.erase(it);
      }
    }
    out.add_index(key, total);
  }
  return out;
}

EstimatedMatrix estimate_mixing(const RatioHistogram& hist, const ModeDetectionOptions& opts) {
  if (hist.empty()) throw NumericError("estimate: no active samples");
  if (opts.top_k == 0 && !(opts.peak_fraction > 0.0 && opts.peak_fraction < 1.0)) {
    throw ConfigError("estimate: peak fraction must lie in (0, 1)");
  }
  const RatioHistogram merged = merge_neighbor_bins(hist);
  std::vector<std::pair<std::int64_t, std::uint64_t>> bins(merged.bins().begin(),
                                                           merged.bins().end());
  std::stable_sort(bins.begin(), bins.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  std::size_t keep = 0;
  if (opts.top_k > 0) {
    keep = std::min(opts.top_k, bins.size());
  } else {
    const double threshold = opts.peak_fraction * static_cast<double>(bins.front().second);
    while (keep < bins.size() && static_cast<double>(bins[keep].second) >= threshold) ++keep;
  }
  std::vector<double> ratios;
  ratios.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) ratios.push_back(merged.ratio_of(bins[i].first));
  return EstimatedMatrix(std::move(ratios));
}

void export_bar_graph(const RatioHistogram& hist, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "ratio,count\n";
  char buf[64];
  for (const auto& [key, count] : hist.bins()) {
    std::snprintf(buf, sizeof buf, "%.4f", hist.ratio_of(key));
    out << buf << ',' << count << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace ubss
