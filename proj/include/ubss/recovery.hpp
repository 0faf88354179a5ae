#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ubss/matrix_est.hpp"
#include "ubss/signal_matrix.hpp"

namespace ubss {

/// Line angles arctan(a_i) of the estimated columns, in (-pi/2, pi/2).
class AngleSet {
 public:
  explicit AngleSet(const EstimatedMatrix& est);

  std::size_t size() const noexcept { return angles_.size(); }
  double operator[](std::size_t i) const noexcept { return angles_[i]; }
  const std::vector<double>& angles() const noexcept { return angles_; }

 private:
  std::vector<double> angles_;
};

/// Two distinct column indices used as the local basis of one sample.
struct BasePair {
  std::size_t i = 0;
  std::size_t j = 1;

  friend bool operator==(const BasePair&, const BasePair&) = default;
};

/// Line angle of the sample (x1, x2) in (-pi/2, pi/2]. Returns nullopt for an
/// inactive sample, max(|x1|,|x2|) <= activity_eps.
std::optional<double> sample_angle(double x1, double x2, double activity_eps = 0.0);

/// The two columns with the smallest intersection angle |theta_t - theta_i|.
/// Equal angles resolve to the lower column index. The pair is returned with
/// the closer column first.
BasePair select_base_pair(double theta_t, const AngleSet& angles);

/// Below this |a_j - a_i| a pair is treated as singular.
inline constexpr double kDegeneratePairTolerance = 1e-12;

/// Relative residual under which a sample counts as lying on one column.
inline constexpr double kSingleColumnTolerance = 1e-12;

/// Exact solve of [[1,1],[a_i,a_j]] s = x on the pair; every other entry is
/// zero. Output has one entry per estimated column.
std::vector<double> solve_pair(const EstimatedMatrix& est, BasePair pair, double x1, double x2);

/// Per-sample record of the separation, for diagnostics.
struct SeparationTrace {
  SignalMatrix estimates;  ///< T x N_hat
  std::vector<std::optional<BasePair>> pairs;  ///< nullopt at inactive samples
};

/// Default activity threshold for separation: a small fraction of the largest
/// absolute mixture value.
double default_separation_activity(const SignalMatrix& mixtures);

SeparationTrace separate_with_trace(const SignalMatrix& mixtures, const EstimatedMatrix& est,
                                    double activity_eps);

/// Minimum-intersection-angle recovery of all samples. Column k of the result
/// estimates the source with ratio est.ratio(k), scaled by that source's
/// first-row mixing coefficient.
SignalMatrix separate(const SignalMatrix& mixtures, const EstimatedMatrix& est,
                      double activity_eps);

SignalMatrix separate(const SignalMatrix& mixtures, const EstimatedMatrix& est);

}  // namespace ubss
