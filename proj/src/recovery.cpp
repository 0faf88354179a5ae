#include "ubss/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ubss/error.hpp"

namespace ubss {

AngleSet::AngleSet(const EstimatedMatrix& est) {
  angles_.reserve(est.n_sources());
  for (double a : est.ratios()) angles_.push_back(std::atan(a));
}

std::optional<double> sample_angle(double x1, double x2, double activity_eps) {
  if (std::max(std::abs(x1), std::abs(x2)) <= activity_eps) return std::nullopt;
  if (x1 == 0.0) return std::numbers::pi / 2.0;
  const double theta = std::atan(x2 / x1);
  // x and -x span the same line; fold the lower limit onto the upper one.
  return theta <= -std::numbers::pi / 2.0 ? std::numbers::pi / 2.0 : theta;
}

BasePair select_base_pair(double theta_t, const AngleSet& angles) {
  if (angles.size() < 2) throw DimensionError("select pair: insufficient columns");
  std::size_t best = 0;
  std::size_t second = 1;
  double d_best = std::abs(theta_t - angles[0]);
  double d_second = std::abs(theta_t - angles[1]);
  if (d_second < d_best) {
    std::swap(best, second);
    std::swap(d_best, d_second);
  }
  for (std::size_t k = 2; k < angles.size(); ++k) {
    const double d = std::abs(theta_t - angles[k]);
    if (d < d_best) {
      second = best;
      d_second = d_best;
      best = k;
      d_best = d;
    } else if (d < d_second) {
      second = k;
      d_second = d;
    }
  }
  return {best, second};
}

std::vector<double> solve_pair(const EstimatedMatrix& est, BasePair pair, double x1, double x2) {
  const std::size_t n = est.n_sources();
  if (pair.i == pair.j || pair.i >= n || pair.j >= n) {
    throw DimensionError("solve: invalid column pair (" + std::to_string(pair.i) + ", " +
                         std::to_string(pair.j) + ")");
  }
  const double ai = est.ratio(pair.i);
  const double aj = est.ratio(pair.j);
  const double det = aj - ai;
  if (std::abs(det) < kDegeneratePairTolerance) {
    throw NumericError("solve: degenerate pair, columns " + std::to_string(pair.i + 1) + " and " +
                       std::to_string(pair.j + 1));
  }
  std::vector<double> s(n, 0.0);
  const double ri = aj * x1 - x2;
  const double rj = x2 - ai * x1;
  // A sample lying on a column direction gets an exact zero partner.
  if (std::abs(rj) <= kSingleColumnTolerance * (std::abs(x2) + std::abs(ai * x1))) {
    s[pair.i] = x1;
  } else if (std::abs(ri) <= kSingleColumnTolerance * (std::abs(x2) + std::abs(aj * x1))) {
    s[pair.j] = x1;
  } else {
    s[pair.i] = ri / det;
    s[pair.j] = rj / det;
  }
  return s;
}

double default_separation_activity(const SignalMatrix& mixtures) {
  double peak = 0.0;
  for (double v : mixtures.data()) peak = std::max(peak, std::abs(v));
  return peak > 0.0 ? kDefaultRelativeActivity * peak : kDefaultRelativeActivity;
}

SeparationTrace separate_with_trace(const SignalMatrix& mixtures, const EstimatedMatrix& est,
                                    double activity_eps) {
  if (mixtures.cols() != 2) {
    throw DimensionError("separation requires exactly 2 mixture channels, got " +
                         std::to_string(mixtures.cols()));
  }
  if (est.n_sources() < 2) throw DimensionError("separate: insufficient columns");
  if (!(activity_eps >= 0.0)) throw ConfigError("activity threshold must be non-negative");

  const AngleSet angles(est);
  SeparationTrace trace{SignalMatrix(mixtures.rows(), est.n_sources()),
                        std::vector<std::optional<BasePair>>(mixtures.rows())};
  for (std::size_t t = 0; t < mixtures.rows(); ++t) {
    const double x1 = mixtures(t, 0);
    const double x2 = mixtures(t, 1);
    const auto theta = sample_angle(x1, x2, activity_eps);
    if (!theta) continue;
    try {
      const BasePair pair = select_base_pair(*theta, angles);
      const auto s = solve_pair(est, pair, x1, x2);
      std::copy(s.begin(), s.end(), trace.estimates.row(t).begin());
      trace.pairs[t] = pair;
    } catch (const Error& e) {
      throw NumericError("separate: sample " + std::to_string(t + 1) + ": " + e.what());
    }
  }
  return trace;
}

SignalMatrix separate(const SignalMatrix& mixtures, const EstimatedMatrix& est,
                      double activity_eps) {
  return separate_with_trace(mixtures, est, activity_eps).estimates;
}

SignalMatrix separate(const SignalMatrix& mixtures, const EstimatedMatrix& est) {
  return separate(mixtures, est, default_separation_activity(mixtures));
}

}  // namespace ubss
