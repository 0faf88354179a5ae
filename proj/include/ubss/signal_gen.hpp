#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ubss/signal_matrix.hpp"

namespace ubss {

/// One member of the Gaussian pulse family: the `order`-th derivative of a
/// Gaussian bell, sampled over `width_samples` points and peak-normalized.
struct PulseSpec {
  int order = 0;
  int width_samples = 1;
  double amplitude = 1.0;

  void validate() const;
};

/// How pulses of different sources are allowed to coincide in time.
enum class OverlapMode {
  /// Frames of all sources share one chip grid; chip choices are independent,
  /// so any number of sources may be active at the same sample.
  allow_three,
  /// Frame phases are staggered per source and chip choices that would put a
  /// third pulse support on an already doubly-covered sample are redrawn.
  at_most_two,
};

/// Time-hopping ultra-wideband source configuration. Lengths in samples.
struct ThUwbConfig {
  int chip_len = 161;
  int frame_len = 644;
  int total_len = 2898;
  int n_sources = 3;
  std::uint64_t seed = 1;
  /// Probability that a frame carries a pulse.
  double occupancy = 1.0;
  OverlapMode overlap = OverlapMode::allow_three;

  int chips_per_frame() const noexcept { return frame_len / chip_len; }
  /// Offset of source k's frame grid from sample 0.
  int frame_phase(int source) const noexcept;
  void validate() const;
};

/// Value of the pulse at integer offset `t_rel` in [0, width). The bell is
/// exp(-2*pi*u^2) with u = (t_rel - (width-1)/2) / (width/4); the derivative
/// is scaled so that the largest absolute sample equals `amplitude`.
double gaussian_pulse(const PulseSpec& spec, int t_rel);

/// All `width_samples` values of the pulse.
std::vector<double> pulse_shape(const PulseSpec& spec);

/// One emitted pulse, for inspection and tests.
struct PulsePlacement {
  int source = 0;
  int start = 0;  ///< first sample of the pulse support
  int chip_start = 0;  ///< first sample of the chip that contains it
  double sign = 1.0;
};

struct SourceTrain {
  SignalMatrix samples;  ///< T x N
  std::vector<PulsePlacement> pulses;
};

/// Sparse TH-UWB pulse trains, one column per source. Deterministic in
/// (cfg, pulses); samples outside pulse supports are exactly zero.
SourceTrain generate_source_train(const ThUwbConfig& cfg, std::span<const PulseSpec> pulses);

SignalMatrix generate_sources(const ThUwbConfig& cfg, std::span<const PulseSpec> pulses);

/// Instantaneous noiseless mixture x(t) = A s(t). Returns T x M.
SignalMatrix mix(const SignalMatrix& sources, const MixingMatrix& a);

}  // namespace ubss
