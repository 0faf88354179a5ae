#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ubss/signal_gen.hpp"
#include "ubss/signal_matrix.hpp"

namespace ubss {

/// Full description of one experiment run.
///
/// Text format: `[section]` headers, `key = value` lines, `#` or `;` comments.
///
///   [source]      chip_len, frame_len, total_len, n_sources, seed,
///                 occupancy, overlap_mode (at_most_two | allow_three)
///   [pulses]      orders, widths, amplitudes (comma lists; a single value
///                 applies to every source)
///   [mixing]      matrix = r11, r12, ...; r21, r22, ...   or   matrix = random
///                 with mixing_seed and n_mixtures
///   [estimation]  quantum, peak_fraction, top_k, activity_eps (number or auto)
///   [output]      dir
struct ExperimentConfig {
  ThUwbConfig th_uwb{};
  std::vector<PulseSpec> pulses;
  MixingMatrix mixing;
  double quantum = 1e-4;
  double peak_fraction = 0.1;
  std::size_t top_k = 0;
  /// Absolute threshold; nullopt selects the relative default.
  std::optional<double> activity_eps;
  std::filesystem::path output_dir = "out";

  /// Checks the generator, pulse and two-channel mixing invariants.
  void validate() const;
};

/// Parses config text; `origin` names the source in error messages.
ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<config>");

ExperimentConfig load_config(const std::filesystem::path& path);

/// Parses `r11, r12; r21, r22` into a matrix.
MixingMatrix parse_matrix(const std::string& text);

/// Random M x N mixing matrix with entries in [0.1, 1] at four decimals.
/// For M = 2 the column angles are kept at least 0.05 rad apart.
MixingMatrix random_mixing_matrix(std::size_t m, std::size_t n, std::uint64_t seed);

/// Experiment presets mirroring the two published setups.
ExperimentConfig experiment1_config();
ExperimentConfig experiment2_config();

}  // namespace ubss
