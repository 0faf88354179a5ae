#include "ubss/signal_gen.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "ubss/error.hpp"

namespace ubss {
namespace {

// Derivative of order 0..2 of exp(-2*pi*u^2) with respect to u.
double bell_derivative(int order, double u) {
  constexpr double c = 2.0 * std::numbers::pi;
  const double g = std::exp(-c * u * u);
  switch (order) {
    case 0:
      return g;
    case 1:
      return -2.0 * c * u * g;
    case 2:
      return (4.0 * c * c * u * u - 2.0 * c) * g;
    default:
      throw ConfigError("pulse: order must be 0, 1 or 2, got " + std::to_string(order));
  }
}

double raw_pulse(int order, int width, int t_rel) {
  const double center = (width - 1) / 2.0;
  const double u = (t_rel - center) / (width / 4.0);
  return bell_derivative(order, u);
}

double peak_abs(int order, int width) {
  double peak = 0.0;
  for (int t = 0; t < width; ++t) peak = std::max(peak, std::abs(raw_pulse(order, width, t)));
  return peak;
}

// splitmix64 finalizer, used to derive independent per-source seeds.
std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Portable draws: the standard distributions are implementation-defined,
// so map raw engine output directly.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return static_cast<std::size_t>(v % n);
}

}  // namespace

void PulseSpec::validate() const {
  if (order < 0 || order > 2) {
    throw ConfigError("pulse: order must be 0, 1 or 2, got " + std::to_string(order));
  }
  if (width_samples < 1) throw ConfigError("pulse: width must be at least one sample");
  if (!std::isfinite(amplitude) || amplitude == 0.0) {
    throw ConfigError("pulse: amplitude must be finite and nonzero");
  }
}

int ThUwbConfig::frame_phase(int source) const noexcept {
  return source * (chip_len / n_sources);
}

void ThUwbConfig::validate() const {
  if (chip_len < 1) throw ConfigError("th-uwb: chip length must be positive");
  if (frame_len < chip_len || frame_len % chip_len != 0) {
    throw ConfigError("th-uwb: frame length must be a positive multiple of the chip length");
  }
  if (total_len < frame_len) throw ConfigError("th-uwb: total length shorter than one frame");
  if (n_sources < 1) throw ConfigError("th-uwb: need at least one source");
  if (!(occupancy >= 0.0 && occupancy <= 1.0)) {
    throw ConfigError("th-uwb: occupancy must lie in [0, 1]");
  }
}

double gaussian_pulse(const PulseSpec& spec, int t_rel) {
  spec.validate();
  if (t_rel < 0 || t_rel >= spec.width_samples) {
    throw ConfigError("pulse: offset " + std::to_string(t_rel) + " outside [0, " +
                      std::to_string(spec.width_samples) + ")");
  }
  return spec.amplitude * raw_pulse(spec.order, spec.width_samples, t_rel) /
         peak_abs(spec.order, spec.width_samples);
}

std::vector<double> pulse_shape(const PulseSpec& spec) {
  spec.validate();
  const double scale = spec.amplitude / peak_abs(spec.order, spec.width_samples);
  std::vector<double> out(spec.width_samples);
  for (int t = 0; t < spec.width_samples; ++t) {
    out[t] = scale * raw_pulse(spec.order, spec.width_samples, t);
  }
  return out;
}

SourceTrain generate_source_train(const ThUwbConfig& cfg, std::span<const PulseSpec> pulses) {
  cfg.validate();
  if (pulses.size() != static_cast<std::size_t>(cfg.n_sources)) {
    throw ConfigError("th-uwb: expected " + std::to_string(cfg.n_sources) + " pulse specs, got " +
                      std::to_string(pulses.size()));
  }
  for (const auto& p : pulses) {
    p.validate();
    if (p.width_samples > cfg.chip_len) {
      throw ConfigError("th-uwb: pulse width " + std::to_string(p.width_samples) +
                        " exceeds chip length " + std::to_string(cfg.chip_len));
    }
  }

  const int total = cfg.total_len;
  const int chips = cfg.chips_per_frame();
  SourceTrain out{SignalMatrix(total, cfg.n_sources), {}};
  std::vector<int> coverage(total, 0);
  struct Span {
    int begin, end;
  };
  std::vector<Span> placed;

  for (int k = 0; k < cfg.n_sources; ++k) {
    std::mt19937_64 rng(mix_seed(cfg.seed ^ mix_seed(static_cast<std::uint64_t>(k))));
    const std::vector<double> shape = pulse_shape(pulses[k]);
    const int width = pulses[k].width_samples;
    // The pulse sits centered in its chip.
    const int lead = (cfg.chip_len - width) / 2;
    const int phase = cfg.frame_phase(k);

    for (int frame_start = phase; frame_start < total; frame_start += cfg.frame_len) {
      // Fixed number of draws per frame keeps the stream aligned across modes.
      const bool emit = uniform01(rng) < cfg.occupancy;
      const std::uint64_t chip_draw = rng();
      const double sign = (rng() & 1U) ? 1.0 : -1.0;
      if (!emit) continue;

      std::vector<int> allowed;
      for (int c = 0; c < chips; ++c) {
        const int start = frame_start + c * cfg.chip_len + lead;
        if (start + width > total) continue;
        if (cfg.overlap == OverlapMode::at_most_two) {
          bool rejected = false;
          for (int t = start; t < start + width && !rejected; ++t) rejected = coverage[t] >= 2;
          for (const Span& other : placed) {
            const int shared = std::min(other.end, start + width) - std::max(other.begin, start);
            if (2 * shared > std::min(width, other.end - other.begin)) rejected = true;
          }
          if (rejected) continue;
        }
        allowed.push_back(c);
      }
      if (allowed.empty()) continue;

      int chip;
      if (static_cast<int>(allowed.size()) == chips) {
        chip = static_cast<int>(chip_draw % static_cast<std::uint64_t>(chips));
      } else {
        chip = allowed[uniform_index(rng, allowed.size())];
      }
      const int chip_start = frame_start + chip * cfg.chip_len;
      const int start = chip_start + lead;
      for (int t = 0; t < width; ++t) {
        out.samples(start + t, k) = sign * shape[t];
        ++coverage[start + t];
      }
      placed.push_back({start, start + width});
      out.pulses.push_back({k, start, chip_start, sign});
    }
  }
  return out;
}

SignalMatrix generate_sources(const ThUwbConfig& cfg, std::span<const PulseSpec> pulses) {
  return generate_source_train(cfg, pulses).samples;
}

SignalMatrix mix(const SignalMatrix& sources, const MixingMatrix& a) {
  if (sources.cols() != a.n_sources()) {
    throw DimensionError("mix: sources have " + std::to_string(sources.cols()) +
                         " columns but the mixing matrix has " + std::to_string(a.n_sources()));
  }
  SignalMatrix out(sources.rows(), a.n_mixtures());
  for (std::size_t t = 0; t < sources.rows(); ++t) {
    const auto s = sources.row(t);
    for (std::size_t m = 0; m < a.n_mixtures(); ++m) {
      double acc = 0.0;
      for (std::size_t n = 0; n < a.n_sources(); ++n) acc += a(m, n) * s[n];
      out(t, m) = acc;
    }
  }
  return out;
}

}  // namespace ubss
