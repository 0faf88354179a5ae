#include "ubss/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "ubss/error.hpp"

namespace ubss {
namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double to_double(const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || ptr != end) throw ConfigError("not a number: '" + s + "'");
  return v;
}

long long to_integer(const std::string& s) {
  long long v = 0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || ptr != end) throw ConfigError("not an integer: '" + s + "'");
  return v;
}

int to_int(const std::string& s) {
  const long long v = to_integer(s);
  if (v < INT32_MIN || v > INT32_MAX) throw ConfigError("integer out of range: '" + s + "'");
  return static_cast<int>(v);
}

std::uint64_t to_unsigned(const std::string& s) {
  std::uint64_t v = 0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || ptr != end) {
    throw ConfigError("not an unsigned integer: '" + s + "'");
  }
  return v;
}

template <class T, class F>
std::vector<T> list_of(const std::string& s, F convert) {
  std::vector<T> out;
  for (const auto& item : split(s, ',')) out.push_back(convert(item));
  return out;
}

// Expands a single value to n copies; otherwise requires exactly n.
template <class T>
std::vector<T> per_source(std::vector<T> v, std::size_t n, const std::string& what) {
  if (v.size() == 1) return std::vector<T>(n, v.front());
  if (v.size() != n) {
    throw ConfigError(what + ": expected 1 or " + std::to_string(n) + " values, got " +
                      std::to_string(v.size()));
  }
  return v;
}

struct Entry {
  std::string value;
  std::size_t line;
};

}  // namespace

void ExperimentConfig::validate() const {
  th_uwb.validate();
  if (pulses.size() != static_cast<std::size_t>(th_uwb.n_sources)) {
    throw ConfigError("config: " + std::to_string(pulses.size()) + " pulses for " +
                      std::to_string(th_uwb.n_sources) + " sources");
  }
  for (const auto& p : pulses) {
    p.validate();
    if (p.width_samples > th_uwb.chip_len) throw ConfigError("config: pulse wider than chip");
  }
  if (mixing.n_sources() != static_cast<std::size_t>(th_uwb.n_sources)) {
    throw ConfigError("config: mixing matrix has " + std::to_string(mixing.n_sources()) +
                      " columns for " + std::to_string(th_uwb.n_sources) + " sources");
  }
  if (mixing.n_mixtures() != 2) {
    throw ConfigError("config: estimation requires exactly 2 mixture channels, mixing matrix has " +
                      std::to_string(mixing.n_mixtures()));
  }
  mixing.validate();
  if (!(quantum > 0.0)) throw ConfigError("config: quantum must be positive");
  if (top_k == 0 && !(peak_fraction > 0.0 && peak_fraction < 1.0)) {
    throw ConfigError("config: peak_fraction must lie in (0, 1)");
  }
  if (activity_eps && !(*activity_eps > 0.0)) {
    throw ConfigError("config: activity_eps must be positive");
  }
}

MixingMatrix parse_matrix(const std::string& text) {
  std::vector<std::vector<double>> rows;
  for (const auto& row : split(text, ';')) {
    if (row.empty()) continue;
    rows.push_back(list_of<double>(row, to_double));
  }
  return MixingMatrix(rows);
}

MixingMatrix random_mixing_matrix(std::size_t m, std::size_t n, std::uint64_t seed) {
  if (m == 0 || n == 0) throw ConfigError("random mixing: empty shape");
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<std::vector<double>> rows(m, std::vector<double>(n));
    for (auto& r : rows) {
      // 1000..10000 ten-thousandths, i.e. [0.1, 1] at four decimals.
      for (auto& v : r) v = static_cast<double>(1000 + rng() % 9001) / 10000.0;
    }
    MixingMatrix a(rows);
    try {
      a.validate();
    } catch (const ConfigError&) {
      continue;
    }
    bool separated = true;
    if (m == 2) {
      for (std::size_t i = 0; i < n && separated; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          if (std::abs(std::atan(a.column_ratio(i)) - std::atan(a.column_ratio(j))) < 0.05) {
            separated = false;
            break;
          }
        }
      }
    }
    if (separated) return a;
  }
  throw ConfigError("random mixing: could not draw a well-separated matrix");
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  std::map<std::string, Entry> entries;
  std::istringstream is(text);
  std::string raw;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    std::string line = raw;
    if (const auto c = line.find_first_of("#;"); c != std::string::npos) {
      // ';' separates matrix rows, so it only starts a comment at line start.
      if (line[c] == '#' || trim(line.substr(0, c)).empty()) line = line.substr(0, c);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto where = origin + ":" + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    if (section.empty()) throw ConfigError(where + ": key outside of a section");
    const std::string key = section + "." + trim(line.substr(0, eq));
    if (entries.count(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
    entries[key] = {trim(line.substr(eq + 1)), line_no};
  }

  ExperimentConfig cfg = experiment1_config();
  auto take = [&](const std::string& key) -> std::optional<Entry> {
    auto it = entries.find(key);
    if (it == entries.end()) return std::nullopt;
    Entry e = it->second;
    entries.erase(it);
    return e;
  };
  // Converts with line context on failure.
  auto with_line = [&](const Entry& e, auto&& fn) {
    try {
      return fn(e.value);
    } catch (const ConfigError& err) {
      throw ConfigError(origin + ":" + std::to_string(e.line) + ": " + err.what());
    }
  };

  auto& src = cfg.th_uwb;
  if (auto e = take("source.chip_len")) src.chip_len = with_line(*e, to_int);
  if (auto e = take("source.frame_len")) src.frame_len = with_line(*e, to_int);
  if (auto e = take("source.total_len")) src.total_len = with_line(*e, to_int);
  if (auto e = take("source.n_sources")) src.n_sources = with_line(*e, to_int);
  if (auto e = take("source.seed")) src.seed = with_line(*e, to_unsigned);
  if (auto e = take("source.occupancy")) src.occupancy = with_line(*e, to_double);
  if (auto e = take("source.overlap_mode")) {
    src.overlap = with_line(*e, [](const std::string& v) {
      if (v == "at_most_two") return OverlapMode::at_most_two;
      if (v == "allow_three") return OverlapMode::allow_three;
      throw ConfigError("overlap_mode must be at_most_two or allow_three, got '" + v + "'");
    });
  }

  const auto n = static_cast<std::size_t>(std::max(src.n_sources, 1));
  // Default family: orders cycle 0, 1, 2; pulses fill a chip; unit amplitude.
  std::vector<int> orders(n), widths(n, src.chip_len);
  std::vector<double> amplitudes(n, 1.0);
  for (std::size_t k = 0; k < n; ++k) orders[k] = static_cast<int>(k % 3);
  if (auto e = take("pulses.orders")) {
    orders = with_line(*e, [&](const std::string& v) {
      return per_source(list_of<int>(v, to_int), n, "orders");
    });
  }
  if (auto e = take("pulses.widths")) {
    widths = with_line(*e, [&](const std::string& v) {
      return per_source(list_of<int>(v, to_int), n, "widths");
    });
  }
  if (auto e = take("pulses.amplitudes")) {
    amplitudes = with_line(*e, [&](const std::string& v) {
      return per_source(list_of<double>(v, to_double), n, "amplitudes");
    });
  }
  if (orders.size() != n || widths.size() != n || amplitudes.size() != n) {
    throw ConfigError(origin + ": [pulses] must describe " + std::to_string(n) + " sources");
  }
  cfg.pulses.clear();
  for (std::size_t k = 0; k < n; ++k) cfg.pulses.push_back({orders[k], widths[k], amplitudes[k]});

  const auto mixing_seed = take("mixing.mixing_seed");
  const auto n_mixtures = take("mixing.n_mixtures");
  if (auto e = take("mixing.matrix")) {
    if (e->value == "random") {
      const std::uint64_t seed = mixing_seed ? with_line(*mixing_seed, to_unsigned) : 0;
      const int m = n_mixtures ? with_line(*n_mixtures, to_int) : 2;
      if (m < 1) throw ConfigError(origin + ": n_mixtures must be positive");
      cfg.mixing = with_line(*e, [&](const std::string&) {
        return random_mixing_matrix(static_cast<std::size_t>(m), n, seed);
      });
    } else {
      cfg.mixing = with_line(*e, parse_matrix);
    }
  }

  if (auto e = take("estimation.quantum")) cfg.quantum = with_line(*e, to_double);
  if (auto e = take("estimation.peak_fraction")) cfg.peak_fraction = with_line(*e, to_double);
  if (auto e = take("estimation.top_k")) {
    cfg.top_k = static_cast<std::size_t>(with_line(*e, to_unsigned));
  }
  if (auto e = take("estimation.activity_eps")) {
    if (e->value == "auto") {
      cfg.activity_eps.reset();
    } else {
      cfg.activity_eps = with_line(*e, to_double);
    }
  }
  if (auto e = take("output.dir")) cfg.output_dir = e->value;

  if (!entries.empty()) {
    const auto& [key, e] = *entries.begin();
    throw ConfigError(origin + ":" + std::to_string(e.line) + ": unknown key '" + key + "'");
  }
  try {
    cfg.validate();
  } catch (const ConfigError& err) {
    throw ConfigError(origin + ": " + err.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

ExperimentConfig experiment1_config() {
  ExperimentConfig cfg;
  cfg.th_uwb = ThUwbConfig{161, 644, 2898, 3, 2, 1.0, OverlapMode::at_most_two};
  cfg.pulses = {{0, 161, 1.0}, {1, 161, 1.0}, {2, 161, 1.0}};
  cfg.mixing = MixingMatrix({{0.4, 0.6, 0.3}, {0.8, 0.1, 0.5}});
  cfg.output_dir = "out/experiment1";
  return cfg;
}

ExperimentConfig experiment2_config() {
  ExperimentConfig cfg = experiment1_config();
  cfg.th_uwb.overlap = OverlapMode::allow_three;
  cfg.mixing = MixingMatrix({{0.5, 0.4, 0.3}, {0.9, 0.2, 0.6}});
  cfg.output_dir = "out/experiment2";
  return cfg;
}

}  // namespace ubss
