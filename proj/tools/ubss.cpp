// Command-line front end: full experiment runs and individual pipeline stages.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ubss/config.hpp"
#include "ubss/csv_io.hpp"
#include "ubss/error.hpp"
#include "ubss/pipeline.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<double> quantum;
  std::optional<double> peak_fraction;
  std::optional<double> activity_eps;
  std::optional<std::size_t> top_k;
  std::string out_dir;
  std::string matrix;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--seed", f.seed, "Generator seed (overrides UBSS_SEED and the config)");
  cmd->add_option("--quantum", f.quantum, "Ratio rounding step");
  cmd->add_option("--peak-fraction", f.peak_fraction, "Mode threshold relative to the tallest bin");
  cmd->add_option("--activity-eps", f.activity_eps, "Absolute activity threshold");
  cmd->add_option("--top-k", f.top_k, "Keep exactly this many modes");
  cmd->add_option("--out-dir", f.out_dir, "Directory holding stage inputs and outputs");
}

// Config file (or the first preset), then UBSS_SEED, then flags.
ubss::ExperimentConfig resolve(const CommonFlags& f) {
  ubss::ExperimentConfig cfg =
      f.config.empty() ? ubss::experiment1_config() : ubss::load_config(f.config);
  if (const char* env = std::getenv("UBSS_SEED"); env && *env) {
    try {
      cfg.th_uwb.seed = std::stoull(env);
    } catch (const std::exception&) {
      throw ubss::ConfigError(std::string("UBSS_SEED is not an unsigned integer: ") + env);
    }
  }
  if (f.seed) cfg.th_uwb.seed = *f.seed;
  if (f.quantum) cfg.quantum = *f.quantum;
  if (f.peak_fraction) cfg.peak_fraction = *f.peak_fraction;
  if (f.activity_eps) cfg.activity_eps = *f.activity_eps;
  if (f.top_k) cfg.top_k = *f.top_k;
  if (!f.out_dir.empty()) cfg.output_dir = f.out_dir;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Underdetermined blind source separation of sparse signals"};
  app.require_subcommand(1);
  CommonFlags flags;

  auto* run = app.add_subcommand("run", "Run the full experiment described by a config file");
  run->add_option("config", flags.config, "Experiment config file")->required();
  add_common(run, flags);

  auto* generate = app.add_subcommand("generate", "Write sources.csv");
  auto* mix = app.add_subcommand("mix", "sources.csv -> mixtures.csv");
  auto* estimate = app.add_subcommand("estimate", "mixtures.csv -> histogram.csv, estimated_matrix.csv");
  auto* separate = app.add_subcommand("separate", "mixtures.csv + estimated_matrix.csv -> separated.csv");
  auto* score = app.add_subcommand("score", "sources.csv + separated.csv -> report.csv");
  for (auto* cmd : {generate, mix, estimate, separate, score}) {
    cmd->add_option("--config", flags.config, "Experiment config file");
    add_common(cmd, flags);
  }
  mix->add_option("--matrix", flags.matrix, "Mixing matrix 'a11,a12;a21,a22' (overrides config)");

  CLI11_PARSE(app, argc, argv);

  try {
    const ubss::ExperimentConfig cfg = resolve(flags);
    const auto dir = cfg.output_dir;
    const auto opts = ubss::StageOptions::from(cfg);
    if (run->parsed()) {
      const auto summary = ubss::run_experiment(cfg);
      std::cout << ubss::format_summary(summary) << "artifacts in " << dir.string() << '\n';
    } else if (generate->parsed()) {
      ubss::stage_generate(cfg, dir);
    } else if (mix->parsed()) {
      ubss::stage_mix(flags.matrix.empty() ? cfg.mixing : ubss::parse_matrix(flags.matrix), dir);
    } else if (estimate->parsed()) {
      const auto est = ubss::stage_estimate(opts, dir);
      std::cout << "estimated sources: " << est.n_sources() << '\n';
    } else if (separate->parsed()) {
      ubss::stage_separate(opts, dir);
    } else if (score->parsed()) {
      const auto report = ubss::stage_score(dir);
      for (const auto& m : report.matches) {
        std::cout << "y" << (m.estimate_idx + 1) << " <-> s" << (m.true_idx + 1)
                  << "  C = " << ubss::format_full(m.correlation) << '\n';
      }
    }
  } catch (const ubss::Error& e) {
    std::cerr << "ubss: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
