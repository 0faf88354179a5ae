#include "ubss/pipeline.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ubss/csv_io.hpp"
#include "ubss/recovery.hpp"
#include "ubss/signal_gen.hpp"
#include "ubss/svg_plot.hpp"

namespace ubss {
namespace {

namespace fs = std::filesystem;

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<std::string> labels(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(prefix + std::to_string(k + 1));
  return out;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

template <class F>
auto in_stage(const char* name, F&& body) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e.what());
  }
}

}  // namespace

StageOptions StageOptions::from(const ExperimentConfig& cfg) {
  return {cfg.quantum, cfg.peak_fraction, cfg.top_k, cfg.activity_eps};
}

void stage_generate(const ExperimentConfig& cfg, const fs::path& dir) {
  ensure_dir(dir);
  const SignalMatrix sources = generate_sources(cfg.th_uwb, cfg.pulses);
  write_signal_csv(dir / files::kSources, sources, "s");
  write_text(dir / files::kSourcesPlot,
             svg::waveforms(sources, "source signals", labels("s", sources.cols())));
}

void stage_mix(const MixingMatrix& a, const fs::path& dir) {
  const SignalMatrix sources = read_signal_csv(dir / files::kSources);
  const SignalMatrix mixtures = mix(sources, a);
  write_signal_csv(dir / files::kMixtures, mixtures, "x");
  write_text(dir / files::kMixturesPlot,
             svg::waveforms(mixtures, "mixed signals", labels("x", mixtures.cols())));
}

EstimatedMatrix stage_estimate(const StageOptions& opts, const fs::path& dir) {
  const SignalMatrix mixtures = read_signal_csv(dir / files::kMixtures);
  const auto ratios = opts.activity_eps ? compute_ratios(mixtures, *opts.activity_eps)
                                        : compute_ratios(mixtures);
  const RatioHistogram hist = build_histogram(ratios, opts.quantum);
  export_bar_graph(hist, dir / files::kHistogram);
  write_text(dir / files::kHistogramPlot, svg::bar_graph(hist, "mixture ratio occurrences"));
  const EstimatedMatrix est = estimate_mixing(hist, {opts.peak_fraction, opts.top_k});
  write_estimated_matrix_csv(dir / files::kEstimatedMatrix, est);
  return est;
}

void stage_separate(const StageOptions& opts, const fs::path& dir) {
  const SignalMatrix mixtures = read_signal_csv(dir / files::kMixtures);
  const EstimatedMatrix est = read_estimated_matrix_csv(dir / files::kEstimatedMatrix);
  const SignalMatrix separated = opts.activity_eps ? separate(mixtures, est, *opts.activity_eps)
                                                   : separate(mixtures, est);
  write_signal_csv(dir / files::kSeparated, separated, "y");
  write_text(dir / files::kSeparatedPlot,
             svg::waveforms(separated, "separated signals", labels("y", separated.cols())));
}

SeparationReport stage_score(const fs::path& dir) {
  const SignalMatrix truth = read_signal_csv(dir / files::kSources);
  const SignalMatrix separated = read_signal_csv(dir / files::kSeparated);
  SeparationReport report = align_and_score(truth, separated);
  write_report_csv(dir / files::kReport, report);
  return report;
}

ExperimentSummary run_experiment(const ExperimentConfig& cfg) {
  in_stage("config", [&] { cfg.validate(); });
  const fs::path dir = cfg.output_dir;
  const StageOptions opts = StageOptions::from(cfg);
  in_stage("generate", [&] { stage_generate(cfg, dir); });
  in_stage("mix", [&] { stage_mix(cfg.mixing, dir); });
  ExperimentSummary summary;
  summary.estimate = in_stage("estimate", [&] { return stage_estimate(opts, dir); });
  in_stage("separate", [&] { stage_separate(opts, dir); });
  summary.report = in_stage("score", [&] { return stage_score(dir); });
  return summary;
}

std::string format_summary(const ExperimentSummary& summary) {
  std::ostringstream os;
  char buf[64];
  os << "estimated sources: " << summary.estimate.n_sources() << '\n';
  os << "estimated ratios:";
  for (double r : summary.estimate.ratios()) {
    std::snprintf(buf, sizeof buf, " %.4f", r);
    os << buf;
  }
  os << '\n';
  for (const auto& m : summary.report.matches) {
    std::snprintf(buf, sizeof buf, "%.4f", m.correlation);
    os << "  y" << (m.estimate_idx + 1) << " <-> s" << (m.true_idx + 1) << "  C = " << buf << '\n';
  }
  return os.str();
}

}  // namespace ubss
