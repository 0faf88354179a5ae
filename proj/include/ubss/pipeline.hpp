#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ubss/config.hpp"
#include "ubss/error.hpp"
#include "ubss/eval.hpp"
#include "ubss/matrix_est.hpp"

namespace ubss {

/// File names shared by the stages inside one output directory.
namespace files {
inline constexpr const char* kSources = "sources.csv";
inline constexpr const char* kMixtures = "mixtures.csv";
inline constexpr const char* kHistogram = "histogram.csv";
inline constexpr const char* kEstimatedMatrix = "estimated_matrix.csv";
inline constexpr const char* kSeparated = "separated.csv";
inline constexpr const char* kReport = "report.csv";
inline constexpr const char* kSourcesPlot = "sources.svg";
inline constexpr const char* kMixturesPlot = "mixtures.svg";
inline constexpr const char* kHistogramPlot = "histogram.svg";
inline constexpr const char* kSeparatedPlot = "separated.svg";
}  // namespace files

/// Tunables for the estimation and separation stages.
struct StageOptions {
  double quantum = 1e-4;
  double peak_fraction = 0.1;
  std::size_t top_k = 0;
  std::optional<double> activity_eps;

  static StageOptions from(const ExperimentConfig& cfg);
};

/// sources.csv and sources.svg.
void stage_generate(const ExperimentConfig& cfg, const std::filesystem::path& dir);

/// Reads sources.csv; writes mixtures.csv and mixtures.svg.
void stage_mix(const MixingMatrix& a, const std::filesystem::path& dir);

/// Reads mixtures.csv; writes histogram.csv, estimated_matrix.csv and
/// histogram.svg.
EstimatedMatrix stage_estimate(const StageOptions& opts, const std::filesystem::path& dir);

/// Reads mixtures.csv and estimated_matrix.csv; writes separated.csv and
/// separated.svg.
void stage_separate(const StageOptions& opts, const std::filesystem::path& dir);

/// Reads sources.csv and separated.csv; writes report.csv.
SeparationReport stage_score(const std::filesystem::path& dir);

struct ExperimentSummary {
  EstimatedMatrix estimate{std::vector<double>{0.0}};
  SeparationReport report;
};

/// Every stage in order inside cfg.output_dir. Stage failures are rethrown
/// as StageError naming the stage.
ExperimentSummary run_experiment(const ExperimentConfig& cfg);

class StageError : public Error {
 public:
  StageError(const std::string& stage, const std::string& what)
      : Error(stage + ": " + what), stage_(stage) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

/// Human-readable summary: source count, ratios, correlations.
std::string format_summary(const ExperimentSummary& summary);

}  // namespace ubss
