#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ubss/eval.hpp"
#include "ubss/matrix_est.hpp"
#include "ubss/signal_matrix.hpp"

namespace ubss {

/// Signals are stored one column per channel, one row per sample, behind a
/// header row `<prefix>1,<prefix>2,...`. Values use 17 significant digits so
/// that files round-trip exactly.
void write_signal_csv(const std::filesystem::path& path, const SignalMatrix& m,
                      const std::string& column_prefix);

/// Reads a signal file written by write_signal_csv (any header names). Errors
/// carry the path and the 1-based file line.
SignalMatrix read_signal_csv(const std::filesystem::path& path);

/// The estimated matrix as its two rows: ones over the detected ratios.
void write_estimated_matrix_csv(const std::filesystem::path& path, const EstimatedMatrix& est);

/// Validates the row of ones and distinct ratios.
EstimatedMatrix read_estimated_matrix_csv(const std::filesystem::path& path);

/// `estimate_idx,true_idx,correlation`, 1-based indices.
void write_report_csv(const std::filesystem::path& path, const SeparationReport& report);

/// Shortest text for a double at 17 significant digits.
std::string format_full(double v);

}  // namespace ubss
