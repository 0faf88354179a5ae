#pragma once

#include <string>
#include <vector>

#include "ubss/matrix_est.hpp"
#include "ubss/signal_matrix.hpp"

namespace ubss::svg {

/// One stacked panel per column, each a polyline over the sample index.
std::string waveforms(const SignalMatrix& m, const std::string& title,
                      const std::vector<std::string>& labels);

/// Bar per histogram bin, x = ratio, height = count.
std::string bar_graph(const RatioHistogram& hist, const std::string& title);

}  // namespace ubss::svg
