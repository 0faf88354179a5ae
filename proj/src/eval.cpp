#include "ubss/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ubss/error.hpp"

namespace ubss {
namespace {

double mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

bool has_variance(std::span<const double> v) {
  return std::any_of(v.begin(), v.end(), [&](double x) { return x != v.front(); });
}

// Correlation table with nullopt wherever either side is constant.
using Table = std::vector<std::vector<std::optional<double>>>;

Table correlation_table(const std::vector<std::vector<double>>& truth,
                        const std::vector<std::vector<double>>& est) {
  Table table(est.size(), std::vector<std::optional<double>>(truth.size()));
  for (std::size_t e = 0; e < est.size(); ++e) {
    if (!has_variance(est[e])) continue;
    for (std::size_t k = 0; k < truth.size(); ++k) {
      if (has_variance(truth[k])) table[e][k] = correlation(truth[k], est[e]);
    }
  }
  return table;
}

double weight(const std::optional<double>& c) { return c ? std::abs(*c) : -1.0; }

// Assignment of estimates to truths; -1 marks unmatched estimates.
std::vector<int> greedy_assignment(const Table& table, std::size_t n_true) {
  const std::size_t n_est = table.size();
  std::vector<int> assign(n_est, -1);
  std::vector<bool> used(n_true, false);
  const std::size_t pairs = std::min(n_est, n_true);
  for (std::size_t step = 0; step < pairs; ++step) {
    double best = -2.0;
    std::size_t be = 0, bk = 0;
    for (std::size_t e = 0; e < n_est; ++e) {
      if (assign[e] >= 0) continue;
      for (std::size_t k = 0; k < n_true; ++k) {
        if (used[k]) continue;
        if (weight(table[e][k]) > best) {
          best = weight(table[e][k]);
          be = e;
          bk = k;
        }
      }
    }
    assign[be] = static_cast<int>(bk);
    used[bk] = true;
  }
  return assign;
}

void exhaustive_search(const Table& table, std::size_t n_true, std::size_t e,
                       std::vector<int>& current, std::vector<bool>& used, std::size_t matched,
                       double score, std::vector<int>& best, double& best_score) {
  const std::size_t n_est = table.size();
  const std::size_t target = std::min(n_est, n_true);
  if (e == n_est) {
    if (matched == target && score > best_score) {
      best_score = score;
      best = current;
    }
    return;
  }
  // Skipping is only allowed while enough estimates remain to reach the target.
  if (n_est - e - 1 >= target - matched) {
    exhaustive_search(table, n_true, e + 1, current, used, matched, score, best, best_score);
  }
  if (matched == target) return;
  for (std::size_t k = 0; k < n_true; ++k) {
    if (used[k]) continue;
    used[k] = true;
    current[e] = static_cast<int>(k);
    exhaustive_search(table, n_true, e + 1, current, used, matched + 1,
                      score + std::max(0.0, weight(table[e][k])), best, best_score);
    current[e] = -1;
    used[k] = false;
  }
}

}  // namespace

double correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw DimensionError("correlation: lengths differ (" + std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()) + ")");
  }
  if (x.size() < 2) throw DimensionError("correlation: need at least two samples");
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw NumericError("correlation: degenerate signal (zero variance)");
  const double n1 = static_cast<double>(x.size() - 1);
  const double c = (sxy / n1) / (std::sqrt(sxx / n1) * std::sqrt(syy / n1));
  return std::clamp(c, -1.0, 1.0);
}

double SeparationReport::min_abs_correlation() const {
  double m = 1.0;
  for (const auto& p : matches) m = std::min(m, std::abs(p.correlation));
  return m;
}

std::optional<double> SeparationReport::correlation_for_true(std::size_t k) const {
  for (const auto& p : matches) {
    if (p.true_idx == k) return p.correlation;
  }
  return std::nullopt;
}

SeparationReport align_and_score(const SignalMatrix& truth, const SignalMatrix& estimates,
                                 MatchStrategy strategy) {
  if (truth.rows() != estimates.rows()) {
    throw DimensionError("score: truth has " + std::to_string(truth.rows()) +
                         " samples but estimates have " + std::to_string(estimates.rows()));
  }
  std::vector<std::vector<double>> tcols, ecols;
  for (std::size_t k = 0; k < truth.cols(); ++k) tcols.push_back(truth.column(k));
  for (std::size_t e = 0; e < estimates.cols(); ++e) ecols.push_back(estimates.column(e));
  const Table table = correlation_table(tcols, ecols);

  std::vector<int> assign;
  if (strategy == MatchStrategy::exhaustive) {
    if (estimates.cols() > 6) throw ConfigError("score: exhaustive matching supports at most 6 estimates");
    std::vector<int> current(ecols.size(), -1);
    std::vector<bool> used(tcols.size(), false);
    double best_score = -1.0;
    exhaustive_search(table, tcols.size(), 0, current, used, 0, 0.0, assign, best_score);
  } else {
    assign = greedy_assignment(table, tcols.size());
  }

  SeparationReport report;
  report.n_sources_estimated = estimates.cols();
  report.n_sources_true = truth.cols();
  report.permutation.resize(estimates.cols());
  for (std::size_t e = 0; e < assign.size(); ++e) {
    if (assign[e] < 0) continue;
    const auto k = static_cast<std::size_t>(assign[e]);
    report.permutation[e] = k;
    report.matches.push_back({e, k, table[e][k].value_or(0.0)});
  }
  return report;
}

}  // namespace ubss
