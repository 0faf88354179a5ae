#include "ubss/eval.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"
#include "ubss/error.hpp"
#include "ubss/matrix_est.hpp"
#include "ubss/recovery.hpp"
#include "ubss/signal_gen.hpp"

namespace ubss {
namespace {

std::vector<double> random_signal(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  std::vector<double> v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

TEST(Correlation, SelfAndNegatedScale) {
  std::mt19937_64 rng(1);
  const auto x = random_signal(rng, 100);
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = -3.0 * x[i];
  EXPECT_NEAR(correlation(x, x), 1.0, 1e-15);
  EXPECT_NEAR(correlation(x, y), -1.0, 1e-15);
}

TEST(Correlation, KnownValue) {
  // Hand computation: mean-removed x = (-1,0,1), y = (-1,-1,2): cov = 3/2,
  // var x = 1, var y = 3, C = 1.5 / sqrt(3).
  const std::vector<double> x{1.0, 2.0, 3.0}, y{0.0, 0.0, 3.0};
  EXPECT_NEAR(correlation(x, y), 1.5 / std::sqrt(3.0), 1e-15);
}

TEST(Correlation, Properties) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> s(-5.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = random_signal(rng, 64);
    auto y = random_signal(rng, 64);
    for (std::size_t i = 0; i < 64; ++i) y[i] += 0.5 * x[i];
    const double c = correlation(x, y);
    EXPECT_EQ(c, correlation(y, x));
    EXPECT_LE(std::abs(c), 1.0 + 1e-12);
    double alpha = s(rng), beta = s(rng);
    std::vector<double> ax(x), by(y);
    for (auto& v : ax) v *= alpha;
    for (auto& v : by) v *= beta;
    EXPECT_NEAR(correlation(ax, by), std::copysign(1.0, alpha * beta) * c, 1e-12);
  }
}

TEST(Correlation, DegenerateInputs) {
  const std::vector<double> flat(10, 2.0), x{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  EXPECT_THROW(correlation(flat, x), NumericError);
  EXPECT_THROW(correlation(x, std::vector<double>(9, 0.0)), DimensionError);
  EXPECT_THROW(correlation(std::vector<double>{1.0}, std::vector<double>{1.0}), DimensionError);
}

TEST(AlignAndScore, IdentityPermutation) {
  std::mt19937_64 rng(4);
  const auto s = testing::random_matrix(rng, 200, 3);
  const auto r = align_and_score(s, s);
  ASSERT_EQ(r.matches.size(), 3u);
  for (std::size_t e = 0; e < 3; ++e) {
    EXPECT_EQ(r.permutation[e], e);
    EXPECT_NEAR(r.matches[e].correlation, 1.0, 1e-15);
  }
}

TEST(AlignAndScore, SwappedAndNegated) {
  std::mt19937_64 rng(5);
  const auto s = testing::random_matrix(rng, 200, 3);
  SignalMatrix est(200, 3);
  for (std::size_t t = 0; t < 200; ++t) {
    est(t, 0) = s(t, 1);
    est(t, 1) = -2.0 * s(t, 0);
    est(t, 2) = 0.3 * s(t, 2);
  }
  for (auto strategy : {MatchStrategy::greedy, MatchStrategy::exhaustive}) {
    const auto r = align_and_score(s, est, strategy);
    EXPECT_EQ(r.permutation[0], 1u);
    EXPECT_EQ(r.permutation[1], 0u);
    EXPECT_EQ(r.permutation[2], 2u);
    EXPECT_NEAR(r.matches[1].correlation, -1.0, 1e-12);
    EXPECT_NEAR(*r.correlation_for_true(2), 1.0, 1e-12);
  }
}

TEST(AlignAndScore, ExtraAndSilentEstimates) {
  std::mt19937_64 rng(6);
  const auto s = testing::random_matrix(rng, 100, 2);
  SignalMatrix est(100, 3);
  for (std::size_t t = 0; t < 100; ++t) {
    est(t, 1) = s(t, 0);
    est(t, 2) = s(t, 1) + 0.01 * s(t, 0);
  }
  const auto r = align_and_score(s, est);
  EXPECT_EQ(r.matches.size(), 2u);
  EXPECT_FALSE(r.permutation[0].has_value());
  EXPECT_EQ(r.n_sources_estimated, 3u);
  EXPECT_EQ(r.n_sources_true, 2u);

  // With fewer estimates than sources the silent column is matched last at 0.
  SignalMatrix two(100, 2);
  for (std::size_t t = 0; t < 100; ++t) two(t, 1) = s(t, 1);
  const auto r2 = align_and_score(s, two);
  ASSERT_EQ(r2.matches.size(), 2u);
  EXPECT_EQ(r2.permutation[1], 1u);
  EXPECT_EQ(r2.permutation[0], 0u);
  EXPECT_EQ(r2.matches[0].correlation, 0.0);
}

TEST(AlignAndScore, LengthMismatch) {
  EXPECT_THROW(align_and_score(SignalMatrix(10, 2), SignalMatrix(11, 2)), DimensionError);
  EXPECT_THROW(align_and_score(SignalMatrix(10, 2), SignalMatrix(10, 7), MatchStrategy::exhaustive),
               ConfigError);
}

TEST(AlignAndScore, ExhaustiveNeverWorseThanGreedy) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = testing::random_matrix(rng, 40, 4);
    auto est = testing::random_matrix(rng, 40, 4);
    for (std::size_t t = 0; t < 40; ++t)
      for (std::size_t k = 0; k < 4; ++k) est(t, k) += s(t, (k + 1) % 4);
    double g = 0.0, x = 0.0;
    for (const auto& m : align_and_score(s, est).matches) g += std::abs(m.correlation);
    for (const auto& m : align_and_score(s, est, MatchStrategy::exhaustive).matches) x += std::abs(m.correlation);
    EXPECT_GE(x, g - 1e-12);
  }
}

SeparationReport reference_run(const MixingMatrix& a, OverlapMode mode, std::uint64_t seed) {
  ThUwbConfig cfg;
  cfg.seed = seed;
  cfg.overlap = mode;
  const std::vector<PulseSpec> pulses{{0, 161, 1.0}, {1, 161, 1.0}, {2, 161, 1.0}};
  const auto s = generate_sources(cfg, pulses);
  const auto x = mix(s, a);
  const auto est = estimate_mixing(build_histogram(compute_ratios(x), 1e-4));
  return align_and_score(s, separate(x, est));
}

TEST(AlignAndScore, OverlapLowersEveryCoefficient) {
  const MixingMatrix a2({{0.5, 0.4, 0.3}, {0.9, 0.2, 0.6}});
  const auto independent = reference_run(a2, OverlapMode::allow_three, 2);
  const auto capped = reference_run(a2, OverlapMode::at_most_two, 2);
  ASSERT_EQ(independent.matches.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_LT(std::abs(*independent.correlation_for_true(k)), std::abs(*capped.correlation_for_true(k)));
  }
}

TEST(AlignAndScore, GreedyAtLeastIdentityOnExperiments) {
  const MixingMatrix a1({{0.4, 0.6, 0.3}, {0.8, 0.1, 0.5}});
  ThUwbConfig cfg;
  cfg.seed = 2;
  cfg.overlap = OverlapMode::at_most_two;
  const std::vector<PulseSpec> pulses{{0, 161, 1.0}, {1, 161, 1.0}, {2, 161, 1.0}};
  const auto s = generate_sources(cfg, pulses);
  const auto x = mix(s, a1);
  const auto y = separate(x, estimate_mixing(build_histogram(compute_ratios(x), 1e-4)));
  double greedy = 0.0, identity = 0.0;
  for (const auto& m : align_and_score(s, y).matches) greedy += std::abs(m.correlation);
  for (std::size_t k = 0; k < 3; ++k) identity += std::abs(correlation(s.column(k), y.column(k)));
  EXPECT_GE(greedy, identity);
}

}  // namespace
}  // namespace ubss
