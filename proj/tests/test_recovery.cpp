#include "ubss/recovery.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "test_support.hpp"
#include "ubss/error.hpp"
#include "ubss/signal_gen.hpp"

namespace ubss {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(SampleAngle, Examples) {
  EXPECT_EQ(*sample_angle(1.0, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(*sample_angle(1.0, 1.0), kPi / 4);
  EXPECT_NEAR(*sample_angle(0.4, 0.8), 1.1071487177940904, 1e-15);
}

TEST(SampleAngle, LineNotDirection) {
  EXPECT_DOUBLE_EQ(*sample_angle(-1.0, -1.0), kPi / 4);
  EXPECT_DOUBLE_EQ(*sample_angle(0.0, 2.0), kPi / 2);
  EXPECT_DOUBLE_EQ(*sample_angle(0.0, -2.0), kPi / 2);
  const double a = *sample_angle(-1e-300, 1.0);
  EXPECT_GT(a, -kPi / 2);
  EXPECT_LE(a, kPi / 2);
}

TEST(SampleAngle, InactiveSample) {
  EXPECT_FALSE(sample_angle(0.0, 0.0).has_value());
  EXPECT_FALSE(sample_angle(1e-9, -1e-9, 1e-6).has_value());
  EXPECT_TRUE(sample_angle(1e-9, 2e-6, 1e-6).has_value());
}

TEST(SelectBasePair, ExactAngleIsIncluded) {
  const EstimatedMatrix est({0.5, 1.8, 2.0, -1.0});
  const AngleSet angles(est);
  for (std::size_t i = 0; i < 4; ++i) {
    const BasePair p = select_base_pair(angles[i], angles);
    EXPECT_EQ(p.i, i);
  }
}

TEST(SelectBasePair, ExperimentTwoGeometry) {
  // |0.5 - 0.4636| = 0.036, |0.5 - 1.0637| = 0.564, |0.5 - 1.1071| = 0.607.
  const EstimatedMatrix est({2.0, 0.5, 1.8});
  const BasePair p = select_base_pair(0.5, AngleSet(est));
  EXPECT_EQ(p, (BasePair{1, 2}));
}

TEST(SelectBasePair, TwoColumnsForced) {
  const AngleSet angles(EstimatedMatrix({-3.0, 4.0}));
  for (double theta : {-1.5, -0.2, 0.0, 0.7, 1.5}) {
    const BasePair p = select_base_pair(theta, angles);
    EXPECT_TRUE((p == BasePair{0, 1}) || (p == BasePair{1, 0}));
  }
}

TEST(SelectBasePair, TiesGoToLowerIndex) {
  // Columns at angles -a, +a, +a+... symmetric around zero.
  const AngleSet angles(EstimatedMatrix({-1.0, 1.0, 3.0}));
  EXPECT_EQ(select_base_pair(0.0, angles), (BasePair{0, 1}));
  const AngleSet four(EstimatedMatrix({3.0, -1.0, 1.0, -3.0}));
  EXPECT_EQ(select_base_pair(0.0, four), (BasePair{1, 2}));
}

TEST(SelectBasePair, InsufficientColumns) {
  try {
    select_base_pair(0.0, AngleSet(EstimatedMatrix({1.0})));
    FAIL();
  } catch (const DimensionError& e) {
    EXPECT_NE(std::string(e.what()).find("insufficient columns"), std::string::npos);
  }
}

// Brute force over all pairs: the selected pair minimizes the summed
// intersection angle.
TEST(SelectBasePair, MatchesBruteForce) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ratio(-5.0, 5.0), angle(-kPi / 2, kPi / 2);
  std::uniform_int_distribution<int> count(2, 6);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<double> r(count(rng));
    for (auto& v : r) v = ratio(rng);
    const EstimatedMatrix est(r);
    const AngleSet angles(est);
    const double theta = angle(rng);
    double best = INFINITY;
    for (std::size_t i = 0; i < r.size(); ++i)
      for (std::size_t j = i + 1; j < r.size(); ++j)
        best = std::min(best, std::abs(theta - angles[i]) + std::abs(theta - angles[j]));
    const BasePair p = select_base_pair(theta, angles);
    EXPECT_NE(p.i, p.j);
    EXPECT_NEAR(std::abs(theta - angles[p.i]) + std::abs(theta - angles[p.j]), best, 1e-15);
    EXPECT_LE(std::abs(theta - angles[p.i]), std::abs(theta - angles[p.j]));
  }
}

TEST(SolvePair, PureColumn) {
  const EstimatedMatrix est({2.0, 0.1667, 1.6667});
  const auto s = solve_pair(est, {0, 2}, 1.0, 2.0);
  EXPECT_NEAR(s[0], 1.0, 1e-15);
  EXPECT_NEAR(s[2], 0.0, 1e-15);
  EXPECT_EQ(s[1], 0.0);
}

TEST(SolvePair, ReferenceTwoSourceSample) {
  const EstimatedMatrix est({2.0, 0.1667});
  const auto s = solve_pair(est, {0, 1}, 1.0, 0.9);
  EXPECT_NEAR(s[0], (0.1667 * 1.0 - 0.9) / (0.1667 - 2.0), 1e-15);
  EXPECT_NEAR(s[0], 0.4, 1e-4);
  EXPECT_NEAR(s[1], 0.6, 1e-4);
}

TEST(SolvePair, NullSample) {
  const auto s = solve_pair(EstimatedMatrix({2.0, 0.1667, 1.6667}), {1, 0}, 0.0, 0.0);
  for (double v : s) EXPECT_EQ(v, 0.0);
}

TEST(SolvePair, DegeneratePair) {
  const EstimatedMatrix est({1.0, 1.0 + 1e-13});
  try {
    solve_pair(est, {0, 1}, 1.0, 1.0);
    FAIL();
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("degenerate pair"), std::string::npos);
  }
  EXPECT_THROW(solve_pair(EstimatedMatrix({1.0, 2.0}), {0, 0}, 1.0, 1.0), DimensionError);
  EXPECT_THROW(solve_pair(EstimatedMatrix({1.0, 2.0}), {0, 2}, 1.0, 1.0), DimensionError);
}

TEST(SolvePair, RemixIdentity) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 5000; ++trial) {
    const EstimatedMatrix est({u(rng), u(rng) + 7.0});
    const double x1 = u(rng), x2 = u(rng);
    const auto s = solve_pair(est, {0, 1}, x1, x2);
    const double scale = std::max({1.0, std::abs(x1), std::abs(x2)});
    EXPECT_NEAR(s[0] + s[1], x1, 1e-10 * scale);
    EXPECT_NEAR(est.ratio(0) * s[0] + est.ratio(1) * s[1], x2, 1e-10 * scale);
  }
}

const std::vector<PulseSpec> kReferencePulses{{0, 161, 1.0}, {1, 161, 1.0}, {2, 161, 1.0}};

TEST(Separate, SingleSourceIsRecoveredExactly) {
  ThUwbConfig cfg;
  cfg.n_sources = 1;
  cfg.seed = 3;
  const auto s = generate_sources(cfg, std::vector<PulseSpec>{{2, 161, 1.0}});
  const MixingMatrix a({{0.6}, {0.1}});
  const auto x = mix(s, a);
  const EstimatedMatrix est({2.0, 0.1 / 0.6, 0.5 / 0.3});
  const auto y = separate(x, est, 1e-300);
  for (std::size_t t = 0; t < s.rows(); ++t) {
    const double expected = 0.6 * s(t, 0);
    EXPECT_NEAR(y(t, 1), expected, 1e-10 * std::abs(expected));
    EXPECT_EQ(y(t, 0), 0.0);
    EXPECT_EQ(y(t, 2), 0.0);
  }
}

TEST(Separate, SilentInputGivesSilentOutput) {
  const auto y = separate(SignalMatrix(10, 2), EstimatedMatrix({1.0, 2.0, 3.0}));
  EXPECT_EQ(y, SignalMatrix(10, 3));
}

TEST(Separate, AtMostTwoNonzeroPerRowAndRemixes) {
  std::mt19937_64 rng(17);
  const auto x = testing::random_matrix(rng, 2000, 2);
  const EstimatedMatrix est({0.5, 2.0, 1.8, -0.7});
  const auto trace = separate_with_trace(x, est, 1e-12);
  for (std::size_t t = 0; t < x.rows(); ++t) {
    int nonzero = 0;
    double x1 = 0.0, x2 = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
      const double v = trace.estimates(t, k);
      nonzero += v != 0.0;
      x1 += v;
      x2 += est.ratio(k) * v;
    }
    EXPECT_LE(nonzero, 2);
    ASSERT_TRUE(trace.pairs[t].has_value());
    const double scale = std::max(std::abs(x(t, 0)), std::abs(x(t, 1)));
    EXPECT_NEAR(x1, x(t, 0), 1e-10 * scale);
    EXPECT_NEAR(x2, x(t, 1), 1e-10 * scale);
  }
}

TEST(Separate, InactiveRowsAreZeroAndUntraced) {
  SignalMatrix x(3, 2, {1e-9, 1e-9, 1.0, 0.5, 0.0, 0.0});
  const auto trace = separate_with_trace(x, EstimatedMatrix({0.5, 2.0}), 1e-6);
  EXPECT_FALSE(trace.pairs[0].has_value());
  EXPECT_TRUE(trace.pairs[1].has_value());
  EXPECT_FALSE(trace.pairs[2].has_value());
  EXPECT_EQ(trace.estimates(0, 0), 0.0);
  EXPECT_EQ(trace.estimates(0, 1), 0.0);
}

TEST(Separate, Preconditions) {
  EXPECT_THROW(separate(SignalMatrix(3, 3), EstimatedMatrix({0.5, 2.0})), DimensionError);
  EXPECT_THROW(separate(SignalMatrix(3, 2), EstimatedMatrix({0.5})), DimensionError);
}

TEST(Separate, ErrorsCarrySampleIndex) {
  SignalMatrix x(2, 2, {0.0, 0.0, 1.0, 1.0});
  try {
    separate(x, EstimatedMatrix({1.0, 1.0 + 1e-13}), 1e-9);
    FAIL();
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("sample 2"), std::string::npos);
  }
}

}  // namespace
}  // namespace ubss
