#include "roadsnap/numeric.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "roadsnap/rng.hpp"

namespace roadsnap {
namespace {

TEST(Numeric, PairwiseSumMatchesNaive) {
  Rng rng(7);
  std::vector<double> values;
  for (int i = 0; i < 1000; ++i) values.push_back(rng.uniform(-5.0, 5.0));
  double naive = 0.0;
  for (double v : values) naive += v;
  EXPECT_NEAR(pairwise_sum(values), naive, 1e-12 * std::abs(naive) + 1e-12);
  EXPECT_EQ(pairwise_sum(std::vector<double>{}), 0.0);
}

TEST(Numeric, PopulationStatsTwoPoints) {
  const MeanStddev ms = population_stats(std::vector<double>{1.0, 3.0});
  EXPECT_EQ(ms.mean, 2.0);
  EXPECT_EQ(ms.stddev, 1.0);
}

TEST(Numeric, ConstantInputHasExactlyZeroStddev) {
  // 0.1 sums do not recompose exactly; the constant shortcut must hide that.
  const MeanStddev ms = population_stats(std::vector<double>{0.1, 0.1, 0.1});
  EXPECT_EQ(ms.stddev, 0.0);
  EXPECT_EQ(ms.mean, 0.1);
}

TEST(Numeric, PercentileNearestRank) {
  std::vector<double> values{5.0, 1.0, 3.0, 2.0, 4.0};
  EXPECT_EQ(percentile(values, 0.0), 1.0);
  EXPECT_EQ(percentile(values, 100.0), 5.0);
  EXPECT_EQ(percentile(values, 50.0), 3.0);
  EXPECT_EQ(percentile(values, 90.0), 5.0);
  EXPECT_THROW(percentile({}, 50.0), std::invalid_argument);
}

TEST(Numeric, LinearFitR2) {
  const std::vector<double> x{1, 2, 3, 4};
  const std::vector<double> y{2, 4, 6, 8};
  EXPECT_NEAR(linear_fit_r2(x, y), 1.0, 1e-12);
  const std::vector<double> noisy{2.1, 3.9, 6.2, 7.8};
  EXPECT_GT(linear_fit_r2(x, noisy), 0.99);
  const std::vector<double> flat{3, 3, 3, 3};
  EXPECT_EQ(linear_fit_r2(x, flat), 1.0);
}

}  // namespace
}  // namespace roadsnap
