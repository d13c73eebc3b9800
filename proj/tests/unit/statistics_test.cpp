#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "statichedge/errors.hpp"
#include "statichedge/statistics.hpp"

namespace st = statichedge::statistics;

TEST(Statistics, ConstantSampleIsFlaggedDegenerate) {
  const std::vector<double> x(10, -2.5);
  const auto s = st::summarize(x);
  EXPECT_DOUBLE_EQ(s.mean, -2.5);
  EXPECT_DOUBLE_EQ(s.rmse, 2.5);
  EXPECT_DOUBLE_EQ(s.mae, 2.5);
  EXPECT_EQ(s.skewness, 0.0);
  EXPECT_EQ(s.kurtosis, 0.0);
  EXPECT_TRUE(s.degenerate);
}

TEST(Statistics, SymmetricTwoPoint) {
  const std::vector<double> x{-3.0, 3.0};
  const auto s = st::summarize(x);
  EXPECT_DOUBLE_EQ(s.mean, 0.0);
  EXPECT_DOUBLE_EQ(s.rmse, 3.0);
  EXPECT_DOUBLE_EQ(s.skewness, 0.0);
  EXPECT_DOUBLE_EQ(s.kurtosis, -2.0);
  EXPECT_FALSE(s.degenerate);
}

TEST(Statistics, LinearPercentiles) {
  const std::vector<double> x{4.0, 1.0, 3.0, 2.0};
  EXPECT_DOUBLE_EQ(st::percentile(x, 95.0), 3.85);
  EXPECT_DOUBLE_EQ(st::percentile(x, 5.0), 1.15);
  EXPECT_DOUBLE_EQ(st::percentile(x, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(st::percentile(x, 100.0), 4.0);
  EXPECT_THROW(st::percentile(x, 101.0), statichedge::DomainError);
}

TEST(Statistics, NormalMoments) {
  std::mt19937_64 gen(42);
  std::normal_distribution<double> z;
  std::vector<double> x(100000);
  for (auto& v : x) v = z(gen);
  const auto s = st::summarize(x);
  EXPECT_NEAR(s.skewness, 0.0, 0.03);
  EXPECT_NEAR(s.kurtosis, 0.0, 0.06);
  EXPECT_NEAR(s.p95, 1.6449, 0.03);
  EXPECT_LE(s.min, s.p05);
  EXPECT_LE(s.p05, s.p95);
  EXPECT_LE(s.p95, s.max);
  EXPECT_GE(s.rmse, std::abs(s.mean));
  EXPECT_LE(s.mae, s.rmse);
}

TEST(Statistics, RejectsTinySamples) {
  const std::vector<double> one{1.0};
  EXPECT_THROW(st::summarize(one), statichedge::DomainError);
}
