#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "statichedge/quadrature.hpp"

namespace q = statichedge::quadrature;
using q::RuleKind;

namespace {

double sum_poly(const q::QuadratureRule& rule, int k) {
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], k);
  return s;
}

// Scale of the terms in sum_poly; odd moments cancel to 0 from terms this large.
double sum_abs_poly(const q::QuadratureRule& rule, int k) {
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    s += rule.weights[i] * std::pow(std::abs(rule.nodes[i]), k);
  }
  return s;
}

double legendre_moment(int k) { return k % 2 ? 0.0 : 2.0 / (k + 1); }
double hermite_moment(int k) { return k % 2 ? 0.0 : std::tgamma(0.5 * (k + 1)); }
double laguerre_moment(int k) { return std::tgamma(k + 1.0); }

}  // namespace

class ExactnessTest : public ::testing::TestWithParam<int> {};

TEST_P(ExactnessTest, LegendreIntegratesDegree2nMinus1) {
  const int n = GetParam();
  const auto& rule = q::cached_rule(RuleKind::legendre, n);
  for (int k = 0; k <= 2 * n - 1; ++k) {
    EXPECT_NEAR(sum_poly(rule, k), legendre_moment(k), 1e-10) << "n=" << n << " k=" << k;
  }
}

TEST_P(ExactnessTest, HermiteIntegratesDegree2nMinus1) {
  const int n = GetParam();
  const auto& rule = q::cached_rule(RuleKind::hermite, n);
  for (int k = 0; k <= 2 * n - 1; ++k) {
    const double exact = hermite_moment(k);
    EXPECT_NEAR(sum_poly(rule, k), exact, 1e-10 * std::max(1.0, sum_abs_poly(rule, k)))
        << "n=" << n << " k=" << k;
  }
}

TEST_P(ExactnessTest, LaguerreIntegratesDegree2nMinus1) {
  const int n = GetParam();
  const auto& rule = q::cached_rule(RuleKind::laguerre, n);
  for (int k = 0; k <= 2 * n - 1; ++k) {
    const double exact = laguerre_moment(k);
    EXPECT_NEAR(sum_poly(rule, k), exact, 1e-10 * sum_abs_poly(rule, k)) << "n=" << n << " k=" << k;
  }
}

INSTANTIATE_TEST_SUITE_P(Orders, ExactnessTest, ::testing::Values(1, 2, 3, 5, 8, 13, 20, 30, 64));

TEST(Quadrature, TwoPointRulesMatchClosedForms) {
  const auto leg = q::make_rule(RuleKind::legendre, 2);
  EXPECT_NEAR(leg.nodes[1], 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(leg.weights[0], 1.0, 1e-15);

  const auto her = q::make_rule(RuleKind::hermite, 2);
  EXPECT_NEAR(her.nodes[1], 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(her.weights[1], 0.5 * std::sqrt(std::numbers::pi), 1e-15);

  const auto lag = q::make_rule(RuleKind::laguerre, 2);
  EXPECT_NEAR(lag.nodes[0], 2.0 - std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(lag.nodes[1], 2.0 + std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(lag.weights[0], (2.0 + std::sqrt(2.0)) / 4.0, 1e-15);
}

TEST(Quadrature, StructuralInvariantsUpToMaxOrder) {
  for (auto kind : {RuleKind::legendre, RuleKind::hermite, RuleKind::laguerre}) {
    for (int n : {1, 7, 50, 120, q::max_order(kind)}) {
      const auto& rule = q::cached_rule(kind, n);
      ASSERT_EQ(rule.size(), static_cast<std::size_t>(n));
      double mass = 0.0;
      for (int i = 0; i < n; ++i) {
        EXPECT_GT(rule.weights[i], 0.0);
        if (i > 0) {
          EXPECT_GT(rule.nodes[i], rule.nodes[i - 1]);
        }
        mass += rule.weights[i];
      }
      const double mu0 = kind == RuleKind::legendre ? 2.0
                         : kind == RuleKind::hermite ? std::sqrt(std::numbers::pi)
                                                     : 1.0;
      EXPECT_NEAR(mass, mu0, 1e-12) << q::to_string(kind) << " n=" << n;
      if (kind != RuleKind::laguerre) {
        for (int i = 0; i < n; ++i) {
          EXPECT_EQ(rule.nodes[i], -rule.nodes[n - 1 - i]);
          EXPECT_EQ(rule.weights[i], rule.weights[n - 1 - i]);
        }
      }
    }
  }
}

TEST(Quadrature, ScaledWeightsUndoTheWeightFunction) {
  const auto& her = q::cached_rule(RuleKind::hermite, 20);
  const auto& lag = q::cached_rule(RuleKind::laguerre, 20);
  for (int i = 0; i < 20; ++i) {
    EXPECT_NEAR(her.scaled_weights[i], her.weights[i] * std::exp(her.nodes[i] * her.nodes[i]),
                1e-12 * her.scaled_weights[i]);
    EXPECT_NEAR(lag.scaled_weights[i], lag.weights[i] * std::exp(lag.nodes[i]),
                1e-12 * lag.scaled_weights[i]);
  }
}

TEST(Quadrature, RejectsOrdersOutOfRange) {
  EXPECT_THROW(q::make_rule(RuleKind::legendre, 0), statichedge::DomainError);
  EXPECT_THROW(q::make_rule(RuleKind::hermite, q::kMaxOrder + 1), statichedge::DomainError);
  EXPECT_THROW(q::cached_rule(RuleKind::laguerre, q::kMaxLaguerreOrder + 1),
               statichedge::DomainError);
  EXPECT_THROW(q::cached_rule(RuleKind::legendre, -3), statichedge::DomainError);
}

TEST(Quadrature, CachedRuleIsShared) {
  EXPECT_EQ(&q::cached_rule(RuleKind::legendre, 17), &q::cached_rule(RuleKind::legendre, 17));
}

TEST(Quadrature, MappedRuleIntegratesOnInterval) {
  const auto rule = q::map_to_interval(q::cached_rule(RuleKind::legendre, 3), 2.0, 5.0);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], 5);
  EXPECT_NEAR(s, (std::pow(5.0, 6) - std::pow(2.0, 6)) / 6.0, 1e-9);
  EXPECT_EQ(rule.domain, (q::Domain{2.0, 5.0}));
  EXPECT_THROW(q::map_to_interval(q::cached_rule(RuleKind::hermite, 3), 0, 1),
               statichedge::DomainError);
  EXPECT_THROW(q::map_to_interval(rule, 1.0, 1.0), statichedge::DomainError);
}

TEST(Quadrature, IntegrateHelpers) {
  EXPECT_NEAR(q::integrate_bounded([](double x) { return std::cos(x); }, 0.0, 1.0, 10),
              std::sin(1.0), 1e-14);
  const double a = 1.5;
  const double got = q::integrate_shifted_laguerre(
      [](double x) { return x * x * x * std::exp(-x); }, a, 4);
  EXPECT_NEAR(got, std::exp(-a) * (a * a * a + 3 * a * a + 6 * a + 6), 1e-12);
}

TEST(Quadrature, NonFiniteIntegrandNamesTheNode) {
  try {
    q::integrate_bounded([](double x) { return x > 0.5 ? std::nan("") : 1.0; }, 0.0, 1.0, 4);
    FAIL() << "expected IntegrationError";
  } catch (const statichedge::IntegrationError& e) {
    EXPECT_EQ(e.node_index(), 2);
    EXPECT_GT(e.node(), 0.5);
  }
}
