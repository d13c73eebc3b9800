#include <gtest/gtest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "statichedge/spanning.hpp"

namespace sp = statichedge::spanning;
namespace m = statichedge::models;

namespace {

const m::BsParams kBs{0.06, 0.0, 0.27, 0.1};
const m::MjdParams kMjd{0.06, 0.02, 0.14, 0.1, 2.0, -0.1, 0.13};
const m::OptionRef kTarget{100.0, 1.0};
constexpr double kU1 = 0.1587;
constexpr double kU2 = 0.0833;

double gq1(const m::ModelSpec& model, double lo, double hi, int n, double u1 = kU1) {
  return sp::build_gq1(model, kTarget, 100, {u1, lo, hi}, n).edl();
}

double gq2(const m::ModelSpec& model, sp::StrikeBand b1, sp::StrikeBand b2, int n) {
  return sp::build_gq2(model, kTarget, 100, b1, b2, n).edl();
}

}  // namespace

TEST(Spanning, QuadratureOrderSweepBlackScholes) {
  const int orders[] = {6, 8, 10, 15, 25, 50};
  const double expected[] = {-0.28426, -0.05559, -0.00625, -0.00067, -0.00067, -0.00067};
  for (int i = 0; i < 6; ++i) {
    EXPECT_NEAR(gq1(kBs, 0, 130, orders[i]), expected[i], 5e-4) << "n=" << orders[i];
  }
  EXPECT_NEAR(gq1(kBs, 0, 130, 6), -0.284289, 1e-6);

  const auto cwb = sp::build_cw_b(kBs, kTarget, 100, {kU1, 0, 130}, 25);
  EXPECT_EQ(cwb.legs.size(), 15u);
  EXPECT_NEAR(cwb.edl(), 3.2e-5, 5e-4);
  EXPECT_EQ(sp::build_cw_b(kBs, kTarget, 100, {kU1, 0, 130}, 10).legs.size(), 6u);

  const auto cwa = sp::build_cw_a(kBs, kTarget, 100, {kU1, 0, 130});
  EXPECT_EQ(cwa.order, 2);
  EXPECT_NEAR(cwa.edl(), 0.9464, 5e-4);
}

TEST(Spanning, QuadratureOrderSweepMerton) {
  EXPECT_NEAR(gq1(kMjd, 0, 150, 50), -8.98e-6, 2e-5);
  EXPECT_NEAR(gq1(kMjd, 0, 150, 100), -8.98e-6, 2e-5);
  const auto cwb = sp::build_cw_b(kMjd, kTarget, 100, {kU1, 0, 150}, 100);
  EXPECT_EQ(cwb.legs.size(), 56u);
  EXPECT_NEAR(cwb.edl(), -6.82e-6, 2e-5);
  const auto cwa = sp::build_cw_a(kMjd, kTarget, 100, {kU1, 0, 150});
  EXPECT_EQ(cwa.order, 3);
  EXPECT_NEAR(cwa.edl(), -2.24, 0.01);
}

TEST(Spanning, TwoMaturityStrikeBandsBlackScholes) {
  const double g1 = gq1(kBs, 80, 120, 4);
  const double same = gq2(kBs, {kU1, 80, 120}, {kU2, 80, 120}, 4);
  const double wide = gq2(kBs, {kU1, 80, 120}, {kU2, 55, 120}, 4);
  EXPECT_NEAR(g1, -8.9, 0.1);
  EXPECT_NEAR(same, -8.3, 0.1);
  EXPECT_NEAR(wide, 1.6, 0.1);
  EXPECT_NEAR(*sp::pdl(g1, wide), 82.2, 1.0);
  EXPECT_NEAR(*sp::pdl(g1, same), 6.7, 1.0);
  EXPECT_NEAR(gq2(kBs, {kU1, 80, 120}, {kU2, 75, 120}, 4), -7.2, 0.1);
}

TEST(Spanning, TwoMaturityStrikeBandsMerton) {
  const double g1 = gq1(kMjd, 80, 120, 20);
  const double g2 = gq2(kMjd, {kU1, 80, 120}, {kU2, 60, 120}, 20);
  EXPECT_NEAR(g1, -6.80, 0.1);
  EXPECT_NEAR(g2, -1.21, 0.1);
  EXPECT_NEAR(*sp::pdl(g1, g2), 82.21, 1.0);
  EXPECT_NEAR(gq2(kMjd, {kU1, 80, 120}, {kU2, 80, 120}, 20), -6.52, 0.1);
}

TEST(Spanning, GqTwoNeverWorseThanGqOne) {
  const sp::StrikeBand pairs[][2] = {
      {{kU1, 80, 120}, {kU2, 80, 120}}, {{kU1, 80, 120}, {kU2, 75, 120}},
      {{kU1, 80, 120}, {kU2, 55, 120}}, {{kU1, 60, 105}, {kU2, 60, 105}},
      {{kU1, 75, 110}, {kU2, 75, 110}}, {{kU1, 55, 110}, {kU2, 75, 110}},
      {{kU1, 55, 110}, {kU2, 65, 105}}, {{kU1, 80, 120}, {kU2, 60, 120}},
  };
  for (const auto& [b1, b2] : pairs) {
    EXPECT_LE(std::abs(gq2(kBs, b1, b2, 4)), std::abs(gq1(kBs, b1.lo, b1.hi, 4)));
    EXPECT_LE(std::abs(gq2(kMjd, b1, b2, 20)), std::abs(gq1(kMjd, b1.lo, b1.hi, 20)));
  }
}

TEST(Spanning, FirstMaturitySweeps) {
  const double u1s[] = {0.0833, 0.1587, 0.3175, 0.6349};
  const double wide[] = {-2.36, -1.91, -1.11, -0.27};
  double prev = -1e9;
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(gq1(kBs, 60, 120, 15, u1s[i]), wide[i], 0.05);
    const double narrow = gq1(kBs, 80, 120, 15, u1s[i]);
    EXPECT_LT(narrow, 0.0);
    EXPECT_GT(narrow, prev);
    prev = narrow;
  }
}

TEST(Spanning, JumpIntensitySweepAtFixedVariance) {
  const double lambdas[] = {0.02, 0.1, 0.5, 1.0};
  const double expected[] = {1.5985, 1.5529, 1.3332, 1.0500};
  for (int i = 0; i < 4; ++i) {
    m::MjdParams p = kMjd;
    p.lambda = lambdas[i];
    p.sigma = std::sqrt(0.0729 - p.lambda * (0.01 + 0.0169));
    EXPECT_NEAR(std::abs(gq1(p, 60, 120, 20)), expected[i], 5e-3) << "lambda=" << lambdas[i];
  }
}

TEST(Spanning, WideBandSpansTheTargetExactly) {
  for (const m::ModelSpec& model : {m::ModelSpec{kBs}, m::ModelSpec{kMjd}}) {
    const double s = std::sqrt(m::total_variance_rate(model) * (1.0 - kU1));
    const double lo = 100 * std::exp(-8 * s), hi = 100 * std::exp(8 * s);
    EXPECT_LT(std::abs(gq1(model, lo, hi, 120)), 1e-5) << m::model_name(model);
  }
}

TEST(Spanning, ModifiedWeightMatchesAdaptiveQuadrature) {
  const sp::StrikeBand b1{kU1, 80, 120};
  const sp::ModifiedWeightConfig fine{60, 120};
  for (const m::ModelSpec& model : {m::ModelSpec{kBs}, m::ModelSpec{kMjd}}) {
    for (double k2 : {65.0, 100.0, 118.0}) {
      auto f = [&](double k1) {
        return m::strike_gamma_weight(model, k1, kU1, 100, 1) *
               m::strike_gamma_weight(model, k2, kU2, k1, kU1);
      };
      const double left = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
          f, 0.0, b1.lo, 15, 1e-12);
      boost::math::quadrature::exp_sinh<double> tail;
      const double right = tail.integrate([&](double x) { return f(b1.hi + x); }, 0.0,
                                          std::numeric_limits<double>::infinity());
      const double got = sp::modified_weight(model, kTarget, k2, b1, kU2, fine);
      EXPECT_NEAR(got, left + right, 1e-8 * std::max(1.0, std::abs(left + right)));
    }
  }
}

// The 5-point left-interval rule is coarse: the tabulated GQ2 values rely on
// it, and a converged inner integral moves them noticeably.
TEST(Spanning, GqTwoDependsOnTheLeftInnerOrder) {
  const sp::StrikeBand b1{kU1, 80, 120};
  auto bs = [&](sp::ModifiedWeightConfig cfg) {
    return sp::build_gq2(kBs, kTarget, 100, b1, {kU2, 55, 120}, 4, cfg).edl();
  };
  auto mjd = [&](sp::ModifiedWeightConfig cfg) {
    return sp::build_gq2(kMjd, kTarget, 100, b1, {kU2, 60, 120}, 20, cfg).edl();
  };
  EXPECT_NEAR(bs({5, 120}), bs({5, 20}), 1e-3);
  EXPECT_NEAR(mjd({5, 120}), mjd({5, 20}), 1e-3);
  EXPECT_NEAR(bs({60, 20}), -0.903, 5e-3);
  EXPECT_NEAR(mjd({60, 20}), -0.734, 5e-3);
  EXPECT_NEAR(bs({120, 20}), bs({60, 20}), 1e-6);
}

TEST(Spanning, MultiMaturityBuilderReducesToOneAndTwoBands) {
  const sp::StrikeBand bands[] = {{kU1, 80, 120}, {kU2, 60, 120}, {0.04, 50, 130}};
  const auto one = sp::build_gq_n(kMjd, kTarget, 100, std::span(bands, 1), 10);
  const auto g1 = sp::build_gq1(kMjd, kTarget, 100, bands[0], 10);
  EXPECT_EQ(one.b0, g1.b0);
  const auto two = sp::build_gq_n(kMjd, kTarget, 100, std::span(bands, 2), 10);
  const auto g2 = sp::build_gq2(kMjd, kTarget, 100, bands[0], bands[1], 10);
  EXPECT_EQ(two.b0, g2.b0);
  ASSERT_EQ(two.legs.size(), g2.legs.size());
  for (std::size_t i = 0; i < two.legs.size(); ++i) EXPECT_EQ(two.legs[i].weight, g2.legs[i].weight);

  const auto three = sp::build_gq_n(kMjd, kTarget, 100, bands, 10);
  EXPECT_EQ(three.method, sp::Method::gqn);
  EXPECT_EQ(three.legs.size(), 30u);
  EXPECT_LE(std::abs(three.edl()), std::abs(g2.edl()));
  EXPECT_EQ(three.shortest_maturity(), 0.04);
  for (std::size_t i = 1; i < three.legs.size(); ++i) {
    const auto& a = three.legs[i - 1];
    const auto& b = three.legs[i];
    EXPECT_TRUE(a.maturity < b.maturity || (a.maturity == b.maturity && a.strike < b.strike));
  }
}

TEST(Spanning, PortfolioValueAddsTheResidual) {
  const auto p = sp::build_gq1(kBs, kTarget, 100, {kU1, 0, 130}, 15);
  const double hedge = sp::portfolio_value(p, kBs, 100, 0);
  EXPECT_NEAR(hedge, 13.5926277 - 0.00067, 1e-5);
  EXPECT_NEAR(hedge + p.b0, p.target_value, 1e-12);
  EXPECT_DOUBLE_EQ(sp::edl(p.target_value, hedge), p.edl());
  EXPECT_THROW(sp::portfolio_value(p, kBs, 100, 0.2), statichedge::DomainError);
}

TEST(Spanning, PercentageDecrease) {
  EXPECT_NEAR(*sp::pdl(-8.9471, 1.5949), 82.17, 0.01);
  EXPECT_FALSE(sp::pdl(0.0, 1.0).has_value());
}

TEST(Spanning, EmptyHermitePortfolio) {
  const auto p = sp::build_cw_b(kBs, kTarget, 100, {kU1, 200, 300}, 5);
  EXPECT_TRUE(p.empty);
  EXPECT_TRUE(p.legs.empty());
  EXPECT_DOUBLE_EQ(p.b0, p.target_value);
}

TEST(Spanning, DomainErrors) {
  using statichedge::DomainError;
  EXPECT_THROW(sp::build_gq1(kBs, kTarget, 100, {1.2, 80, 120}, 5), DomainError);
  EXPECT_THROW(sp::build_gq1(kBs, kTarget, 100, {kU1, 120, 80}, 5), DomainError);
  EXPECT_THROW(sp::build_gq2(kBs, kTarget, 100, {kU1, 80, 120}, {kU1 + 0.01, 60, 120}, 5),
               DomainError);
  EXPECT_THROW(sp::build_gq2(kBs, kTarget, 100, {kU1, 80, 120}, {kU1 - 5e-5, 60, 120}, 5),
               DomainError);
  EXPECT_THROW(sp::build_cw_a(kBs, kTarget, 100, {kU1, 120, 150}), DomainError);
  EXPECT_THROW(sp::build_gq1(kBs, {100, 1, m::OptionKind::put}, 100, {kU1, 80, 120}, 5),
               DomainError);
  const sp::StrikeBand five[] = {{0.5, 80, 120}, {0.4, 80, 120}, {0.3, 80, 120},
                                 {0.2, 80, 120}, {0.1, 80, 120}};
  EXPECT_THROW(sp::build_gq_n(kBs, kTarget, 100, five, 3), DomainError);
  EXPECT_THROW(sp::build_gq1(kBs, kTarget, 100, {kU1, 80, 120}, 0), DomainError);
}

TEST(Spanning, MethodNames) {
  for (auto method : {sp::Method::cw_a, sp::Method::cw_b, sp::Method::gq1, sp::Method::gq2,
                      sp::Method::gqn}) {
    EXPECT_EQ(sp::parse_method(sp::to_string(method)), method);
  }
  EXPECT_EQ(sp::parse_method("gqn"), sp::Method::gqn);
  EXPECT_THROW(sp::parse_method("GQ7"), statichedge::DomainError);
}
