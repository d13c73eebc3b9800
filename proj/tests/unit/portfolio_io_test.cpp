#include <gtest/gtest.h>

#include <sstream>

#include "statichedge/portfolio_io.hpp"

namespace sp = statichedge::spanning;
namespace io = statichedge::io;

TEST(PortfolioIo, RoundTripIsExact) {
  const statichedge::models::MjdParams model{0.06, 0.02, 0.14, 0.1, 2.0, -0.1, 0.13};
  const auto p = sp::build_gq2(model, {100, 1}, 100, {0.1587, 80, 120}, {0.0833, 60, 120}, 7);
  std::stringstream buf;
  io::write_portfolio(buf, p);
  const auto q = io::read_portfolio(buf);
  EXPECT_EQ(q.method, p.method);
  EXPECT_EQ(q.order, p.order);
  EXPECT_EQ(q.b0, p.b0);
  EXPECT_EQ(q.target_value, p.target_value);
  EXPECT_EQ(q.target.strike, p.target.strike);
  EXPECT_EQ(q.empty, p.empty);
  ASSERT_EQ(q.legs.size(), p.legs.size());
  for (std::size_t i = 0; i < p.legs.size(); ++i) {
    EXPECT_EQ(q.legs[i].strike, p.legs[i].strike);
    EXPECT_EQ(q.legs[i].maturity, p.legs[i].maturity);
    EXPECT_EQ(q.legs[i].weight, p.legs[i].weight);
  }
}

TEST(PortfolioIo, RejectsMalformedRecords) {
  std::stringstream missing("method=GQ1\nmaturity,strike,weight\n0.1,100,1\n");
  EXPECT_THROW(io::read_portfolio(missing), statichedge::Error);
  std::stringstream bad_number(
      "method=GQ1\ntarget_kind=call\ntarget_strike=1x\ntarget_maturity=1\nspot=100\n"
      "target_value=1\nb0=0\norder=1\nempty=0\nmaturity,strike,weight\n");
  EXPECT_THROW(io::read_portfolio(bad_number), statichedge::Error);
  std::stringstream short_row(
      "method=GQ1\ntarget_kind=call\ntarget_strike=100\ntarget_maturity=1\nspot=100\n"
      "target_value=1\nb0=0\norder=1\nempty=0\nmaturity,strike,weight\n0.1,100\n");
  EXPECT_THROW(io::read_portfolio(short_row), statichedge::Error);
}
