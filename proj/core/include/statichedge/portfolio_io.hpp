#pragma once

#include <filesystem>
#include <iosfwd>

#include "statichedge/spanning.hpp"

namespace statichedge::io {

// Flat text record:
//
//   method=GQ2
//   target_kind=call
//   target_strike=100
//   ...
//   maturity,strike,weight
//   0.0833,61.2,0.0041
//   ...
//
// Header keys: method, target_kind, target_strike, target_maturity, spot,
// target_value, b0, order, empty. Numbers use 17 significant digits so a
// write/read cycle is exact.

void write_portfolio(std::ostream& out, const spanning::HedgePortfolio& portfolio);
spanning::HedgePortfolio read_portfolio(std::istream& in);

void save_portfolio(const std::filesystem::path& path,
                    const spanning::HedgePortfolio& portfolio);
spanning::HedgePortfolio load_portfolio(const std::filesystem::path& path);

}  // namespace statichedge::io
