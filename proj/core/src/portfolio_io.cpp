#include "statichedge/portfolio_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

namespace statichedge::io {
namespace {

constexpr const char* kTableHeader = "maturity,strike,weight";

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    throw Error("portfolio record: bad number '" + t + "' for " + what);
  }
  return value;
}

const std::string& field(const std::map<std::string, std::string>& header,
                         const std::string& key) {
  const auto it = header.find(key);
  if (it == header.end()) throw Error("portfolio record: missing header key '" + key + "'");
  return it->second;
}

}  // namespace

void write_portfolio(std::ostream& out, const spanning::HedgePortfolio& p) {
  out << "method=" << spanning::to_string(p.method) << '\n'
      << "target_kind=" << (p.target.kind == models::OptionKind::call ? "call" : "put") << '\n'
      << "target_strike=" << fmt(p.target.strike) << '\n'
      << "target_maturity=" << fmt(p.target.maturity) << '\n'
      << "spot=" << fmt(p.spot) << '\n'
      << "target_value=" << fmt(p.target_value) << '\n'
      << "b0=" << fmt(p.b0) << '\n'
      << "order=" << p.order << '\n'
      << "empty=" << (p.empty ? 1 : 0) << '\n'
      << kTableHeader << '\n';
  for (const auto& leg : p.legs) {
    out << fmt(leg.maturity) << ',' << fmt(leg.strike) << ',' << fmt(leg.weight) << '\n';
  }
}

spanning::HedgePortfolio read_portfolio(std::istream& in) {
  std::map<std::string, std::string> header;
  std::string line;
  bool table = false;
  spanning::HedgePortfolio p;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    if (!table) {
      if (line == kTableHeader) {
        table = true;
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw Error("portfolio record line " + std::to_string(line_no) + ": expected key=value");
      }
      header[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
      continue;
    }
    std::stringstream row(line);
    std::string cell[3];
    for (auto& c : cell) {
      if (!std::getline(row, c, ',')) {
        throw Error("portfolio record line " + std::to_string(line_no) +
                    ": expected maturity,strike,weight");
      }
    }
    const std::string where = "leg on line " + std::to_string(line_no);
    p.legs.push_back({to_double(cell[1], where), to_double(cell[0], where),
                      to_double(cell[2], where)});
  }
  if (!table) throw Error("portfolio record: missing leg table header");

  p.method = spanning::parse_method(field(header, "method"));
  const std::string& kind = field(header, "target_kind");
  if (kind != "call" && kind != "put") throw Error("portfolio record: bad target_kind");
  p.target.kind = kind == "call" ? models::OptionKind::call : models::OptionKind::put;
  p.target.strike = to_double(field(header, "target_strike"), "target_strike");
  p.target.maturity = to_double(field(header, "target_maturity"), "target_maturity");
  p.spot = to_double(field(header, "spot"), "spot");
  p.target_value = to_double(field(header, "target_value"), "target_value");
  p.b0 = to_double(field(header, "b0"), "b0");
  p.order = static_cast<int>(to_double(field(header, "order"), "order"));
  p.empty = to_double(field(header, "empty"), "empty") != 0.0;
  return p;
}

void save_portfolio(const std::filesystem::path& path, const spanning::HedgePortfolio& p) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_portfolio(out, p);
  if (!out) throw Error("write failed for " + path.string());
}

spanning::HedgePortfolio load_portfolio(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  return read_portfolio(in);
}

}  // namespace statichedge::io
