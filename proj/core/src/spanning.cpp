#include "statichedge/spanning.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>

#include "statichedge/quadrature.hpp"

namespace statichedge::spanning {
namespace {

using quadrature::RuleKind;

void require_call_target(const OptionRef& target) {
  if (target.kind != models::OptionKind::call) {
    throw DomainError("static hedges are built for call targets only");
  }
  if (!(target.strike > 0.0) || !(target.maturity > 0.0)) {
    throw DomainError("target strike and maturity must be positive");
  }
}

void require_before_target(const StrikeBand& band, const OptionRef& target) {
  validate(band);
  if (!(band.maturity < target.maturity)) {
    std::ostringstream msg;
    msg << "hedge maturity " << band.maturity << " must precede target maturity "
        << target.maturity;
    throw DomainError(msg.str());
  }
}

void sort_legs(std::vector<HedgeLeg>& legs) {
  std::stable_sort(legs.begin(), legs.end(), [](const HedgeLeg& a, const HedgeLeg& b) {
    return a.maturity != b.maturity ? a.maturity < b.maturity : a.strike < b.strike;
  });
}

HedgePortfolio finish(const ModelSpec& model, const OptionRef& target, double spot,
                      std::vector<HedgeLeg> legs, Method method, int order) {
  HedgePortfolio p;
  p.target = target;
  p.spot = spot;
  p.target_value = models::call_price(model, spot, 0.0, target.strike, target.maturity);
  sort_legs(legs);
  p.legs = std::move(legs);
  p.method = method;
  p.order = order;
  p.b0 = p.target_value - portfolio_value(p, model, spot, 0.0);
  return p;
}

bool inside(const StrikeBand& band, double strike) {
  return strike >= band.lo && strike <= band.hi;
}

}  // namespace

void validate(const StrikeBand& band) {
  if (!(band.maturity > 0.0) || !std::isfinite(band.maturity)) {
    throw DomainError("strike band maturity must be positive");
  }
  if (!(band.lo >= 0.0) || !(band.lo < band.hi) || !std::isfinite(band.hi)) {
    std::ostringstream msg;
    msg << "strike band [" << band.lo << ", " << band.hi << "] must satisfy 0 <= lo < hi < inf";
    throw DomainError(msg.str());
  }
}

void validate(const ModifiedWeightConfig& cfg) {
  if (cfg.n_inner_gq < 1 || cfg.n_laguerre < 1) {
    throw DomainError("modified weight quadrature orders must be >= 1");
  }
}

std::string to_string(Method method) {
  switch (method) {
    case Method::cw_a:
      return "CW_a";
    case Method::cw_b:
      return "CW_b";
    case Method::gq1:
      return "GQ1";
    case Method::gq2:
      return "GQ2";
    case Method::gqn:
      return "GQn";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  std::string key;
  for (char c : name) {
    if (c != '_' && c != '-') key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  static const std::map<std::string, Method> table = {
      {"cwa", Method::cw_a}, {"cwb", Method::cw_b}, {"gq1", Method::gq1},
      {"gq2", Method::gq2},  {"gqn", Method::gqn},
  };
  const auto it = table.find(key);
  if (it == table.end()) throw DomainError("unknown hedge method '" + name + "'");
  return it->second;
}

double HedgePortfolio::shortest_maturity() const {
  double m = target.maturity;
  for (const auto& leg : legs) m = std::min(m, leg.maturity);
  return m;
}

std::vector<HedgeLeg> hermite_strike_map(const ModelSpec& model, double strike,
                                         double maturity, double u, int n) {
  models::validate(model);
  if (!(u < maturity)) {
    throw DomainError("hermite_strike_map: hedge maturity must precede target maturity");
  }
  const auto& rule = quadrature::cached_rule(RuleKind::hermite, n);
  const double tau = maturity - u;
  const double v = models::total_variance_rate(model);
  const double scale = std::sqrt(2.0 * v * tau);
  const double shift =
      (models::dividend_yield(model) - models::risk_free_rate(model) - 0.5 * v) * tau;
  const models::Kernel kernel(model, tau);

  std::vector<HedgeLeg> legs;
  legs.reserve(rule.size());
  for (std::size_t j = 0; j < rule.size(); ++j) {
    const double k = strike * std::exp(rule.nodes[j] * scale + shift);
    const double w = kernel.gamma(k, strike) * k * scale * rule.scaled_weights[j];
    legs.push_back({k, u, w});
  }
  return legs;
}

HedgePortfolio build_cw_a(const ModelSpec& model, const OptionRef& target, double spot,
                          const StrikeBand& band) {
  require_call_target(target);
  require_before_target(band, target);
  const auto fits = [&](int n) {
    const auto legs = hermite_strike_map(model, target.strike, target.maturity, band.maturity, n);
    return std::all_of(legs.begin(), legs.end(),
                       [&](const HedgeLeg& l) { return inside(band, l.strike); });
  };
  if (!fits(1)) {
    std::ostringstream msg;
    msg << "CW_a: band [" << band.lo << ", " << band.hi << "] excludes Hermite center";
    throw DomainError(msg.str());
  }
  int n = 1;
  while (n < quadrature::kMaxOrder && fits(n + 1)) ++n;
  return finish(model, target, spot,
                hermite_strike_map(model, target.strike, target.maturity, band.maturity, n),
                Method::cw_a, n);
}

HedgePortfolio build_cw_b(const ModelSpec& model, const OptionRef& target, double spot,
                          const StrikeBand& band, int n) {
  require_call_target(target);
  require_before_target(band, target);
  auto legs = hermite_strike_map(model, target.strike, target.maturity, band.maturity, n);
  std::erase_if(legs, [&](const HedgeLeg& l) { return !inside(band, l.strike); });
  HedgePortfolio p = finish(model, target, spot, std::move(legs), Method::cw_b, n);
  p.empty = p.legs.empty();
  return p;
}

HedgePortfolio build_gq1(const ModelSpec& model, const OptionRef& target, double spot,
                         const StrikeBand& band, int n) {
  HedgePortfolio p = build_gq_n(model, target, spot, std::span(&band, 1), n);
  p.method = Method::gq1;
  return p;
}

HedgePortfolio build_gq2(const ModelSpec& model, const OptionRef& target, double spot,
                         const StrikeBand& band1, const StrikeBand& band2, int n,
                         const ModifiedWeightConfig& cfg) {
  const StrikeBand bands[] = {band1, band2};
  HedgePortfolio p = build_gq_n(model, target, spot, bands, n, cfg);
  p.method = Method::gq2;
  return p;
}

HedgePortfolio build_gq_n(const ModelSpec& model, const OptionRef& target, double spot,
                          std::span<const StrikeBand> bands, int n,
                          const ModifiedWeightConfig& cfg) {
  const std::vector<int> orders(bands.size(), n);
  return build_gq_n(model, target, spot, bands, orders, cfg);
}

HedgePortfolio build_gq_n(const ModelSpec& model, const OptionRef& target, double spot,
                          std::span<const StrikeBand> bands, std::span<const int> orders,
                          const ModifiedWeightConfig& cfg) {
  if (orders.size() != bands.size()) {
    throw DomainError("build_gq_n: one quadrature order per band required");
  }
  const SpanningWeights weights(model, target, bands, cfg);
  std::vector<HedgeLeg> legs;
  for (std::size_t i = 0; i < bands.size(); ++i) {
    const auto rule = quadrature::map_to_interval(
        quadrature::cached_rule(RuleKind::legendre, orders[i]), bands[i].lo, bands[i].hi);
    for (std::size_t j = 0; j < rule.size(); ++j) {
      legs.push_back({rule.nodes[j], bands[i].maturity,
                      rule.weights[j] * weights(i, rule.nodes[j])});
    }
  }
  const Method method = bands.size() == 1 ? Method::gq1
                        : bands.size() == 2 ? Method::gq2
                                            : Method::gqn;
  return finish(model, target, spot, std::move(legs), method,
                orders.empty() ? 0 : orders.front());
}

double modified_weight(const ModelSpec& model, const OptionRef& target, double k2,
                       const StrikeBand& band1, double u2, const ModifiedWeightConfig& cfg) {
  // Band 2 only contributes its maturity; the strike range is irrelevant here.
  const StrikeBand bands[] = {band1, {u2, 0.0, 1.0}};
  return SpanningWeights(model, target, bands, cfg)(1, k2);
}

SpanningWeights::SpanningWeights(const ModelSpec& model, const OptionRef& target,
                                 std::span<const StrikeBand> bands,
                                 const ModifiedWeightConfig& cfg)
    : model_(model), target_(target), bands_(bands.begin(), bands.end()), cfg_(cfg) {
  models::validate(model_);
  require_call_target(target_);
  validate(cfg_);
  if (bands_.empty()) throw DomainError("at least one strike band is required");
  if (static_cast<int>(bands_.size()) > kMaxBands) {
    std::ostringstream msg;
    msg << "unsupported depth: " << bands_.size() << " maturities (maximum " << kMaxBands << ")";
    throw DomainError(msg.str());
  }
  require_before_target(bands_[0], target_);
  kernels_.emplace_back(model_, target_.maturity - bands_[0].maturity);
  for (std::size_t i = 1; i < bands_.size(); ++i) {
    validate(bands_[i]);
    const double gap = bands_[i - 1].maturity - bands_[i].maturity;
    if (!(gap > 0.0)) {
      throw DomainError("strike band maturities must be strictly decreasing");
    }
    if (gap < kMinMaturityGap) {
      std::ostringstream msg;
      msg << "maturities " << bands_[i].maturity << " and " << bands_[i - 1].maturity
          << " are closer than " << kMinMaturityGap
          << "; the modified weight is singular as the spacing vanishes";
      throw DomainError(msg.str());
    }
    kernels_.emplace_back(model_, gap);
  }
}

double SpanningWeights::operator()(std::size_t level, double strike) const {
  if (level == 0) return kernels_[0].gamma(strike, target_.strike);
  return excluded_integral(level, strike);
}

double SpanningWeights::excluded_integral(std::size_t level, double strike) const {
  const StrikeBand& prev = bands_[level - 1];
  const models::Kernel& kernel = kernels_[level];
  const auto integrand = [&](double k_prev) {
    return (*this)(level - 1, k_prev) * kernel.gamma(strike, k_prev);
  };
  double sum = quadrature::integrate_shifted_laguerre(integrand, prev.hi, cfg_.n_laguerre);
  if (prev.lo > 0.0) {
    sum += quadrature::integrate_bounded(integrand, 0.0, prev.lo, cfg_.n_inner_gq);
  }
  return sum;
}

double portfolio_value(const HedgePortfolio& portfolio, const ModelSpec& model, double spot,
                       double t) {
  double value = 0.0;
  for (const auto& leg : portfolio.legs) {
    if (t > leg.maturity) {
      throw DomainError("portfolio_value: leg expired before valuation time");
    }
    value += leg.weight * models::call_price(model, spot, t, leg.strike, leg.maturity);
  }
  return value;
}

double edl(double target_value, double hedge_value) { return hedge_value - target_value; }

std::optional<double> pdl(double edl_gq1, double edl_gq2) {
  if (edl_gq1 == 0.0 || !std::isfinite(edl_gq1)) return std::nullopt;
  return (std::abs(edl_gq1) - std::abs(edl_gq2)) / std::abs(edl_gq1) * 100.0;
}

}  // namespace statichedge::spanning
