#include "statichedge/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace statichedge::models {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

double checked_tau(double t, double maturity, const char* where) {
  if (!(t <= maturity)) {
    std::ostringstream msg;
    msg << where << ": valuation time " << t << " is after expiry " << maturity;
    throw DomainError(msg.str());
  }
  return maturity - t;
}

void check_positive(double spot, double strike, const char* where) {
  if (!(spot > 0.0) || !(strike > 0.0) || !std::isfinite(spot) || !std::isfinite(strike)) {
    std::ostringstream msg;
    msg << where << ": spot and strike must be positive and finite (S=" << spot
        << ", K=" << strike << ")";
    throw DomainError(msg.str());
  }
}

}  // namespace

double MjdParams::jump_compensator() const {
  return std::expm1(jump_mean + 0.5 * jump_vol * jump_vol);
}

void validate(const ModelSpec& model) {
  std::visit(Overloaded{
                 [](const BsParams& p) {
                   require(std::isfinite(p.r) && std::isfinite(p.dividend_yield) &&
                               std::isfinite(p.mu),
                           "BS parameters must be finite");
                   require(p.sigma > 0.0 && std::isfinite(p.sigma), "BS sigma must be > 0");
                 },
                 [](const MjdParams& p) {
                   require(std::isfinite(p.r) && std::isfinite(p.dividend_yield) &&
                               std::isfinite(p.mu) && std::isfinite(p.jump_mean),
                           "MJD parameters must be finite");
                   require(p.sigma > 0.0 && std::isfinite(p.sigma), "MJD sigma must be > 0");
                   require(p.jump_vol > 0.0 && std::isfinite(p.jump_vol),
                           "MJD jump volatility must be > 0");
                   require(p.lambda >= 0.0 && std::isfinite(p.lambda),
                           "MJD jump intensity must be >= 0");
                   require(std::isfinite(p.jump_compensator()),
                           "MJD mean jump size is not finite");
                 },
             },
             model);
}

double risk_free_rate(const ModelSpec& model) {
  return std::visit([](const auto& p) { return p.r; }, model);
}

double dividend_yield(const ModelSpec& model) {
  return std::visit([](const auto& p) { return p.dividend_yield; }, model);
}

double real_world_drift(const ModelSpec& model) {
  return std::visit([](const auto& p) { return p.mu; }, model);
}

std::string model_name(const ModelSpec& model) {
  return std::holds_alternative<BsParams>(model) ? "BS" : "MJD";
}

double annualized_variance(const MjdParams& params) {
  return params.sigma * params.sigma +
         params.lambda * (params.jump_mean * params.jump_mean + params.jump_vol * params.jump_vol);
}

double total_variance_rate(const ModelSpec& model) {
  return std::visit(Overloaded{
                        [](const BsParams& p) { return p.sigma * p.sigma; },
                        [](const MjdParams& p) { return annualized_variance(p); },
                    },
                    model);
}

double norm_pdf(double x) {
  return std::exp(-0.5 * x * x) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

std::vector<MixtureComponent> mixture(const ModelSpec& model, double tau, int extra_terms) {
  tau = std::max(tau, kTauFloor);
  if (const auto* bs = std::get_if<BsParams>(&model)) {
    return {{1.0, bs->r, bs->sigma * bs->sigma}};
  }
  const auto& p = std::get<MjdParams>(model);
  if (p.lambda == 0.0) return {{1.0, p.r, p.sigma * p.sigma}};

  const double intensity = p.lambda * tau;
  const double g = p.jump_compensator();
  const double jump_drift = p.jump_mean + 0.5 * p.jump_vol * p.jump_vol;
  std::vector<MixtureComponent> out;
  double prob = std::exp(-intensity);
  int last = -1;
  for (int n = 0; n <= kMaxTerms; ++n) {
    if (n > 0) prob *= intensity / n;
    if (prob > 0.0) {
      out.push_back({prob, p.r - p.lambda * g + n * jump_drift / tau,
                     p.sigma * p.sigma + n * p.jump_vol * p.jump_vol / tau});
    }
    if (last < 0 && n >= kMinTerms && n > intensity && prob < kTailProbability) last = n;
    if (last >= 0 && n >= last + extra_terms) return out;
  }
  std::ostringstream msg;
  msg << "MJD Poisson series did not converge within " << kMaxTerms
      << " terms (lambda*tau = " << intensity << ")";
  throw NumericalError(msg.str());
}

Kernel::Kernel(const ModelSpec& model, double tau)
    : tau_(std::max(tau, kTauFloor)),
      discount_(std::exp(-risk_free_rate(model) * tau_)),
      components_(mixture(model, tau_)) {
  const double q = dividend_yield(model);
  const double sqrt_tau = std::sqrt(tau_);
  terms_.reserve(components_.size());
  for (const auto& c : components_) {
    terms_.push_back({c.probability * std::exp((c.rate - q) * tau_),
                      std::sqrt(c.variance) * sqrt_tau,
                      (c.rate - q + 0.5 * c.variance) * tau_});
  }
}

double Kernel::call(double spot, double strike) const {
  const double log_moneyness = std::log(spot / strike);
  double sum = 0.0;
  for (std::size_t n = 0; n < terms_.size(); ++n) {
    const Term& term = terms_[n];
    const double d1 = (log_moneyness + term.drift) / term.vol;
    sum += term.weight * spot * norm_cdf(d1) -
           components_[n].probability * strike * norm_cdf(d1 - term.vol);
  }
  return std::max(0.0, discount_ * sum);
}

double Kernel::delta(double spot, double strike) const {
  const double log_moneyness = std::log(spot / strike);
  double sum = 0.0;
  for (const Term& term : terms_) {
    sum += term.weight * norm_cdf((log_moneyness + term.drift) / term.vol);
  }
  return discount_ * sum;
}

double Kernel::gamma(double x, double strike) const {
  const double log_moneyness = std::log(x / strike);
  double sum = 0.0;
  for (const Term& term : terms_) {
    sum += term.weight * norm_pdf((log_moneyness + term.drift) / term.vol) / term.vol;
  }
  return discount_ * sum / x;
}

double call_price(const ModelSpec& model, double spot, double t, double strike,
                  double maturity) {
  check_positive(spot, strike, "call_price");
  const double tau = checked_tau(t, maturity, "call_price");
  if (tau == 0.0) return std::max(spot - strike, 0.0);
  return Kernel(model, tau).call(spot, strike);
}

double put_price(const ModelSpec& model, double spot, double t, double strike,
                 double maturity) {
  const double call = call_price(model, spot, t, strike, maturity);
  const double tau = maturity - t;
  const double put = call - spot * std::exp(-dividend_yield(model) * tau) +
                     strike * std::exp(-risk_free_rate(model) * tau);
  return std::max(0.0, put);
}

double price(const ModelSpec& model, double spot, double t, const OptionRef& option) {
  return option.kind == OptionKind::call
             ? call_price(model, spot, t, option.strike, option.maturity)
             : put_price(model, spot, t, option.strike, option.maturity);
}

double delta(const ModelSpec& model, double spot, double t, double strike, double maturity) {
  check_positive(spot, strike, "delta");
  const double tau = checked_tau(t, maturity, "delta");
  if (tau == 0.0) return spot > strike ? 1.0 : 0.0;
  return Kernel(model, tau).delta(spot, strike);
}

double strike_gamma_weight(const ModelSpec& model, double x, double u, double strike,
                           double maturity) {
  check_positive(x, strike, "strike_gamma_weight");
  if (!(u < maturity)) {
    std::ostringstream msg;
    msg << "strike_gamma_weight: hedge maturity " << u << " must precede " << maturity;
    throw DomainError(msg.str());
  }
  return Kernel(model, maturity - u).gamma(x, strike);
}

}  // namespace statichedge::models
