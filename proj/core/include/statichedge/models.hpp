#pragma once

#include <string>
#include <variant>
#include <vector>

#include "statichedge/errors.hpp"

namespace statichedge::models {

/// Black-Scholes dynamics. `mu` is the real-world drift, used only when
/// simulating paths; pricing uses r and the dividend yield.
struct BsParams {
  double r = 0.0;
  double dividend_yield = 0.0;
  double sigma = 0.2;
  double mu = 0.0;
};

/// Merton jump diffusion: lognormal jumps with log-mean `jump_mean` and
/// log-volatility `jump_vol`, arriving at Poisson intensity `lambda`.
struct MjdParams {
  double r = 0.0;
  double dividend_yield = 0.0;
  double sigma = 0.2;
  double mu = 0.0;
  double lambda = 0.0;
  double jump_mean = 0.0;
  double jump_vol = 0.1;

  /// Mean relative jump size g = e^{mu_j + sigma_j^2/2} - 1.
  double jump_compensator() const;
};

using ModelSpec = std::variant<BsParams, MjdParams>;

/// Throws DomainError when parameters violate the model invariants.
void validate(const ModelSpec& model);

double risk_free_rate(const ModelSpec& model);
double dividend_yield(const ModelSpec& model);
double real_world_drift(const ModelSpec& model);
std::string model_name(const ModelSpec& model);

/// sigma^2 + lambda (mu_j^2 + sigma_j^2): total annual return variance.
double annualized_variance(const MjdParams& params);

/// sigma^2 for Black-Scholes, the annualized variance for Merton.
double total_variance_rate(const ModelSpec& model);

enum class OptionKind { call, put };

struct OptionRef {
  double strike = 100.0;
  double maturity = 1.0;
  OptionKind kind = OptionKind::call;
};

double norm_pdf(double x);
double norm_cdf(double x);

/// One lognormal component of the Poisson mixture over a horizon tau:
/// probability, drift rate r_n and variance rate sigma_n^2. Black-Scholes is
/// the single component {1, r, sigma^2}.
struct MixtureComponent {
  double probability;
  double rate;
  double variance;
};

/// Series truncation: stop at the first n >= kMinTerms past the Poisson mean
/// with Pr(n) below kTailProbability; fail if kMaxTerms is reached first.
inline constexpr int kMinTerms = 20;
inline constexpr int kMaxTerms = 180;
inline constexpr double kTailProbability = 1e-14;
/// Lower bound applied to the time to expiry inside the d-formulas.
inline constexpr double kTauFloor = 1e-10;

/// Precomputed mixture for a fixed model and horizon tau = T - t. Reuse it
/// when pricing many strikes or spots at the same horizon.
class Kernel {
 public:
  Kernel(const ModelSpec& model, double tau);

  double tau() const noexcept { return tau_; }
  const std::vector<MixtureComponent>& components() const noexcept { return components_; }

  double call(double spot, double strike) const;
  double delta(double spot, double strike) const;
  /// Second derivative of the call price in its price-level argument x.
  double gamma(double x, double strike) const;

 private:
  struct Term {
    double weight;  // Pr(n) e^{(r_n - q) tau}
    double vol;     // sigma_n sqrt(tau)
    double drift;   // (r_n - q + sigma_n^2 / 2) tau
  };

  double tau_;
  double discount_;
  std::vector<MixtureComponent> components_;
  std::vector<Term> terms_;
};

/// Mixture components for horizon tau (exposed for tests of the truncation).
std::vector<MixtureComponent> mixture(const ModelSpec& model, double tau, int extra_terms = 0);

/// European call C(S, t, K, T). At t == T returns the intrinsic value.
double call_price(const ModelSpec& model, double spot, double t, double strike,
                  double maturity);

/// Put via put-call parity.
double put_price(const ModelSpec& model, double spot, double t, double strike,
                 double maturity);

double price(const ModelSpec& model, double spot, double t, const OptionRef& option);

/// dC/dS of the implemented call price series.
double delta(const ModelSpec& model, double spot, double t, double strike, double maturity);

/// w(x) = d^2 C / dx^2 (x, u, K, T): the static-hedge weight density of
/// maturity-u calls struck at x when spanning the (K, T) call.
double strike_gamma_weight(const ModelSpec& model, double x, double u, double strike,
                           double maturity);

}  // namespace statichedge::models
