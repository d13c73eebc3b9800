#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "statichedge/models.hpp"

namespace statichedge::spanning {

using models::ModelSpec;
using models::OptionRef;

/// Strikes [lo, hi] available for options expiring at `maturity`.
struct StrikeBand {
  double maturity = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

void validate(const StrikeBand& band);

struct HedgeLeg {
  double strike = 0.0;
  double maturity = 0.0;
  double weight = 0.0;
};

enum class Method { cw_a, cw_b, gq1, gq2, gqn };

std::string to_string(Method method);
/// Accepts "CW_a", "CW_b", "GQ1", "GQ2", "GQn" (case-insensitive).
Method parse_method(const std::string& name);

/// A static hedge built at time 0.
///
/// `target_value` is the time-0 price of the target and `b0` the cash left
/// after buying the legs: b0 = target_value - sum of leg prices. The
/// residual error reported as EDL is -b0 (hedge minus target).
struct HedgePortfolio {
  OptionRef target;
  double spot = 0.0;
  double target_value = 0.0;
  std::vector<HedgeLeg> legs;  // sorted by (maturity, strike)
  double b0 = 0.0;
  Method method = Method::gq1;
  /// Quadrature order requested (CW_b, GQ*) or selected (CW_a).
  int order = 0;
  /// Set when every candidate leg fell outside the band (CW_b only).
  bool empty = false;

  double hedge_value() const { return target_value - b0; }
  double edl() const { return -b0; }
  double shortest_maturity() const;
};

/// Inner quadrature orders for the modified weights: a Legendre rule on the
/// excluded left interval [0, lo] and a shifted Laguerre rule on [hi, inf).
struct ModifiedWeightConfig {
  int n_inner_gq = 5;
  int n_laguerre = 20;
};

void validate(const ModifiedWeightConfig& cfg);

/// Minimum spacing between consecutive hedge maturities. The modified
/// weights divide by u_{i-1} - u_i and degrade as it shrinks.
inline constexpr double kMinMaturityGap = 1e-4;
/// Maximum number of maturities in a multi-maturity build.
inline constexpr int kMaxBands = 4;

/// Gauss-Hermite strikes and weights for spanning the (K, T) call with
/// maturity-u calls. Strikes ascending. Merton models use the annualized
/// variance in place of sigma^2.
std::vector<HedgeLeg> hermite_strike_map(const ModelSpec& model, double strike,
                                         double maturity, double u, int n);

/// Hermite hedge with the largest order whose strikes all fit in the band.
HedgePortfolio build_cw_a(const ModelSpec& model, const OptionRef& target, double spot,
                          const StrikeBand& band);

/// Order-n Hermite hedge with out-of-band strikes dropped.
HedgePortfolio build_cw_b(const ModelSpec& model, const OptionRef& target, double spot,
                          const StrikeBand& band, int n);

/// Order-n Gauss-Legendre hedge over a single band.
HedgePortfolio build_gq1(const ModelSpec& model, const OptionRef& target, double spot,
                         const StrikeBand& band, int n);

/// Two-maturity hedge: GQ1 legs on band1 plus band2 legs weighted by the
/// modified weight that re-spans the strikes band1 leaves out.
HedgePortfolio build_gq2(const ModelSpec& model, const OptionRef& target, double spot,
                         const StrikeBand& band1, const StrikeBand& band2, int n,
                         const ModifiedWeightConfig& cfg = {});

/// Multi-maturity hedge over bands ordered by strictly decreasing maturity.
HedgePortfolio build_gq_n(const ModelSpec& model, const OptionRef& target, double spot,
                          std::span<const StrikeBand> bands, int n,
                          const ModifiedWeightConfig& cfg = {});

/// As above with one Legendre order per band.
HedgePortfolio build_gq_n(const ModelSpec& model, const OptionRef& target, double spot,
                          std::span<const StrikeBand> bands, std::span<const int> orders,
                          const ModifiedWeightConfig& cfg = {});

/// Weight density of maturity-u2 calls that re-spans the strikes excluded by
/// band1 when hedging `target` with band1.maturity calls.
double modified_weight(const ModelSpec& model, const OptionRef& target, double k2,
                       const StrikeBand& band1, double u2,
                       const ModifiedWeightConfig& cfg = {});

/// Evaluates the chain of modified weights for an ordered list of bands:
/// level 0 is the plain strike-gamma weight at bands[0].maturity, level i
/// integrates level i-1 over the strikes bands[i-1] excludes.
class SpanningWeights {
 public:
  SpanningWeights(const ModelSpec& model, const OptionRef& target,
                  std::span<const StrikeBand> bands, const ModifiedWeightConfig& cfg);

  std::size_t levels() const noexcept { return bands_.size(); }
  double operator()(std::size_t level, double strike) const;

 private:
  double excluded_integral(std::size_t level, double strike) const;

  ModelSpec model_;
  OptionRef target_;
  std::vector<StrikeBand> bands_;
  ModifiedWeightConfig cfg_;
  std::vector<models::Kernel> kernels_;  // kernels_[i]: horizon into level i
};

/// Sum of leg prices at (spot, t); legs expiring exactly at t pay intrinsic.
double portfolio_value(const HedgePortfolio& portfolio, const ModelSpec& model, double spot,
                       double t);

/// Hedge value minus target value (the tables' EDL sign convention).
double edl(double target_value, double hedge_value);

/// Percentage reduction in |EDL| from GQ1 to GQ2. Empty when |EDL_GQ1| is 0.
std::optional<double> pdl(double edl_gq1, double edl_gq2);

}  // namespace statichedge::spanning
