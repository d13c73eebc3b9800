#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "statichedge/models.hpp"
#include "statichedge/spanning.hpp"
#include "statichedge/statistics.hpp"

namespace statichedge::simulation {

using models::ModelSpec;

struct SimConfig {
  int n_paths = 1000;
  std::uint64_t seed = 0;
  double step = 0.004;
  double horizon = 0.0833;
  double spot0 = 100.0;
  /// Extra grid times in (0, horizon), e.g. leg maturities before the
  /// horizon. Merged into the uniform grid.
  std::vector<double> checkpoints;
  /// Worker threads; 0 uses every hardware thread. Results do not depend on it.
  unsigned threads = 0;
};

/// Requires horizon to be a whole number of steps (to 1e-12).
void validate(const SimConfig& cfg);

/// Config with step = horizon / round(horizon / nominal_step).
SimConfig make_config(int n_paths, std::uint64_t seed, double horizon, double nominal_step,
                      double spot0 = 100.0);

/// Uniform grid 0, h, ..., horizon merged with the checkpoints.
std::vector<double> time_grid(const SimConfig& cfg);

/// Row-major n_paths x times.size() matrix.
struct Matrix {
  std::vector<double> times;
  std::size_t n_paths = 0;
  std::vector<double> values;

  std::size_t n_times() const noexcept { return times.size(); }
  double& at(std::size_t path, std::size_t i) { return values[path * times.size() + i]; }
  double at(std::size_t path, std::size_t i) const { return values[path * times.size() + i]; }
  std::span<const double> row(std::size_t path) const {
    return {values.data() + path * times.size(), times.size()};
  }
  std::vector<double> column(std::size_t i) const;
  /// Index of the grid time equal to t (within 1e-9); throws if absent.
  std::size_t time_index(double t) const;
};

using PathSet = Matrix;
using ErrorMatrix = Matrix;

/// Exact stepping under the real-world drift mu. Jumps keep their
/// risk-neutral law; only the drift changes, so E[S_t] = S0 e^{(mu - q) t}.
/// Path p uses its own generator streams seeded from (seed, p).
PathSet simulate_paths(const ModelSpec& model, const SimConfig& cfg);

/// Discounted error e^{-r t}(V_t - C_t) of a delta hedge rebalanced on the
/// path grid, started from the target premium.
ErrorMatrix delta_hedge_run(const PathSet& paths, const ModelSpec& model,
                            const models::OptionRef& target, unsigned threads = 0);

/// Discounted error e^{-r t}(H_t - C_t) of a static portfolio: alive legs at
/// model prices, b0 rolled at r, matured payoffs reinvested at r. Legs that
/// mature before the horizon must fall on the grid.
ErrorMatrix static_hedge_run(const PathSet& paths, const spanning::HedgePortfolio& portfolio,
                             const ModelSpec& model, unsigned threads = 0);

/// Summary statistics of the cross-path errors at grid time t.
statistics::HedgeErrorStats summarize_at(const ErrorMatrix& errors, double t);

struct PfeCurves {
  std::vector<double> times;
  std::vector<double> levels;
  std::vector<std::vector<double>> series;  // series[level][time]
};

PfeCurves pfe_curves(const ErrorMatrix& errors, std::span<const double> levels);
PfeCurves pfe_curves(const ErrorMatrix& errors);  // levels {95, 5}

/// One row per path: path,t0,t1,...
void write_errors_csv(std::ostream& out, const ErrorMatrix& errors);
/// One row per grid time: t,p95,p05.
void write_pfe_csv(std::ostream& out, const PfeCurves& curves);

}  // namespace statichedge::simulation
