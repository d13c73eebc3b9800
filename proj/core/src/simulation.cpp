#include "statichedge/simulation.hpp"

#include <algorithm>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "statichedge/parallel.hpp"

namespace statichedge::simulation {
namespace {

constexpr double kGridTolerance = 1e-9;
constexpr int kMaxJumpsPerStep = 64;

// Per-path generator stream; stream 0 drives the diffusion, 1 the jumps.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t path, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32),
                    stream};
  return std::mt19937_64(seq);
}

// Uniform on the open interval (0, 1).
double uniform(std::mt19937_64& gen) {
  return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
}

double standard_normal(std::mt19937_64& gen) {
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * uniform(gen));
}

int poisson(std::mt19937_64& gen, double mean) {
  const double u = uniform(gen);
  double p = std::exp(-mean);
  double cdf = p;
  int k = 0;
  while (u > cdf && k < kMaxJumpsPerStep) {
    ++k;
    p *= mean / k;
    cdf += p;
  }
  return k;
}

struct Dynamics {
  double drift;  // per unit time, log scale
  double sigma;
  double lambda = 0.0;
  double jump_mean = 0.0;
  double jump_vol = 0.0;
};

Dynamics dynamics(const ModelSpec& model) {
  const double q = models::dividend_yield(model);
  const double mu = models::real_world_drift(model);
  if (const auto* bs = std::get_if<models::BsParams>(&model)) {
    return {mu - q - 0.5 * bs->sigma * bs->sigma, bs->sigma};
  }
  const auto& p = std::get<models::MjdParams>(model);
  const double compensator = p.lambda == 0.0 ? 0.0 : p.lambda * p.jump_compensator();
  return {mu - q - compensator - 0.5 * p.sigma * p.sigma, p.sigma, p.lambda, p.jump_mean,
          p.jump_vol};
}

std::vector<models::Kernel> target_kernels(const ModelSpec& model,
                                           const std::vector<double>& times,
                                           const models::OptionRef& target) {
  if (target.kind != models::OptionKind::call) {
    throw DomainError("hedge simulation supports call targets only");
  }
  if (!(times.back() < target.maturity)) {
    throw DomainError("simulation horizon must precede the target maturity");
  }
  std::vector<models::Kernel> kernels;
  kernels.reserve(times.size());
  for (double t : times) kernels.emplace_back(model, target.maturity - t);
  return kernels;
}

Matrix empty_like(const Matrix& paths) {
  Matrix out;
  out.times = paths.times;
  out.n_paths = paths.n_paths;
  out.values.assign(paths.values.size(), 0.0);
  return out;
}

}  // namespace

void validate(const SimConfig& cfg) {
  if (cfg.n_paths < 1) throw DomainError("n_paths must be >= 1");
  if (!(cfg.step > 0.0) || !std::isfinite(cfg.step)) throw DomainError("step must be > 0");
  if (!(cfg.horizon > 0.0) || !std::isfinite(cfg.horizon)) {
    throw DomainError("horizon must be > 0");
  }
  if (!(cfg.spot0 > 0.0) || !std::isfinite(cfg.spot0)) throw DomainError("spot0 must be > 0");
  const double steps = std::round(cfg.horizon / cfg.step);
  if (steps < 1.0 || std::abs(steps * cfg.step - cfg.horizon) > 1e-12) {
    std::ostringstream msg;
    msg << "horizon " << cfg.horizon << " is not a whole number of steps of " << cfg.step;
    throw DomainError(msg.str());
  }
  for (double c : cfg.checkpoints) {
    if (!(c > 0.0 && c <= cfg.horizon + kGridTolerance)) {
      std::ostringstream msg;
      msg << "checkpoint " << c << " outside (0, " << cfg.horizon << "]";
      throw DomainError(msg.str());
    }
  }
}

SimConfig make_config(int n_paths, std::uint64_t seed, double horizon, double nominal_step,
                      double spot0) {
  if (!(nominal_step > 0.0) || !(horizon > 0.0)) {
    throw DomainError("horizon and step must be > 0");
  }
  SimConfig cfg;
  cfg.n_paths = n_paths;
  cfg.seed = seed;
  cfg.horizon = horizon;
  cfg.step = horizon / std::max(1.0, std::round(horizon / nominal_step));
  cfg.spot0 = spot0;
  return cfg;
}

std::vector<double> time_grid(const SimConfig& cfg) {
  validate(cfg);
  const auto steps = static_cast<std::size_t>(std::round(cfg.horizon / cfg.step));
  std::vector<double> times(steps + 1);
  for (std::size_t i = 0; i < steps; ++i) times[i] = static_cast<double>(i) * cfg.step;
  times[steps] = cfg.horizon;
  for (double c : cfg.checkpoints) {
    const auto it = std::lower_bound(times.begin(), times.end(), c - kGridTolerance);
    if (it != times.end() && std::abs(*it - c) <= kGridTolerance) {
      if (it != times.begin() && it + 1 != times.end()) *it = c;
    } else {
      times.insert(it, c);
    }
  }
  return times;
}

std::vector<double> Matrix::column(std::size_t i) const {
  std::vector<double> out(n_paths);
  for (std::size_t p = 0; p < n_paths; ++p) out[p] = at(p, i);
  return out;
}

std::size_t Matrix::time_index(double t) const {
  const auto it = std::lower_bound(times.begin(), times.end(), t - kGridTolerance);
  if (it == times.end() || std::abs(*it - t) > kGridTolerance) {
    std::ostringstream msg;
    msg << "time " << t << " is not on the simulation grid";
    throw DomainError(msg.str());
  }
  return static_cast<std::size_t>(it - times.begin());
}

PathSet simulate_paths(const ModelSpec& model, const SimConfig& cfg) {
  models::validate(model);
  PathSet paths;
  paths.times = time_grid(cfg);
  paths.n_paths = static_cast<std::size_t>(cfg.n_paths);
  paths.values.resize(paths.n_paths * paths.times.size());
  const Dynamics dyn = dynamics(model);
  const std::size_t n_times = paths.times.size();

  parallel_for(paths.n_paths, cfg.threads, [&](std::size_t p) {
    auto diffusion = make_stream(cfg.seed, p, 0);
    auto jumps = make_stream(cfg.seed, p, 1);
    double* row = paths.values.data() + p * n_times;
    row[0] = cfg.spot0;
    for (std::size_t i = 1; i < n_times; ++i) {
      const double dt = paths.times[i] - paths.times[i - 1];
      double log_step = dyn.drift * dt + dyn.sigma * std::sqrt(dt) * standard_normal(diffusion);
      if (dyn.lambda > 0.0) {
        const int count = poisson(jumps, dyn.lambda * dt);
        if (count > 0) {
          log_step += dyn.jump_mean * count +
                      dyn.jump_vol * std::sqrt(static_cast<double>(count)) *
                          standard_normal(jumps);
        }
      }
      row[i] = row[i - 1] * std::exp(log_step);
    }
  });
  return paths;
}

ErrorMatrix delta_hedge_run(const PathSet& paths, const ModelSpec& model,
                            const models::OptionRef& target, unsigned threads) {
  models::validate(model);
  const auto kernels = target_kernels(model, paths.times, target);
  const double r = models::risk_free_rate(model);
  const std::size_t n_times = paths.times.size();
  std::vector<double> growth(n_times, 1.0), discount(n_times, 1.0);
  for (std::size_t i = 1; i < n_times; ++i) {
    growth[i] = std::exp(r * (paths.times[i] - paths.times[i - 1]));
    discount[i] = std::exp(-r * paths.times[i]);
  }

  ErrorMatrix errors = empty_like(paths);
  parallel_for(paths.n_paths, threads, [&](std::size_t p) {
    const auto s = paths.row(p);
    double value = kernels[0].call(s[0], target.strike);
    double hedge = kernels[0].delta(s[0], target.strike);
    errors.at(p, 0) = 0.0;
    for (std::size_t i = 1; i < n_times; ++i) {
      value = hedge * s[i] + (value - hedge * s[i - 1]) * growth[i];
      errors.at(p, i) = discount[i] * (value - kernels[i].call(s[i], target.strike));
      hedge = kernels[i].delta(s[i], target.strike);
    }
  });
  return errors;
}

ErrorMatrix static_hedge_run(const PathSet& paths, const spanning::HedgePortfolio& portfolio,
                             const ModelSpec& model, unsigned threads) {
  models::validate(model);
  const auto target_k = target_kernels(model, paths.times, portfolio.target);
  const double r = models::risk_free_rate(model);
  const std::size_t n_times = paths.times.size();
  const double horizon = paths.times.back();

  struct Group {
    double maturity;
    std::size_t expiry_index;  // n_times when alive through the horizon
    std::vector<spanning::HedgeLeg> legs;
    std::vector<models::Kernel> kernels;  // one per grid time before expiry
  };
  std::map<double, std::vector<spanning::HedgeLeg>> by_maturity;
  for (const auto& leg : portfolio.legs) by_maturity[leg.maturity].push_back(leg);

  std::vector<Group> groups;
  for (auto& [maturity, legs] : by_maturity) {
    Group g{maturity, n_times, std::move(legs), {}};
    if (maturity <= horizon + kGridTolerance) {
      g.expiry_index = paths.time_index(maturity);
    }
    for (std::size_t i = 0; i < std::min(g.expiry_index, n_times); ++i) {
      g.kernels.emplace_back(model, maturity - paths.times[i]);
    }
    groups.push_back(std::move(g));
  }

  std::vector<double> cash(n_times), discount(n_times);
  for (std::size_t i = 0; i < n_times; ++i) {
    cash[i] = portfolio.b0 * std::exp(r * paths.times[i]);
    discount[i] = std::exp(-r * paths.times[i]);
  }

  ErrorMatrix errors = empty_like(paths);
  parallel_for(paths.n_paths, threads, [&](std::size_t p) {
    const auto s = paths.row(p);
    std::vector<double> payoff(groups.size(), 0.0);
    for (std::size_t i = 0; i < n_times; ++i) {
      double value = cash[i];
      for (std::size_t g = 0; g < groups.size(); ++g) {
        const Group& grp = groups[g];
        if (i < grp.expiry_index) {
          for (const auto& leg : grp.legs) {
            value += leg.weight * grp.kernels[i].call(s[i], leg.strike);
          }
          continue;
        }
        if (i == grp.expiry_index) {
          for (const auto& leg : grp.legs) {
            payoff[g] += leg.weight * std::max(s[i] - leg.strike, 0.0);
          }
        }
        value += payoff[g] * std::exp(r * (paths.times[i] - grp.maturity));
      }
      const double target = target_k[i].call(s[i], portfolio.target.strike);
      errors.at(p, i) = discount[i] * (value - target);
    }
  });
  return errors;
}

statistics::HedgeErrorStats summarize_at(const ErrorMatrix& errors, double t) {
  return statistics::summarize(errors.column(errors.time_index(t)));
}

PfeCurves pfe_curves(const ErrorMatrix& errors, std::span<const double> levels) {
  if (errors.n_paths < 2) throw DomainError("pfe_curves needs at least two paths");
  PfeCurves out;
  out.times = errors.times;
  out.levels.assign(levels.begin(), levels.end());
  out.series.assign(levels.size(), std::vector<double>(errors.n_times()));
  for (std::size_t i = 0; i < errors.n_times(); ++i) {
    auto column = errors.column(i);
    std::sort(column.begin(), column.end());
    for (std::size_t l = 0; l < levels.size(); ++l) {
      out.series[l][i] = statistics::percentile_sorted(column, levels[l]);
    }
  }
  return out;
}

PfeCurves pfe_curves(const ErrorMatrix& errors) {
  constexpr double levels[] = {95.0, 5.0};
  return pfe_curves(errors, levels);
}

void write_errors_csv(std::ostream& out, const ErrorMatrix& errors) {
  const auto old_precision = out.precision(17);
  out << "path";
  for (double t : errors.times) out << ",t=" << t;
  out << '\n';
  for (std::size_t p = 0; p < errors.n_paths; ++p) {
    out << p;
    for (double e : errors.row(p)) out << ',' << e;
    out << '\n';
  }
  out.precision(old_precision);
}

void write_pfe_csv(std::ostream& out, const PfeCurves& curves) {
  const auto old_precision = out.precision(17);
  out << 't';
  for (double level : curves.levels) out << ",p" << level;
  out << '\n';
  for (std::size_t i = 0; i < curves.times.size(); ++i) {
    out << curves.times[i];
    for (const auto& s : curves.series) out << ',' << s[i];
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace statichedge::simulation
