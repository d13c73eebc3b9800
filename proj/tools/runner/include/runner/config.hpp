#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "statichedge/errors.hpp"
#include "statichedge/models.hpp"
#include "statichedge/spanning.hpp"

namespace runner {

namespace sh = statichedge;

/// Invalid configuration; `path()` names the offending field, e.g.
/// "sweep.values[2]".
class ConfigError : public sh::Error {
 public:
  ConfigError(std::string path, const std::string& what);
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

struct MethodSpec {
  std::string label;  // column name in reports
  /// Empty for the delta hedge ("DH"), which only exists in simulations.
  std::optional<sh::spanning::Method> method;
  int order = 0;  // unused by CW_a and DH

  bool is_delta_hedge() const { return !method.has_value(); }
};

enum class SweepVariable { none, quad_points, band, u1, u2, lambda, mu_j, sigma_j };

std::string to_string(SweepVariable v);
SweepVariable parse_sweep_variable(const std::string& name);

/// A sweep value: a number, or for band sweeps one [lo, hi] per band.
struct SweepValue {
  double number = 0.0;
  std::vector<std::pair<double, double>> bands;

  bool operator==(const SweepValue&) const = default;
};

struct SweepSpec {
  SweepVariable variable = SweepVariable::none;
  std::vector<SweepValue> values;
};

/// Grid times may be given as numbers or as the band maturities "u1".."u4".
struct TimeRef {
  std::optional<int> band;  // 0-based band index
  double value = 0.0;
};

struct SimulationSpec {
  int n_paths = 1000;
  double step = 0.004;
  std::uint64_t seed = 0;
  TimeRef horizon{1, 0.0};  // u2
  std::vector<TimeRef> stats_at;  // defaults to the horizon
  std::vector<TimeRef> checkpoints;
};

struct ExperimentConfig {
  std::string name = "experiment";
  sh::models::ModelSpec model;
  /// Keep sigma^2 + lambda (mu_j^2 + sigma_j^2) at this value by adjusting
  /// sigma whenever jump parameters change (MJD only).
  std::optional<double> hold_variance;
  sh::models::OptionRef target;
  double spot = 100.0;
  std::vector<sh::spanning::StrikeBand> bands;
  std::vector<MethodSpec> methods;
  sh::spanning::ModifiedWeightConfig modified_weight;
  SweepSpec sweep;
  /// Optional outer loop, e.g. one curve per u1 value.
  std::optional<SweepSpec> series;
  std::optional<SimulationSpec> simulation;
};

/// Parses and fully validates a YAML config. Throws ConfigError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Model, bands and methods after applying one series and sweep value.
struct Resolved {
  sh::models::ModelSpec model;
  std::vector<sh::spanning::StrikeBand> bands;
  std::vector<MethodSpec> methods;
};

Resolved resolve(const ExperimentConfig& cfg, const SweepValue* series_value,
                 const SweepValue& sweep_value);

/// Validates one resolved combination; `where` prefixes error paths.
void validate(const ExperimentConfig& cfg, const Resolved& r, const std::string& where);

double time_of(const TimeRef& ref, const std::vector<sh::spanning::StrikeBand>& bands);

}  // namespace runner
