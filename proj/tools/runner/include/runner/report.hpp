#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "runner/config.hpp"
#include "statichedge/simulation.hpp"
#include "statichedge/statistics.hpp"

namespace runner {

struct TimedStats {
  double time = 0.0;
  sh::statistics::HedgeErrorStats stats;

  bool operator==(const TimedStats&) const = default;
};

struct PfeSeries {
  std::vector<double> times;
  std::vector<double> p95;
  std::vector<double> p05;

  bool operator==(const PfeSeries&) const = default;
};

struct MethodResult {
  std::string label;
  std::string method;  // "CW_a", ..., or "DH"
  int order = 0;       // selected order for CW_a
  std::optional<double> edl;
  std::size_t legs = 0;
  bool empty = false;
  std::vector<TimedStats> stats;
  std::optional<PfeSeries> pfe;

  bool operator==(const MethodResult&) const = default;
};

struct ReportRow {
  std::optional<SweepValue> series_value;
  SweepValue sweep_value;
  double target_value = 0.0;
  std::vector<MethodResult> methods;
  /// Present iff GQ1 and GQ2 EDLs are both present and EDL_GQ1 != 0.
  std::optional<double> pdl;

  bool operator==(const ReportRow&) const = default;
};

struct Report {
  std::string name;
  std::string sweep_variable;
  std::string series_variable;  // empty without a series block
  std::vector<ReportRow> rows;
  /// Version and every resolved default, as a JSON document.
  std::string metadata;

  bool operator==(const Report&) const = default;
};

struct RunOptions {
  unsigned threads = 0;
  std::optional<std::uint64_t> seed;  // overrides simulation.seed
  bool pfe = false;                   // attach PFE curves to simulation rows
};

/// Static portfolio for one resolved method (not DH).
sh::spanning::HedgePortfolio build_portfolio(const Resolved& r, const ExperimentConfig& cfg,
                                             const MethodSpec& m);

/// One row per (series value, sweep value) in config order. Numerical
/// failures are rethrown as NumericalError naming the sweep value.
Report run_experiment(const ExperimentConfig& cfg, const RunOptions& options = {});

enum class Format { csv, json, plot };
Format parse_format(const std::string& name);

void emit_csv(std::ostream& out, const Report& report);
void emit_json(std::ostream& out, const Report& report);
/// Long-format plot series: series,method,x,y,log10_abs_y for sweeps;
/// series,method,t,p95,p05 when PFE curves are attached.
void emit_plot(std::ostream& out, const Report& report);
void emit(std::ostream& out, const Report& report, Format format);

/// Writes <out_dir>/<name>.<ext> and returns the path.
std::filesystem::path emit_file(const std::filesystem::path& out_dir, const Report& report,
                                Format format);

Report parse_json_report(const std::string& text);

std::string format_sweep_value(const SweepValue& value, SweepVariable variable);

}  // namespace runner
