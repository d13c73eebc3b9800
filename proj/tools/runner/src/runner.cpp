#include "runner/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <ostream>

#include "statichedge/parallel.hpp"
#include "statichedge/quadrature.hpp"

#ifndef STATICHEDGE_VERSION
#define STATICHEDGE_VERSION "unknown"
#endif

namespace runner {
namespace {

using sh::spanning::HedgePortfolio;
using sh::spanning::Method;
using nlohmann::ordered_json;

std::optional<double> row_pdl(const std::vector<MethodResult>& methods) {
  std::optional<double> gq1, gq2;
  for (const auto& m : methods) {
    if (m.method == "GQ1" && !gq1) gq1 = m.edl;
    if (m.method == "GQ2" && !gq2) gq2 = m.edl;
  }
  if (!gq1 || !gq2) return std::nullopt;
  return sh::spanning::pdl(*gq1, *gq2);
}

ReportRow run_row(const ExperimentConfig& cfg, const RunOptions& options,
                  const SweepValue* series_value, const SweepValue& sweep_value,
                  unsigned threads) {
  const Resolved r = resolve(cfg, series_value, sweep_value);
  ReportRow row;
  if (series_value) row.series_value = *series_value;
  row.sweep_value = sweep_value;
  row.target_value = sh::models::call_price(r.model, cfg.spot, 0.0, cfg.target.strike,
                                            cfg.target.maturity);

  std::vector<std::optional<HedgePortfolio>> portfolios;
  for (const auto& m : r.methods) {
    MethodResult res;
    res.label = m.label;
    if (m.is_delta_hedge()) {
      res.method = "DH";
      portfolios.emplace_back();
    } else {
      HedgePortfolio p = build_portfolio(r, cfg, m);
      res.method = sh::spanning::to_string(*m.method);
      res.order = p.order;
      res.edl = p.edl();
      res.legs = p.legs.size();
      res.empty = p.empty;
      portfolios.emplace_back(std::move(p));
    }
    row.methods.push_back(std::move(res));
  }
  row.pdl = row_pdl(row.methods);

  if (!cfg.simulation) return row;
  const SimulationSpec& spec = *cfg.simulation;
  const double horizon = time_of(spec.horizon, r.bands);
  auto sim = sh::simulation::make_config(spec.n_paths, options.seed.value_or(spec.seed),
                                         horizon, spec.step, cfg.spot);
  sim.threads = threads;
  for (const auto& band : r.bands) {
    if (band.maturity < horizon) sim.checkpoints.push_back(band.maturity);
  }
  for (const auto& t : spec.checkpoints) sim.checkpoints.push_back(time_of(t, r.bands));
  for (const auto& t : spec.stats_at) sim.checkpoints.push_back(time_of(t, r.bands));

  const auto paths = sh::simulation::simulate_paths(r.model, sim);
  for (std::size_t i = 0; i < r.methods.size(); ++i) {
    const auto errors =
        portfolios[i] ? sh::simulation::static_hedge_run(paths, *portfolios[i], r.model, threads)
                      : sh::simulation::delta_hedge_run(paths, r.model, cfg.target, threads);
    for (const auto& t : spec.stats_at) {
      const double time = time_of(t, r.bands);
      row.methods[i].stats.push_back({time, sh::simulation::summarize_at(errors, time)});
    }
    if (options.pfe) {
      const auto curves = sh::simulation::pfe_curves(errors);
      row.methods[i].pfe = PfeSeries{curves.times, curves.series[0], curves.series[1]};
    }
  }
  return row;
}

std::string metadata(const ExperimentConfig& cfg, const RunOptions& options) {
  ordered_json meta;
  meta["version"] = STATICHEDGE_VERSION;
  meta["model"] = sh::models::model_name(cfg.model);
  ordered_json defaults;
  defaults["modified_weight_n_inner_gq"] = cfg.modified_weight.n_inner_gq;
  defaults["modified_weight_n_laguerre"] = cfg.modified_weight.n_laguerre;
  defaults["max_quadrature_order"] = sh::quadrature::kMaxOrder;
  defaults["max_laguerre_order"] = sh::quadrature::kMaxLaguerreOrder;
  defaults["mixture_min_terms"] = sh::models::kMinTerms;
  defaults["mixture_max_terms"] = sh::models::kMaxTerms;
  defaults["mixture_tail_probability"] = sh::models::kTailProbability;
  defaults["min_maturity_gap"] = sh::spanning::kMinMaturityGap;
  if (cfg.hold_variance) defaults["hold_variance"] = *cfg.hold_variance;
  if (cfg.simulation) {
    defaults["simulation_n_paths"] = cfg.simulation->n_paths;
    defaults["simulation_step"] = cfg.simulation->step;
    defaults["simulation_seed"] = options.seed.value_or(cfg.simulation->seed);
    defaults["simulation_grid"] = "horizon / round(horizon / step), band maturities inserted";
    defaults["error_convention"] = "discounted hedge minus target";
    defaults["kurtosis"] = "excess";
    defaults["percentiles"] = "linear interpolation";
  }
  meta["defaults"] = defaults;
  return meta.dump();
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

ordered_json sweep_value_json(const SweepValue& v, SweepVariable var) {
  if (var != SweepVariable::band) return v.number;
  ordered_json out = ordered_json::array();
  for (const auto& [lo, hi] : v.bands) out.push_back({lo, hi});
  return out;
}

SweepValue sweep_value_from_json(const ordered_json& j) {
  SweepValue v;
  if (j.is_array()) {
    for (const auto& pair : j) v.bands.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
  } else {
    v.number = j.get<double>();
  }
  return v;
}

ordered_json stats_json(const sh::statistics::HedgeErrorStats& s) {
  return {{"p95", s.p95},           {"p05", s.p05},         {"rmse", s.rmse},
          {"mean", s.mean},         {"mae", s.mae},         {"min", s.min},
          {"max", s.max},           {"skewness", s.skewness}, {"kurtosis", s.kurtosis},
          {"count", s.count},       {"degenerate", s.degenerate}};
}

sh::statistics::HedgeErrorStats stats_from_json(const ordered_json& j) {
  sh::statistics::HedgeErrorStats s;
  s.p95 = j.at("p95");
  s.p05 = j.at("p05");
  s.rmse = j.at("rmse");
  s.mean = j.at("mean");
  s.mae = j.at("mae");
  s.min = j.at("min");
  s.max = j.at("max");
  s.skewness = j.at("skewness");
  s.kurtosis = j.at("kurtosis");
  s.count = j.at("count");
  s.degenerate = j.at("degenerate");
  return s;
}

SweepVariable variable_of(const std::string& name) {
  return name.empty() ? SweepVariable::none : parse_sweep_variable(name);
}

const char* const kStatNames[] = {"rmse", "mean", "mae", "p95", "p05",
                                  "min",  "max",  "skewness", "kurtosis"};

double stat_value(const sh::statistics::HedgeErrorStats& s, int i) {
  const double values[] = {s.rmse, s.mean, s.mae, s.p95, s.p05, s.min, s.max, s.skewness,
                           s.kurtosis};
  return values[i];
}

}  // namespace

sh::spanning::HedgePortfolio build_portfolio(const Resolved& r, const ExperimentConfig& cfg,
                                             const MethodSpec& m) {
  namespace sp = sh::spanning;
  if (m.is_delta_hedge()) throw sh::DomainError("DH has no static portfolio");
  switch (*m.method) {
    case Method::cw_a:
      return sp::build_cw_a(r.model, cfg.target, cfg.spot, r.bands[0]);
    case Method::cw_b:
      return sp::build_cw_b(r.model, cfg.target, cfg.spot, r.bands[0], m.order);
    case Method::gq1:
      return sp::build_gq1(r.model, cfg.target, cfg.spot, r.bands[0], m.order);
    case Method::gq2:
      return sp::build_gq2(r.model, cfg.target, cfg.spot, r.bands[0], r.bands[1], m.order,
                           cfg.modified_weight);
    case Method::gqn:
      return sp::build_gq_n(r.model, cfg.target, cfg.spot, r.bands, m.order,
                            cfg.modified_weight);
  }
  throw sh::DomainError("DH has no static portfolio");
}

std::string format_sweep_value(const SweepValue& value, SweepVariable variable) {
  if (variable == SweepVariable::none) return "";
  if (variable != SweepVariable::band) return fmt(value.number);
  std::string out;
  for (const auto& [lo, hi] : value.bands) {
    if (!out.empty()) out += ';';
    out += "[" + fmt(lo) + " " + fmt(hi) + "]";
  }
  return out;
}

Report run_experiment(const ExperimentConfig& cfg, const RunOptions& options) {
  struct Task {
    const SweepValue* series;
    const SweepValue* sweep;
  };
  std::vector<Task> tasks;
  if (cfg.series) {
    for (const auto& s : cfg.series->values) {
      for (const auto& v : cfg.sweep.values) tasks.push_back({&s, &v});
    }
  } else {
    for (const auto& v : cfg.sweep.values) tasks.push_back({nullptr, &v});
  }

  Report report;
  report.name = cfg.name;
  report.sweep_variable = to_string(cfg.sweep.variable);
  if (cfg.series) report.series_variable = to_string(cfg.series->variable);
  report.metadata = metadata(cfg, options);
  report.rows.resize(tasks.size());

  const unsigned inner = tasks.size() > 1 ? 1u : options.threads;
  sh::parallel_for(tasks.size(), options.threads, [&](std::size_t i) {
    try {
      report.rows[i] = run_row(cfg, options, tasks[i].series, *tasks[i].sweep, inner);
    } catch (const ConfigError&) {
      throw;
    } catch (const sh::Error& e) {
      std::string where;
      if (cfg.series) {
        where = to_string(cfg.series->variable) + "=" +
                format_sweep_value(*tasks[i].series, cfg.series->variable) + ", ";
      }
      where += to_string(cfg.sweep.variable) + "=" +
               format_sweep_value(*tasks[i].sweep, cfg.sweep.variable);
      const std::string what = "at " + where + ": " + e.what();
      if (dynamic_cast<const sh::DomainError*>(&e)) throw sh::DomainError(what);
      throw sh::NumericalError(what);
    }
  });
  return report;
}

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  if (name == "plot") return Format::plot;
  throw ConfigError("--format", "expected csv, json or plot");
}

void emit_csv(std::ostream& out, const Report& report) {
  if (report.rows.empty()) throw sh::Error("cannot emit an empty report");
  const auto series_var = variable_of(report.series_variable);
  const auto sweep_var = variable_of(report.sweep_variable);
  const ReportRow& first = report.rows.front();
  bool any_pdl = false;
  for (const auto& row : report.rows) any_pdl = any_pdl || row.pdl.has_value();

  std::vector<std::string> header;
  if (!report.series_variable.empty()) header.push_back(report.series_variable);
  header.push_back(report.sweep_variable);
  header.push_back("target_value");
  for (const auto& m : first.methods) {
    if (m.method != "DH") header.push_back(m.label + "_edl");
    if (m.method == "CW_a") header.push_back(m.label + "_order");
    if (m.method == "CW_b") header.push_back(m.label + "_legs");
    for (const auto& ts : m.stats) {
      for (const char* stat : kStatNames) {
        header.push_back(m.label + "_" + stat + "_t" + fmt(ts.time));
      }
    }
  }
  if (any_pdl) header.push_back("pdl");
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';

  for (const auto& row : report.rows) {
    std::vector<std::string> cells;
    if (!report.series_variable.empty()) {
      cells.push_back(format_sweep_value(row.series_value.value_or(SweepValue{}), series_var));
    }
    cells.push_back(format_sweep_value(row.sweep_value, sweep_var));
    cells.push_back(fmt(row.target_value));
    for (const auto& m : row.methods) {
      if (m.method != "DH") cells.push_back(m.edl ? fmt(*m.edl) : "");
      if (m.method == "CW_a") cells.push_back(std::to_string(m.order));
      if (m.method == "CW_b") cells.push_back(std::to_string(m.legs));
      for (const auto& ts : m.stats) {
        for (int s = 0; s < 9; ++s) cells.push_back(fmt(stat_value(ts.stats, s)));
      }
    }
    if (any_pdl) cells.push_back(row.pdl ? fmt(*row.pdl) : "");
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  }
}

void emit_json(std::ostream& out, const Report& report) {
  if (report.rows.empty()) throw sh::Error("cannot emit an empty report");
  const auto series_var = variable_of(report.series_variable);
  const auto sweep_var = variable_of(report.sweep_variable);
  ordered_json j;
  j["name"] = report.name;
  j["sweep_variable"] = report.sweep_variable;
  j["series_variable"] = report.series_variable;
  j["metadata"] = ordered_json::parse(report.metadata);
  j["rows"] = ordered_json::array();
  for (const auto& row : report.rows) {
    ordered_json r;
    r["series_value"] =
        row.series_value ? sweep_value_json(*row.series_value, series_var) : ordered_json();
    r["sweep_value"] = sweep_value_json(row.sweep_value, sweep_var);
    r["target_value"] = row.target_value;
    r["pdl"] = row.pdl ? ordered_json(*row.pdl) : ordered_json();
    r["methods"] = ordered_json::array();
    for (const auto& m : row.methods) {
      ordered_json mj;
      mj["label"] = m.label;
      mj["method"] = m.method;
      mj["order"] = m.order;
      mj["edl"] = m.edl ? ordered_json(*m.edl) : ordered_json();
      mj["legs"] = m.legs;
      mj["empty"] = m.empty;
      mj["stats"] = ordered_json::array();
      for (const auto& ts : m.stats) {
        mj["stats"].push_back({{"time", ts.time}, {"stats", stats_json(ts.stats)}});
      }
      if (m.pfe) {
        mj["pfe"] = {{"times", m.pfe->times}, {"p95", m.pfe->p95}, {"p05", m.pfe->p05}};
      }
      r["methods"].push_back(std::move(mj));
    }
    j["rows"].push_back(std::move(r));
  }
  out << j.dump(2) << '\n';
}

Report parse_json_report(const std::string& text) {
  const auto j = ordered_json::parse(text);
  Report report;
  report.name = j.at("name");
  report.sweep_variable = j.at("sweep_variable");
  report.series_variable = j.at("series_variable");
  report.metadata = j.at("metadata").dump();
  for (const auto& r : j.at("rows")) {
    ReportRow row;
    if (!r.at("series_value").is_null()) row.series_value = sweep_value_from_json(r["series_value"]);
    row.sweep_value = sweep_value_from_json(r.at("sweep_value"));
    row.target_value = r.at("target_value");
    if (!r.at("pdl").is_null()) row.pdl = r["pdl"].get<double>();
    for (const auto& mj : r.at("methods")) {
      MethodResult m;
      m.label = mj.at("label");
      m.method = mj.at("method");
      m.order = mj.at("order");
      if (!mj.at("edl").is_null()) m.edl = mj["edl"].get<double>();
      m.legs = mj.at("legs");
      m.empty = mj.at("empty");
      for (const auto& ts : mj.at("stats")) {
        m.stats.push_back({ts.at("time"), stats_from_json(ts.at("stats"))});
      }
      if (mj.contains("pfe")) {
        m.pfe = PfeSeries{mj["pfe"].at("times"), mj["pfe"].at("p95"), mj["pfe"].at("p05")};
      }
      row.methods.push_back(std::move(m));
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

void emit_plot(std::ostream& out, const Report& report) {
  if (report.rows.empty()) throw sh::Error("cannot emit an empty report");
  const auto series_var = variable_of(report.series_variable);
  const bool pfe = !report.rows.front().methods.empty() && report.rows.front().methods[0].pfe;
  out << (pfe ? "series,method,t,p95,p05\n" : "series,method,x,y,log10_abs_y\n");
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& row = report.rows[i];
    const std::string series =
        row.series_value ? format_sweep_value(*row.series_value, series_var) : "";
    const double x = report.sweep_variable == "band" ? static_cast<double>(i)
                                                     : row.sweep_value.number;
    for (const auto& m : row.methods) {
      if (pfe) {
        if (!m.pfe) continue;
        for (std::size_t k = 0; k < m.pfe->times.size(); ++k) {
          out << series << ',' << m.label << ',' << fmt(m.pfe->times[k]) << ','
              << fmt(m.pfe->p95[k]) << ',' << fmt(m.pfe->p05[k]) << '\n';
        }
      } else if (m.edl) {
        const double a = std::abs(*m.edl);
        out << series << ',' << m.label << ',' << fmt(x) << ',' << fmt(*m.edl) << ','
            << (a > 0.0 ? fmt(std::log10(a)) : std::string("-inf")) << '\n';
      }
    }
  }
}

void emit(std::ostream& out, const Report& report, Format format) {
  switch (format) {
    case Format::csv:
      emit_csv(out, report);
      break;
    case Format::json:
      emit_json(out, report);
      break;
    case Format::plot:
      emit_plot(out, report);
      break;
  }
}

std::filesystem::path emit_file(const std::filesystem::path& out_dir, const Report& report,
                                Format format) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  const char* suffix = format == Format::csv ? ".csv" : format == Format::json ? ".json"
                                                                               : "_plot.csv";
  const auto path = out_dir / (report.name + suffix);
  std::ofstream out(path);
  if (!out) throw sh::Error("cannot write " + path.string());
  emit(out, report, format);
  if (!out) throw sh::Error("write failed for " + path.string());
  return path;
}

}  // namespace runner
