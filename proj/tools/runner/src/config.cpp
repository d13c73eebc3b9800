#include "runner/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "statichedge/quadrature.hpp"

namespace runner {
namespace {

using sh::spanning::Method;

std::string join(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

std::string index(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

void require_map(const YAML::Node& node, const std::string& path,
                 std::initializer_list<const char*> allowed) {
  if (!node.IsMap()) throw ConfigError(path.empty() ? "<root>" : path, "expected a mapping");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!keys.contains(key)) throw ConfigError(join(path, key), "unknown key");
  }
}

YAML::Node required(const YAML::Node& node, const char* key, const std::string& path) {
  const YAML::Node child = node[key];
  if (!child) throw ConfigError(join(path, key), "missing required field");
  return child;
}

double as_double(const YAML::Node& node, const std::string& path) {
  if (!node.IsScalar()) throw ConfigError(path, "expected a number");
  double value = 0.0;
  try {
    value = node.as<double>();
  } catch (const YAML::Exception&) {
    throw ConfigError(path, "expected a number, got '" + node.Scalar() + "'");
  }
  if (!std::isfinite(value)) throw ConfigError(path, "must be finite");
  return value;
}

double get_double(const YAML::Node& map, const char* key, const std::string& path,
                  double fallback) {
  const YAML::Node child = map[key];
  return child ? as_double(child, join(path, key)) : fallback;
}

int as_int(const YAML::Node& node, const std::string& path) {
  const double value = as_double(node, path);
  if (value != std::floor(value) || std::abs(value) > 1e9) {
    throw ConfigError(path, "expected an integer");
  }
  return static_cast<int>(value);
}

std::string as_string(const YAML::Node& node, const std::string& path) {
  if (!node.IsScalar()) throw ConfigError(path, "expected a string");
  return node.Scalar();
}

TimeRef parse_time(const YAML::Node& node, const std::string& path) {
  if (!node.IsScalar()) throw ConfigError(path, "expected a time or u1..u4");
  const std::string text = node.Scalar();
  if (text.size() == 2 && (text[0] == 'u' || text[0] == 'U') && text[1] >= '1' &&
      text[1] <= '0' + sh::spanning::kMaxBands) {
    return {text[1] - '1', 0.0};
  }
  const double t = as_double(node, path);
  if (!(t > 0.0)) throw ConfigError(path, "time must be > 0");
  return {std::nullopt, t};
}

sh::models::ModelSpec parse_model(const YAML::Node& node, const std::string& path,
                                  std::optional<double>& hold_variance) {
  require_map(node, path,
              {"type", "r", "dividend_yield", "sigma", "mu", "lambda", "jump_mean",
               "jump_vol", "hold_variance"});
  const std::string type = as_string(required(node, "type", path), join(path, "type"));
  if (node["hold_variance"]) {
    hold_variance = as_double(node["hold_variance"], join(path, "hold_variance"));
  }
  if (type == "BS") {
    for (const char* key : {"lambda", "jump_mean", "jump_vol", "hold_variance"}) {
      if (node[key]) throw ConfigError(join(path, key), "only valid for MJD models");
    }
    sh::models::BsParams p;
    p.r = get_double(node, "r", path, p.r);
    p.dividend_yield = get_double(node, "dividend_yield", path, p.dividend_yield);
    p.sigma = get_double(node, "sigma", path, p.sigma);
    p.mu = get_double(node, "mu", path, p.mu);
    return p;
  }
  if (type == "MJD") {
    sh::models::MjdParams p;
    p.r = get_double(node, "r", path, p.r);
    p.dividend_yield = get_double(node, "dividend_yield", path, p.dividend_yield);
    p.sigma = get_double(node, "sigma", path, p.sigma);
    p.mu = get_double(node, "mu", path, p.mu);
    p.lambda = get_double(node, "lambda", path, p.lambda);
    p.jump_mean = get_double(node, "jump_mean", path, p.jump_mean);
    p.jump_vol = get_double(node, "jump_vol", path, p.jump_vol);
    return p;
  }
  throw ConfigError(join(path, "type"), "expected BS or MJD, got '" + type + "'");
}

std::vector<MethodSpec> parse_methods(const YAML::Node& node, const std::string& path) {
  if (!node.IsSequence() || node.size() == 0) {
    throw ConfigError(path, "at least one method is required");
  }
  std::vector<MethodSpec> out;
  std::set<std::string> labels;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const std::string at = index(path, i);
    require_map(node[i], at, {"method", "order", "label"});
    const std::string name = as_string(required(node[i], "method", at), join(at, "method"));
    MethodSpec m;
    if (name == "DH") {
      m.label = "DH";
    } else {
      try {
        m.method = sh::spanning::parse_method(name);
      } catch (const sh::DomainError& e) {
        throw ConfigError(join(at, "method"), e.what());
      }
      m.label = sh::spanning::to_string(*m.method);
      const bool needs_order = *m.method != Method::cw_a;
      if (needs_order) {
        m.order = as_int(required(node[i], "order", at), join(at, "order"));
      } else if (node[i]["order"]) {
        throw ConfigError(join(at, "order"), "CW_a selects its own order");
      }
    }
    if (node[i]["label"]) m.label = as_string(node[i]["label"], join(at, "label"));
    if (!labels.insert(m.label).second) {
      throw ConfigError(join(at, "label"), "duplicate method label '" + m.label + "'");
    }
    out.push_back(std::move(m));
  }
  return out;
}

SweepSpec parse_sweep(const YAML::Node& node, const std::string& path) {
  require_map(node, path, {"variable", "values"});
  SweepSpec s;
  const std::string var = as_string(required(node, "variable", path), join(path, "variable"));
  try {
    s.variable = parse_sweep_variable(var);
  } catch (const sh::DomainError& e) {
    throw ConfigError(join(path, "variable"), e.what());
  }
  if (s.variable == SweepVariable::none) {
    throw ConfigError(join(path, "variable"), "omit the block instead of sweeping 'none'");
  }
  const YAML::Node values = required(node, "values", path);
  const std::string vpath = join(path, "values");
  if (!values.IsSequence() || values.size() == 0) {
    throw ConfigError(vpath, "expected a non-empty list");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::string at = index(vpath, i);
    SweepValue v;
    if (s.variable == SweepVariable::band) {
      if (!values[i].IsSequence() || values[i].size() == 0) {
        throw ConfigError(at, "expected a list of [lo, hi] pairs, one per band");
      }
      for (std::size_t b = 0; b < values[i].size(); ++b) {
        const YAML::Node pair = values[i][b];
        if (!pair.IsSequence() || pair.size() != 2) {
          throw ConfigError(index(at, b), "expected [lo, hi]");
        }
        v.bands.emplace_back(as_double(pair[0], index(index(at, b), 0)),
                             as_double(pair[1], index(index(at, b), 1)));
      }
    } else if (s.variable == SweepVariable::quad_points) {
      v.number = as_int(values[i], at);
    } else {
      v.number = as_double(values[i], at);
    }
    s.values.push_back(std::move(v));
  }
  return s;
}

SimulationSpec parse_simulation(const YAML::Node& node, const std::string& path) {
  require_map(node, path, {"n_paths", "step", "seed", "horizon", "stats_at", "checkpoints"});
  SimulationSpec s;
  if (node["n_paths"]) s.n_paths = as_int(node["n_paths"], join(path, "n_paths"));
  if (s.n_paths < 2) throw ConfigError(join(path, "n_paths"), "need at least 2 paths");
  s.step = get_double(node, "step", path, s.step);
  if (!(s.step > 0.0)) throw ConfigError(join(path, "step"), "must be > 0");
  if (node["seed"]) {
    const double seed = as_double(node["seed"], join(path, "seed"));
    if (seed < 0.0 || seed != std::floor(seed)) {
      throw ConfigError(join(path, "seed"), "expected a non-negative integer");
    }
    s.seed = node["seed"].as<std::uint64_t>();
  }
  if (node["horizon"]) s.horizon = parse_time(node["horizon"], join(path, "horizon"));
  for (const char* key : {"stats_at", "checkpoints"}) {
    const YAML::Node list = node[key];
    if (!list) continue;
    if (!list.IsSequence()) throw ConfigError(join(path, key), "expected a list");
    auto& dest = std::string(key) == "stats_at" ? s.stats_at : s.checkpoints;
    for (std::size_t i = 0; i < list.size(); ++i) {
      dest.push_back(parse_time(list[i], index(join(path, key), i)));
    }
  }
  if (s.stats_at.empty()) s.stats_at.push_back(s.horizon);
  return s;
}

void apply(SweepVariable var, const SweepValue& value, const ExperimentConfig& cfg,
           Resolved& r, const std::string& where) {
  auto mjd = [&]() -> sh::models::MjdParams& {
    auto* p = std::get_if<sh::models::MjdParams>(&r.model);
    if (!p) throw ConfigError(where, to_string(var) + " sweeps need an MJD model");
    return *p;
  };
  switch (var) {
    case SweepVariable::none:
      break;
    case SweepVariable::quad_points:
      for (auto& m : r.methods) {
        if (m.method && *m.method != Method::cw_a) m.order = static_cast<int>(value.number);
      }
      break;
    case SweepVariable::band:
      if (value.bands.size() > r.bands.size()) {
        throw ConfigError(where, "more band ranges than configured bands");
      }
      for (std::size_t i = 0; i < value.bands.size(); ++i) {
        r.bands[i].lo = value.bands[i].first;
        r.bands[i].hi = value.bands[i].second;
      }
      break;
    case SweepVariable::u1:
      r.bands.at(0).maturity = value.number;
      break;
    case SweepVariable::u2:
      if (r.bands.size() < 2) throw ConfigError(where, "u2 sweeps need two bands");
      r.bands[1].maturity = value.number;
      break;
    case SweepVariable::lambda:
      mjd().lambda = value.number;
      break;
    case SweepVariable::mu_j:
      mjd().jump_mean = value.number;
      break;
    case SweepVariable::sigma_j:
      mjd().jump_vol = value.number;
      break;
  }
  (void)cfg;
}

}  // namespace

ConfigError::ConfigError(std::string path, const std::string& what)
    : sh::Error(path + ": " + what), path_(std::move(path)) {}

std::string to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::none:
      return "none";
    case SweepVariable::quad_points:
      return "quad_points";
    case SweepVariable::band:
      return "band";
    case SweepVariable::u1:
      return "u1";
    case SweepVariable::u2:
      return "u2";
    case SweepVariable::lambda:
      return "lambda";
    case SweepVariable::mu_j:
      return "mu_j";
    case SweepVariable::sigma_j:
      return "sigma_j";
  }
  return "none";
}

SweepVariable parse_sweep_variable(const std::string& name) {
  for (auto v : {SweepVariable::none, SweepVariable::quad_points, SweepVariable::band,
                 SweepVariable::u1, SweepVariable::u2, SweepVariable::lambda,
                 SweepVariable::mu_j, SweepVariable::sigma_j}) {
    if (to_string(v) == name) return v;
  }
  throw sh::DomainError("unknown sweep variable '" + name + "'");
}

double time_of(const TimeRef& ref, const std::vector<sh::spanning::StrikeBand>& bands) {
  if (!ref.band) return ref.value;
  const auto i = static_cast<std::size_t>(*ref.band);
  if (i >= bands.size()) {
    throw ConfigError("simulation", "u" + std::to_string(i + 1) + " has no strike band");
  }
  return bands[i].maturity;
}

Resolved resolve(const ExperimentConfig& cfg, const SweepValue* series_value,
                 const SweepValue& sweep_value) {
  Resolved r{cfg.model, cfg.bands, cfg.methods};
  if (series_value && cfg.series) apply(cfg.series->variable, *series_value, cfg, r, "series");
  apply(cfg.sweep.variable, sweep_value, cfg, r, "sweep");
  if (cfg.hold_variance) {
    auto& p = std::get<sh::models::MjdParams>(r.model);
    const double jumps = p.lambda * (p.jump_mean * p.jump_mean + p.jump_vol * p.jump_vol);
    const double diffusion = *cfg.hold_variance - jumps;
    if (!(diffusion > 0.0)) {
      std::ostringstream msg;
      msg << "hold_variance " << *cfg.hold_variance << " leaves no diffusion variance (jump part "
          << jumps << ")";
      throw ConfigError("model.hold_variance", msg.str());
    }
    p.sigma = std::sqrt(diffusion);
  }
  return r;
}

void validate(const ExperimentConfig& cfg, const Resolved& r, const std::string& where) {
  const auto at = [&](const std::string& field) { return join(where, field); };
  try {
    sh::models::validate(r.model);
  } catch (const sh::DomainError& e) {
    throw ConfigError(at("model"), e.what());
  }
  if (r.bands.empty()) throw ConfigError(at("bands"), "at least one strike band is required");
  if (static_cast<int>(r.bands.size()) > sh::spanning::kMaxBands) {
    throw ConfigError(at("bands"), "at most " + std::to_string(sh::spanning::kMaxBands) +
                                       " bands are supported");
  }
  for (std::size_t i = 0; i < r.bands.size(); ++i) {
    const auto& b = r.bands[i];
    try {
      sh::spanning::validate(b);
    } catch (const sh::DomainError& e) {
      throw ConfigError(at(index("bands", i)), e.what());
    }
    const double prev = i == 0 ? cfg.target.maturity : r.bands[i - 1].maturity;
    if (!(b.maturity < prev)) {
      throw ConfigError(at(index("bands", i) + ".maturity"),
                        "maturities must decrease strictly and precede the target");
    }
    if (i > 0 && prev - b.maturity < sh::spanning::kMinMaturityGap) {
      throw ConfigError(at(index("bands", i) + ".maturity"),
                        "closer than the minimum maturity gap to the previous band");
    }
  }
  for (std::size_t i = 0; i < r.methods.size(); ++i) {
    const auto& m = r.methods[i];
    const std::string mp = at(index("methods", i));
    if (m.is_delta_hedge()) {
      if (!cfg.simulation) throw ConfigError(mp, "DH needs a simulation block");
      continue;
    }
    if (*m.method != Method::cw_a &&
        (m.order < 1 || m.order > sh::quadrature::kMaxOrder)) {
      throw ConfigError(mp + ".order", "must lie in [1, " +
                                           std::to_string(sh::quadrature::kMaxOrder) + "]");
    }
    if (*m.method == Method::gq2 && r.bands.size() < 2) {
      throw ConfigError(mp, "GQ2 needs two strike bands");
    }
  }
  if (cfg.simulation) {
    const auto& s = *cfg.simulation;
    double horizon = 0.0;
    try {
      horizon = time_of(s.horizon, r.bands);
      if (!(horizon <= r.bands[0].maturity + 1e-12)) {
        throw ConfigError("simulation.horizon", "static legs expire before the horizon");
      }
      for (const auto& t : s.stats_at) {
        if (time_of(t, r.bands) > horizon + 1e-12) {
          throw ConfigError("simulation.stats_at", "times must not exceed the horizon");
        }
      }
      for (const auto& t : s.checkpoints) {
        if (time_of(t, r.bands) > horizon + 1e-12) {
          throw ConfigError("simulation.checkpoints", "times must not exceed the horizon");
        }
      }
    } catch (const ConfigError& e) {
      throw ConfigError(at(e.path()), std::string(e.what()).substr(e.path().size() + 2));
    }
  }
}

ExperimentConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("<root>", std::string("YAML syntax error: ") + e.what());
  }
  require_map(root, "",
              {"name", "description", "model", "target", "bands", "methods", "modified_weight",
               "sweep", "series", "simulation"});
  ExperimentConfig cfg;
  if (root["name"]) cfg.name = as_string(root["name"], "name");
  cfg.model = parse_model(required(root, "model", ""), "model", cfg.hold_variance);
  if (cfg.hold_variance && !std::holds_alternative<sh::models::MjdParams>(cfg.model)) {
    throw ConfigError("model.hold_variance", "only valid for MJD models");
  }

  const YAML::Node target = required(root, "target", "");
  require_map(target, "target", {"strike", "maturity", "spot"});
  cfg.target.strike = get_double(target, "strike", "target", cfg.target.strike);
  cfg.target.maturity = get_double(target, "maturity", "target", cfg.target.maturity);
  cfg.spot = get_double(target, "spot", "target", cfg.spot);
  if (!(cfg.target.strike > 0.0)) throw ConfigError("target.strike", "must be > 0");
  if (!(cfg.target.maturity > 0.0)) throw ConfigError("target.maturity", "must be > 0");
  if (!(cfg.spot > 0.0)) throw ConfigError("target.spot", "must be > 0");

  const YAML::Node bands = required(root, "bands", "");
  if (!bands.IsSequence()) throw ConfigError("bands", "expected a list");
  for (std::size_t i = 0; i < bands.size(); ++i) {
    const std::string at = index("bands", i);
    require_map(bands[i], at, {"maturity", "lo", "hi"});
    cfg.bands.push_back({as_double(required(bands[i], "maturity", at), join(at, "maturity")),
                         as_double(required(bands[i], "lo", at), join(at, "lo")),
                         as_double(required(bands[i], "hi", at), join(at, "hi"))});
  }

  cfg.methods = parse_methods(required(root, "methods", ""), "methods");

  if (const YAML::Node mw = root["modified_weight"]) {
    require_map(mw, "modified_weight", {"n_inner_gq", "n_laguerre"});
    if (mw["n_inner_gq"]) {
      cfg.modified_weight.n_inner_gq = as_int(mw["n_inner_gq"], "modified_weight.n_inner_gq");
    }
    if (mw["n_laguerre"]) {
      cfg.modified_weight.n_laguerre = as_int(mw["n_laguerre"], "modified_weight.n_laguerre");
    }
    const auto& w = cfg.modified_weight;
    if (w.n_inner_gq < 1 || w.n_inner_gq > sh::quadrature::kMaxOrder) {
      throw ConfigError("modified_weight.n_inner_gq", "out of range");
    }
    if (w.n_laguerre < 1 || w.n_laguerre > sh::quadrature::kMaxLaguerreOrder) {
      throw ConfigError("modified_weight.n_laguerre", "out of range");
    }
  }

  if (root["sweep"]) {
    cfg.sweep = parse_sweep(root["sweep"], "sweep");
  } else {
    cfg.sweep.values.push_back({});
  }
  if (root["series"]) {
    cfg.series = parse_sweep(root["series"], "series");
    if (cfg.series->variable == cfg.sweep.variable) {
      throw ConfigError("series.variable", "must differ from the sweep variable");
    }
  }
  if (root["simulation"]) cfg.simulation = parse_simulation(root["simulation"], "simulation");

  const std::vector<SweepValue> no_series{SweepValue{}};
  const auto& series_values = cfg.series ? cfg.series->values : no_series;
  for (std::size_t s = 0; s < series_values.size(); ++s) {
    for (std::size_t v = 0; v < cfg.sweep.values.size(); ++v) {
      std::string where;
      if (cfg.series) where = index("series.values", s) + ":";
      if (cfg.sweep.variable != SweepVariable::none) where += index("sweep.values", v);
      validate(cfg, resolve(cfg, &series_values[s], cfg.sweep.values[v]), where);
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open config file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace runner
