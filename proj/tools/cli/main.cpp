#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>

#include "runner/report.hpp"
#include "statichedge/portfolio_io.hpp"

namespace {

namespace sh = statichedge;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Options {
  std::string config;
  std::string out;
  std::string format;
  unsigned threads = 0;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Options& opt, bool with_format) {
  cmd->add_option("--config", opt.config, "Experiment config (YAML)")->required();
  cmd->add_option("--out", opt.out, "Output directory (default: stdout)");
  if (with_format) {
    cmd->add_option("--format", opt.format, "csv, json or plot")
        ->check(CLI::IsMember({"csv", "json", "plot"}));
  }
  cmd->add_option("--threads", opt.threads, "Worker threads (0 = all cores)");
  cmd->add_option("--seed", opt.seed, "Override simulation.seed");
}

void write(const runner::Report& report, const Options& opt, const std::string& fallback) {
  const auto format = runner::parse_format(opt.format.empty() ? fallback : opt.format);
  if (opt.out.empty()) {
    runner::emit(std::cout, report, format);
  } else {
    std::cerr << "wrote " << runner::emit_file(opt.out, report, format).string() << '\n';
  }
}

int cmd_price(const Options& opt) {
  const auto cfg = runner::load_config(opt.config);
  const auto start = std::chrono::steady_clock::now();
  const double price = sh::models::call_price(cfg.model, cfg.spot, 0.0, cfg.target.strike,
                                              cfg.target.maturity);
  const std::chrono::duration<double, std::micro> took = std::chrono::steady_clock::now() - start;
  std::printf("model,strike,maturity,spot,price\n%s,%.10g,%.10g,%.10g,%.10f\n",
              sh::models::model_name(cfg.model).c_str(), cfg.target.strike, cfg.target.maturity,
              cfg.spot, price);
  std::fprintf(stderr, "priced in %.1f us\n", took.count());
  return 0;
}

int cmd_build(const Options& opt, const std::string& only) {
  const auto cfg = runner::load_config(opt.config);
  const auto resolved = runner::resolve(cfg, cfg.series ? &cfg.series->values[0] : nullptr,
                                        cfg.sweep.values[0]);
  bool matched = false;
  for (const auto& m : resolved.methods) {
    if (m.is_delta_hedge() || (!only.empty() && m.label != only)) continue;
    matched = true;
    const auto p = runner::build_portfolio(resolved, cfg, m);
    if (!opt.out.empty()) {
      std::filesystem::create_directories(opt.out);
      const auto path = std::filesystem::path(opt.out) / (cfg.name + "_" + m.label + ".portfolio");
      sh::io::save_portfolio(path, p);
      std::cerr << "wrote " << path.string() << '\n';
      continue;
    }
    std::printf("# %s order=%d target=%.10f hedge=%.10f edl=%.6g legs=%zu\n", m.label.c_str(),
                p.order, p.target_value, p.hedge_value(), p.edl(), p.legs.size());
    std::printf("strike,maturity,weight\n");
    for (const auto& leg : p.legs) {
      std::printf("%.10g,%.10g,%.10g\n", leg.strike, leg.maturity, leg.weight);
    }
  }
  if (!matched) throw runner::ConfigError("--method", "no static method labelled '" + only + "'");
  return 0;
}

int cmd_run(const Options& opt, bool simulate, bool pfe) {
  auto cfg = runner::load_config(opt.config);
  if (simulate && !cfg.simulation) {
    throw runner::ConfigError("simulation", "this subcommand needs a simulation block");
  }
  if (!simulate) {
    cfg.simulation.reset();
    std::erase_if(cfg.methods, [](const runner::MethodSpec& m) { return m.is_delta_hedge(); });
    if (cfg.methods.empty()) throw runner::ConfigError("methods", "no static methods to sweep");
  }
  runner::RunOptions run;
  run.threads = opt.threads;
  run.seed = opt.seed;
  run.pfe = pfe;
  write(runner::run_experiment(cfg, run), opt, pfe ? "plot" : "csv");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Static hedging experiments"};
  app.require_subcommand(1);
  Options opt;
  std::string method;

  auto* price = app.add_subcommand("price", "Price the target option");
  add_common(price, opt, false);
  auto* build = app.add_subcommand("build", "Print hedge portfolios for the first sweep value");
  add_common(build, opt, false);
  build->add_option("--method", method, "Only this method label");
  auto* sweep = app.add_subcommand("sweep", "Run the sweep at time 0 (EDL, PDL)");
  add_common(sweep, opt, true);
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo hedge error statistics");
  add_common(simulate, opt, true);
  auto* pfe = app.add_subcommand("pfe", "Potential future exposure curves");
  add_common(pfe, opt, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (price->parsed()) return cmd_price(opt);
    if (build->parsed()) return cmd_build(opt, method);
    if (sweep->parsed()) return cmd_run(opt, false, false);
    if (simulate->parsed()) return cmd_run(opt, true, false);
    if (pfe->parsed()) return cmd_run(opt, true, true);
  } catch (const runner::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const sh::DomainError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const sh::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
