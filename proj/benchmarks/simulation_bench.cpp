#include <benchmark/benchmark.h>

#include "statichedge/simulation.hpp"

namespace m = statichedge::models;
namespace sim = statichedge::simulation;
namespace sp = statichedge::spanning;

namespace {

const m::MjdParams kMjd{0.06, 0.02, 0.14, 0.1, 2.0, -0.1, 0.13};
const m::OptionRef kTarget{100.0, 1.0};

sim::SimConfig config(unsigned threads) {
  auto cfg = sim::make_config(1000, 1, 0.0833, 0.004);
  cfg.threads = threads;
  return cfg;
}

void BM_SimulatePaths(benchmark::State& state) {
  const auto cfg = config(static_cast<unsigned>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sim::simulate_paths(kMjd, cfg));
}
BENCHMARK(BM_SimulatePaths)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

void BM_DeltaHedge(benchmark::State& state) {
  const auto paths = sim::simulate_paths(kMjd, config(0));
  const auto threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sim::delta_hedge_run(paths, kMjd, kTarget, threads));
}
BENCHMARK(BM_DeltaHedge)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

void BM_StaticHedge(benchmark::State& state) {
  const auto paths = sim::simulate_paths(kMjd, config(0));
  const auto portfolio =
      sp::build_gq2(kMjd, kTarget, 100, {0.1587, 80, 120}, {0.0833, 60, 120}, 20);
  const auto threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sim::static_hedge_run(paths, portfolio, kMjd, threads));
  }
}
BENCHMARK(BM_StaticHedge)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

}  // namespace
