#include <benchmark/benchmark.h>

#include "firmdyn/analysis.hpp"
#include "firmdyn/dynamics.hpp"
#include "firmdyn/equilibrium.hpp"
#include "firmdyn/firm.hpp"
#include "firmdyn/stochproc.hpp"

using namespace firmdyn;

namespace {

const SteadyState& baseline() {
  static const SteadyState ss = solve_stationary_equilibrium(ModelParams::calibrated());
  return ss;
}

const HfModel& baseline_hf() {
  static const HfModel hf = solve_hf(baseline());
  return hf;
}

void BM_Rouwenhorst(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(rouwenhorst({0.99, 0.0135, 0.44}, k));
  }
}
BENCHMARK(BM_Rouwenhorst)->Arg(10)->Arg(50)->Arg(200);

void BM_StationaryValueFunction(benchmark::State& state) {
  ModelParams p = ModelParams::calibrated();
  p.grid_size = static_cast<int>(state.range(0));
  const FirmEnv env = p.firm_env();
  const Prices prices = baseline().prices;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_firm_stationary(env, prices));
  }
}
BENCHMARK(BM_StationaryValueFunction)->Arg(20)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_StationaryEquilibrium(benchmark::State& state) {
  const ModelParams p = ModelParams::calibrated();
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_stationary_equilibrium(p));
  }
}
BENCHMARK(BM_StationaryEquilibrium)->Unit(benchmark::kMillisecond);

void BM_Linearize(benchmark::State& state) {
  const EquilibriumSystem& sys = baseline_hf().system;
  for (auto _ : state) {
    benchmark::DoNotOptimize(linearize(sys));
  }
}
BENCHMARK(BM_Linearize)->Unit(benchmark::kMillisecond);

void BM_SolveLinearRe(benchmark::State& state) {
  const HfModel& hf = baseline_hf();
  const double rho = baseline().params.rho_m;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_linear_re(hf.linear, rho));
  }
}
BENCHMARK(BM_SolveLinearRe)->Unit(benchmark::kMillisecond);

void BM_ImpulseResponse(benchmark::State& state) {
  const HfModel& hf = baseline_hf();
  IrfOptions o;
  o.horizon = 40;
  for (auto _ : state) {
    benchmark::DoNotOptimize(impulse_response(hf.system, hf.solution, o));
  }
}
BENCHMARK(BM_ImpulseResponse)->Unit(benchmark::kMillisecond);

void BM_PerfectForesightPath(benchmark::State& state) {
  const SteadyState& ss = baseline();
  const auto path = stationary_price_path(ss, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_foresight(ss, path));
  }
}
BENCHMARK(BM_PerfectForesightPath)->Arg(40)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
