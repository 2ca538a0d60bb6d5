// Serial reference vs OpenMP path for the three parallel kernels.
// Worker count follows THREADS (default: all cores).
#include <benchmark/benchmark.h>

#include <cmath>

#include "mmt/collision.hpp"
#include "mmt/diagnostics.hpp"
#include "mmt/oracle.hpp"

using namespace mmt;

namespace {

const ModelParams kParams = ModelParams::make(0.0);
const AnalyticSpectrum kBump(GaussianBumpInLogOmega{1.0, 0.5, 1.0, 1e-3});

void collide(benchmark::State& state, Execution exec) {
  static const ResonanceQuad q = build_quadrature(kParams, QuadSpec{});
  const auto N = tabulate(kBump, FrequencyGrid(1e-2, 1e2, static_cast<std::size_t>(state.range(0))), kParams,
                          Form::N_form);
  for (auto _ : state) benchmark::DoNotOptimize(collide_grid(N, q, Evaluator::split, exec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void oracle(benchmark::State& state, Execution exec) {
  OracleOptions o;
  o.exec = exec;
  const auto samples = static_cast<std::uint64_t>(state.range(0));
  static const AnalyticSpectrum bump(GaussianBumpInLogOmega{1.0, 0.3, 1.0, 0.0});
  for (auto _ : state) benchmark::DoNotOptimize(mc_collision(bump, 1.0, kParams, 1e-3, samples, 1, o));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void seminorm(benchmark::State& state, Execution exec) {
  const FrequencyGrid g(1e-2, 1e2, static_cast<std::size_t>(state.range(0)));
  GridFunction F{g, std::vector<double>(g.size())};
  for (std::size_t j = 0; j < g.size(); ++j) F.values[j] = std::sin(std::log(g[j])) / (1.0 + g[j]);
  for (auto _ : state) benchmark::DoNotOptimize(smoothing_seminorm(F, 0.0, exec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK_CAPTURE(collide, serial, Execution::serial)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(collide, parallel, Execution::parallel)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(oracle, serial, Execution::serial)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(oracle, parallel, Execution::parallel)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(seminorm, serial, Execution::serial)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(seminorm, parallel, Execution::parallel)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
