#include <benchmark/benchmark.h>

#include "expode/genmethods.hpp"
#include "expode/integrate.hpp"
#include "expode/problems.hpp"
#include "expode/schemes.hpp"
#include "expode/stability.hpp"

namespace {

void BM_BuildExplicit(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(expode::build_explicit(n));
}
BENCHMARK(BM_BuildExplicit)->Arg(2)->Arg(8)->Arg(16);

void BM_ExplicitStepLorenz(benchmark::State& state) {
  const auto scheme = expode::cached_explicit(static_cast<int>(state.range(0)));
  const expode::OdeProblem p = expode::lorenz_problem().problem;
  for (auto _ : state) {
    benchmark::DoNotOptimize(expode::explicit_step(*scheme, p, 0.0, p.y_initial, 1e-3));
  }
}
BENCHMARK(BM_ExplicitStepLorenz)->Arg(1)->Arg(4)->Arg(8);

void BM_RegionRaster(benchmark::State& state) {
  const expode::StabilityFunction r = expode::explicit_stability(*expode::cached_explicit(4));
  const int side = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(expode::region_raster(r, -20, 2, -10, 10, side, side));
  }
}
BENCHMARK(BM_RegionRaster)->Arg(128)->Arg(512);

void BM_LStableStepProthero(benchmark::State& state) {
  const expode::ButcherTableau t = expode::lstable2_tableau();
  const expode::OdeProblem p = expode::prothero_problem().problem;
  for (auto _ : state) benchmark::DoNotOptimize(expode::irk_step(t, p, 0.0, p.y_initial, 0.1));
}
BENCHMARK(BM_LStableStepProthero);

}  // namespace

BENCHMARK_MAIN();
