#include <benchmark/benchmark.h>

#include "stqc/primitives.hpp"
#include "stqc/states.hpp"

using namespace stqc;

static void BM_FreePropagator(benchmark::State& state) {
  const auto g = Grid::make(static_cast<std::size_t>(state.range(0)), 12.0);
  const auto psi = boosted_gaussian(g, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(apply_free_propagator(psi, 0.1));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FreePropagator)->RangeMultiplier(2)->Range(1024, 16384)->Complexity();

static void BM_QuadraticPhase(benchmark::State& state) {
  const auto g = Grid::make(static_cast<std::size_t>(state.range(0)), 12.0);
  const auto psi = boosted_gaussian(g, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(apply_quadratic_phase(psi, 0.3));
}
BENCHMARK(BM_QuadraticPhase)->RangeMultiplier(2)->Range(1024, 16384);

static void BM_Dilation(benchmark::State& state) {
  const auto g = Grid::make(static_cast<std::size_t>(state.range(0)), 12.0);
  const auto psi = ground_gaussian(g);
  for (auto _ : state) benchmark::DoNotOptimize(apply_dilation(psi, 1.5));
}
BENCHMARK(BM_Dilation)->RangeMultiplier(2)->Range(1024, 8192);

static void BM_KernelFormula(benchmark::State& state) {
  const auto g = Grid::make(static_cast<std::size_t>(state.range(0)), 24.0);
  const auto psi = ground_gaussian(g);
  for (auto _ : state) benchmark::DoNotOptimize(apply_exp_isDelta_kernel(psi, 0.5));
}
BENCHMARK(BM_KernelFormula)->Arg(4096);
