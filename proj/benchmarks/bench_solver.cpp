#include <benchmark/benchmark.h>

#include "stqc/solver.hpp"
#include "stqc/states.hpp"

using namespace stqc;

/// One segment of 64 Strang sub-steps with drift |x| and a W2 control.
static void BM_StrangSegment(benchmark::State& state) {
  const auto g = Grid::make(static_cast<std::size_t>(state.range(0)), 12.0);
  const auto psi = boosted_gaussian(g, 1.0);
  PotentialBindings pots{potential::AbsPower{1.0, 1.0}, potential::GaussianExp{-1.0, 0.3}};
  ControlSchedule s;
  s.append(Segment{0.01, 1.0, 0.5, 0.0, {}});
  PropagateOptions po;
  po.dt.min_substeps = 64;
  po.dt.max_phase = 1e9;
  for (auto _ : state) benchmark::DoNotOptimize(propagate(psi, s, pots, po));
  state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(BM_StrangSegment)->RangeMultiplier(2)->Range(1024, 16384);
