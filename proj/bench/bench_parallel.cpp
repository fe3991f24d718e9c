// Serial reference paths against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "riccati/oscillator.hpp"
#include "riccati/superposition.hpp"
#include "riccati/wei_norman.hpp"

using namespace riccati;

namespace {

RiccatiSystem mixed() {
  return RiccatiSystem::make(CoefficientFn::constant(1.0), CoefficientFn::polynomial({0.0, 0.3}),
                             CoefficientFn::constant(0.5), {0.0, 1.0});
}

Execution exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

void BM_SpectrumScan(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectrum_scan(0.0, 20.0, kDefaultXiMax, 1e-10, exec_of(state)));
  }
  label(state);
}
BENCHMARK(BM_SpectrumScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SpectrumScanReference(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(spectrum_scan_reference(0.0, 20.0, kDefaultXiMax, 1e-10));
}
BENCHMARK(BM_SpectrumScanReference)->Unit(benchmark::kMillisecond);

void BM_SolveWnMany(benchmark::State& state) {
  const auto sys = mixed();
  const auto grid = TimeGrid::uniform(0.0, 1.0, 20001);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_wn_many(kAllOrderings, sys, grid, 1e-11, exec_of(state)));
  }
  label(state);
}
BENCHMARK(BM_SolveWnMany)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_GeneralSolution(benchmark::State& state) {
  const auto coords = solve_wn(Ordering::II, mixed(), TimeGrid::uniform(0.0, 1.0, 200001));
  for (auto _ : state) {
    benchmark::DoNotOptimize(general_solution(coords, ProjectivePoint::finite(0.2), exec_of(state)));
  }
  label(state);
}
BENCHMARK(BM_GeneralSolution)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_GroupCurve(benchmark::State& state) {
  const auto triple = canonical_triple(mixed(), TimeGrid::uniform(0.0, 1.0, 200001));
  for (auto _ : state) benchmark::DoNotOptimize(group_curve_from_solutions(triple, exec_of(state)));
  label(state);
}
BENCHMARK(BM_GroupCurve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
