#include <benchmark/benchmark.h>

#include "rushlarsen/stability.hpp"

namespace {

using namespace rushlarsen;

void BM_StabilityRadius(benchmark::State& state) {
  const SchemeSpec s{Family::RushLarsen, static_cast<int>(state.range(0)), false};
  const Complex z(-20.0, 15.0);
  for (auto _ : state) benchmark::DoNotOptimize(stability_radius(s, 0.9, z));
}
BENCHMARK(BM_StabilityRadius)->DenseRange(2, 4);

void BM_Scan(benchmark::State& state) {
  const SchemeSpec s = SchemeSpec::parse("RL3");
  const auto workers = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(scan(s, 0.95, Rect{-250.0, 0.0, 0.0, 140.0}, 201, 201, workers).rho.data());
  state.SetItemsProcessed(state.iterations() * 201 * 201);
}
BENCHMARK(BM_Scan)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_Crossing(benchmark::State& state) {
  const SchemeSpec s = SchemeSpec::parse("RL4");
  for (auto _ : state) benchmark::DoNotOptimize(real_axis_crossing(s, 1.05, -1e6).x);
}
BENCHMARK(BM_Crossing);

}  // namespace
