#include <benchmark/benchmark.h>

#include "rushlarsen/harness.hpp"
#include "rushlarsen/membrane.hpp"
#include "rushlarsen/problems.hpp"

namespace {

using namespace rushlarsen;

const char* const kNames[] = {"RL2", "RL3", "RL4", "EAB2", "EAB3", "EAB4", "RK4"};

/// Full Beeler-Reuter run at h = 0.05; cost per (a, b) evaluation is reported as items.
void BM_IntegrateBR(benchmark::State& state) {
  static const MembraneModel model = MembraneModel::load(RUSHLARSEN_BENCH_MODEL);
  const SplitProblem p = br_model(model);
  const SchemeSpec s = SchemeSpec::parse(kNames[state.range(0)]);
  std::size_t evals = 0;
  for (auto _ : state) {
    const Trajectory traj = integrate(p, s, 0.05);
    evals += traj.evaluations;
    benchmark::DoNotOptimize(traj.y.back().data());
  }
  state.SetLabel(s.name());
  state.SetItemsProcessed(static_cast<std::int64_t>(evals));
}
BENCHMARK(BM_IntegrateBR)->DenseRange(0, 6)->Unit(benchmark::kMillisecond);

void BM_IntegrateSmooth(benchmark::State& state) {
  const SplitProblem p = manufactured_smooth();
  const SchemeSpec s = SchemeSpec::parse(kNames[state.range(0)]);
  for (auto _ : state) benchmark::DoNotOptimize(integrate(p, s, 6.0 / 4096).y.back().data());
  state.SetLabel(s.name());
}
BENCHMARK(BM_IntegrateSmooth)->DenseRange(0, 6)->Unit(benchmark::kMicrosecond);

void BM_CriticalDtThetaSplit(benchmark::State& state) {
  const SplitProblem p = theta_split(-100.0, 0.0, 100.0);
  for (auto _ : state) benchmark::DoNotOptimize(critical_dt(p, SchemeSpec::parse("RL2"), 0.001).dt0);
}
BENCHMARK(BM_CriticalDtThetaSplit)->Unit(benchmark::kMillisecond);

}  // namespace
