#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "rushlarsen/phi.hpp"

namespace {

void BM_PhiReal(benchmark::State& state) {
  const int j = static_cast<int>(state.range(0));
  const double z = -static_cast<double>(state.range(1)) / 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(rushlarsen::phi(j, z));
}
// Series branch (|z| < 0.5) and recurrence branch.
BENCHMARK(BM_PhiReal)->Args({1, 10})->Args({1, 500})->Args({4, 10})->Args({4, 500});

void BM_PhiComplex(benchmark::State& state) {
  const std::complex<double> z(-3.0, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(rushlarsen::phi(static_cast<int>(state.range(0)), z));
}
BENCHMARK(BM_PhiComplex)->Arg(1)->Arg(4);

void BM_PhiAll(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(rushlarsen::phi_all(4, -2.5));
}
BENCHMARK(BM_PhiAll);

void BM_PhiDiag(benchmark::State& state) {
  std::vector<double> a(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = -0.5 - static_cast<double>(i);
  for (auto _ : state) benchmark::DoNotOptimize(rushlarsen::phi_diag(1, a, 0.05));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PhiDiag)->Arg(8)->Arg(1024);

}  // namespace
