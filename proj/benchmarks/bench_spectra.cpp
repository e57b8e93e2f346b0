#include <benchmark/benchmark.h>

#include <cmath>

#include "barrier/jacobi_barrier.hpp"
#include "barrier/schrodinger_barrier.hpp"

using namespace barrier;

static void BM_DiscreteSpectrum(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DiscreteBarrier op(n, std::pow(n, -2.0 / 3.0));
  for (auto _ : state) benchmark::DoNotOptimize(discrete_spectrum(op));
}
BENCHMARK(BM_DiscreteSpectrum)->Arg(39)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond)->UseRealTime();  // branches run on async threads

static void BM_DeterminantDense(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const cplx k{0.4, 0.7};
  for (auto _ : state) benchmark::DoNotOptimize(birman_schwinger_det(n, cplx{0, 0.1}, k));
}
BENCHMARK(BM_DeterminantDense)->Arg(40)->Arg(160)->Arg(640)->Unit(benchmark::kMicrosecond);

static void BM_DeterminantTridiagonal(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const cplx k{0.4, 0.7};
  for (auto _ : state) benchmark::DoNotOptimize(tridiagonal_det_form(n, cplx{0, 0.1}, k));
}
BENCHMARK(BM_DeterminantTridiagonal)->Arg(40)->Arg(160)->Arg(640)->Unit(benchmark::kMicrosecond);

static void BM_DeterminantChebyshev(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const cplx k{0.4, 0.7};
  for (auto _ : state) benchmark::DoNotOptimize(chebyshev_det_form(n, cplx{0, 0.1}, k));
}
BENCHMARK(BM_DeterminantChebyshev)->Arg(40)->Arg(160)->Arg(640)->Unit(benchmark::kMicrosecond);

static void BM_ContinuousWindow(benchmark::State& state) {
  const ContinuousBarrier op(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(continuous_spectrum(op));
}
BENCHMARK(BM_ContinuousWindow)->Arg(2500)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_FullSpectrum(benchmark::State& state) {
  const ContinuousBarrier op(2500);
  for (auto _ : state) benchmark::DoNotOptimize(full_spectrum(op));
}
BENCHMARK(BM_FullSpectrum)->Unit(benchmark::kMillisecond);
