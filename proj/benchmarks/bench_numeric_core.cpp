#include <benchmark/benchmark.h>

#include <cmath>

#include "barrier/jacobi_barrier.hpp"
#include "barrier/numeric_core.hpp"
#include "barrier/schrodinger_barrier.hpp"

using namespace barrier;

static void BM_EvaluateSparse(benchmark::State& state) {
  const auto p = char_poly(DiscreteBarrier(static_cast<int>(state.range(0)), 0.1), Branch::minus);
  cplx z{0.3, 0.9};
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(p, z));
    z *= cplx(1.0, 1e-9);
  }
}
BENCHMARK(BM_EvaluateSparse)->Arg(39)->Arg(400)->Arg(3200);

static void BM_SolveCharPoly(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto p = char_poly(DiscreteBarrier(n, std::pow(n, -2.0 / 3.0)), Branch::minus);
  SolveOptions opts;
  opts.initial_radius = std::max(0.3, 1.0 - 2.0 / 3.0 * std::log(n) / n);
  for (auto _ : state) benchmark::DoNotOptimize(solve_polynomial(p, 1e-12, opts));
  state.SetComplexityN(n);
}
BENCHMARK(BM_SolveCharPoly)->RangeMultiplier(2)->Range(50, 800)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_CountZerosContinuousWindow(benchmark::State& state) {
  const Rectangle box({-300.0, 1.0}, {-10.0, 5.0});
  for (auto _ : state)
    benchmark::DoNotOptimize(count_zeros([](cplx mu) { return char_residual(mu, 2500.0); }, box, 512));
}
BENCHMARK(BM_CountZerosContinuousWindow)->Unit(benchmark::kMillisecond);
