#include <benchmark/benchmark.h>

#include "condana/closed_forms.hpp"

namespace {

void BM_UniformSumCdf(benchmark::State& state) {
  const auto m = static_cast<unsigned>(state.range(0));
  double t = -2.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(condana::uniform_sum_cdf(m, t));
    t = t > 2.0 ? -2.0 : t + 0.01;
  }
}
BENCHMARK(BM_UniformSumCdf)->Arg(1)->Arg(12)->Arg(30);

void BM_ExpectedLogUniformSum(benchmark::State& state) {
  const auto m = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(condana::expected_log_uniform_sum(m));
}
BENCHMARK(BM_ExpectedLogUniformSum)->Arg(2)->Arg(8)->Arg(16);

void BM_CosMoments(benchmark::State& state) {
  const auto m = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(condana::cos_moments(m));
}
BENCHMARK(BM_CosMoments)->Arg(10)->Arg(1000)->Arg(1000000);

}  // namespace
