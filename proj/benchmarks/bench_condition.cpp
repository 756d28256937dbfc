#include <benchmark/benchmark.h>

#include "condana/condition.hpp"

namespace {

condana::Matrix random_matrix(std::size_t n, std::size_t m) {
  condana::SampleStream s(7);
  condana::Matrix a(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) a(i, j) = s.normal();
  return a;
}

void BM_SpectralNorm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_matrix(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(condana::spectral_norm(a));
}
BENCHMARK(BM_SpectralNorm)->Arg(3)->Arg(10)->Arg(30);

void BM_EstimateNormwise(benchmark::State& state) {
  const auto a = random_matrix(5, static_cast<std::size_t>(state.range(0)));
  condana::EstimatorConfig cfg;
  cfg.samples = 10000;
  cfg.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(condana::estimate_normwise(a, 1.0, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.samples));
}
BENCHMARK(BM_EstimateNormwise)->Arg(5)->Arg(30);

void BM_EstimateComponentwise(benchmark::State& state) {
  const condana::Vector g(static_cast<std::size_t>(state.range(0)), 1.0);
  condana::EstimatorConfig cfg;
  cfg.samples = 10000;
  cfg.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(condana::estimate_componentwise(g, 1.0, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.samples));
}
BENCHMARK(BM_EstimateComponentwise)->Arg(5)->Arg(50);

}  // namespace
