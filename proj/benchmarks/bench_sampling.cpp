#include <benchmark/benchmark.h>

#include <vector>

#include "condana/rand_geom.hpp"

namespace {

void BM_UnitBall(benchmark::State& state) {
  condana::SampleStream s(42);
  std::vector<double> u(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    condana::sample_unit_ball(s, u);
    benchmark::DoNotOptimize(u.data());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_UnitBall)->Arg(2)->Arg(10)->Arg(100);

void BM_UnitCube(benchmark::State& state) {
  condana::SampleStream s(42);
  std::vector<double> u(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    condana::sample_unit_cube(s, u);
    benchmark::DoNotOptimize(u.data());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_UnitCube)->Arg(2)->Arg(10)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
