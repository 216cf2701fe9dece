#include <benchmark/benchmark.h>

#include "fpp/flatedge.hpp"

namespace {

void BM_OrientedRightEdge(benchmark::State& state) {
  const int generations = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fpp::oriented_right_edge(0.7, generations, seed++));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(generations) * state.iterations());
}

void BM_OrientedSpeed(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(fpp::oriented_speed(0.7, 1000, static_cast<int>(state.range(0))));
  }
}

}  // namespace

BENCHMARK(BM_OrientedRightEdge)->Arg(1000)->Arg(4000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_OrientedSpeed)->Arg(100)->Unit(benchmark::kMillisecond);
