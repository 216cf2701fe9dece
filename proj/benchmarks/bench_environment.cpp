#include <benchmark/benchmark.h>

#include "fpp/environment.hpp"
#include "fpp/passage.hpp"

namespace {

void BM_GenerateEnvironment(benchmark::State& state) {
  const fpp::Box box(2, static_cast<int>(state.range(0)));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fpp::Environment::generate(fpp::EnvConfig{box, 0.7, seed++}));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(box.n_edges()) * state.iterations());
}

void BM_SampleExponentialField(benchmark::State& state) {
  const fpp::Box box(2, static_cast<int>(state.range(0)));
  const fpp::PassageModel model{fpp::Exponential{1.0}, 3};
  for (auto _ : state) {
    benchmark::DoNotOptimize(fpp::sample_field(model, box));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(box.n_edges()) * state.iterations());
}

void BM_SampleGaussianField(benchmark::State& state) {
  const fpp::Box box(2, static_cast<int>(state.range(0)));
  fpp::GaussianKernel kernel{2, {}};
  for (int i = 0; i < 2; ++i) {
    kernel.taps.push_back({fpp::Point(2), i, i, 0.8});
    kernel.taps.push_back({fpp::Point::unit(2, i), i, i, 0.6});
  }
  const fpp::PassageModel model{kernel, 3};
  for (auto _ : state) {
    benchmark::DoNotOptimize(fpp::sample_field(model, box));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(box.n_edges()) * state.iterations());
}

}  // namespace

BENCHMARK(BM_GenerateEnvironment)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SampleExponentialField)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SampleGaussianField)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);
