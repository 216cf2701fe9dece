#include <benchmark/benchmark.h>

#include "fpp/environment.hpp"
#include "fpp/passage.hpp"
#include "fpp/paths.hpp"

namespace {

void BM_WetSetExponential(benchmark::State& state) {
  const fpp::Environment env =
      fpp::Environment::generate(fpp::EnvConfig{fpp::Box(2, static_cast<int>(state.range(0))), 0.7, 1});
  const fpp::PassageField field = fpp::sample_field(fpp::PassageModel{fpp::Exponential{1.0}, 2}, env);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fpp::wet_set(env, field, fpp::Point{0, 0}));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(env.giant_size()) * state.iterations());
}

void BM_WetSetUnitTimes(benchmark::State& state) {
  const fpp::Environment env =
      fpp::Environment::generate(fpp::EnvConfig{fpp::Box(2, static_cast<int>(state.range(0))), 0.7, 1});
  const fpp::PassageField field = fpp::sample_field(fpp::PassageModel{fpp::Dirac{1.0}}, env);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fpp::wet_set(env, field, fpp::Point{0, 0}));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(env.giant_size()) * state.iterations());
}

void BM_ChemicalDistance(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const fpp::Environment env = fpp::Environment::generate(fpp::EnvConfig{fpp::Box(2, L), 0.7, 1});
  const fpp::Point far{L / 2, L / 3};
  for (auto _ : state) {
    benchmark::DoNotOptimize(fpp::chemical_distance(env, fpp::Point{0, 0}, far));
  }
}

}  // namespace

BENCHMARK(BM_WetSetExponential)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WetSetUnitTimes)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ChemicalDistance)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);
