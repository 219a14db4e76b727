#include <cmath>

#include <benchmark/benchmark.h>

#include "qlvar/embedding.hpp"

using namespace qlvar;

static void BM_EmbedAxisymmetric(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SphereGrid grid(n, 4);
  const ambient::StaticSpace space(1.0);
  const auto metric = embedding::AxiMetric::from_profile(
      ambient::StaticSpace(0.5), [](double th) { return 5.0 + 0.2 * std::pow(std::cos(th), 2); },
      [](double th) { return -0.4 * std::cos(th) * std::sin(th); });
  for (auto _ : state) {
    auto res = embedding::embed_axisymmetric(metric, space, grid);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(BM_EmbedAxisymmetric)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_EmbedRound(benchmark::State& state) {
  const SphereGrid grid(static_cast<int>(state.range(0)), 4);
  const ambient::StaticSpace space(1.0);
  const auto metric = embedding::AxiMetric::round(4.0);
  for (auto _ : state) {
    auto res = embedding::embed_axisymmetric(metric, space, grid);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(BM_EmbedRound)->Arg(32)->Unit(benchmark::kMillisecond);
