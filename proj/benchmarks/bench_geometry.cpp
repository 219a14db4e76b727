#include <benchmark/benchmark.h>

#include "qlvar/family.hpp"
#include "qlvar/surface.hpp"

using namespace qlvar;

static void BM_ExtrinsicGeometry(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  family::GraphSpec spec{4.0, 1.0, {0.0, 0.0, 0.1}};
  const family::PhysicalFamily phys(ambient::StaticSpace(1.0), spec, SphereGrid(n, 2 * n));
  const auto surf = phys.at(0.0);
  for (auto _ : state) {
    auto geom = surface::extrinsic_geometry(surf);
    benchmark::DoNotOptimize(geom);
  }
}
BENCHMARK(BM_ExtrinsicGeometry)->RangeMultiplier(2)->Range(8, 64)->Unit(benchmark::kMillisecond);

static void BM_ExtrinsicGeometryConformal(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ambient::ConformalFactor u;
  u.gaussian_amplitude = 0.01;
  u.gaussian_center = 4.0;
  const family::PhysicalFamily phys({ambient::StaticSpace(1.0), u}, {4.0, 1.0, {}}, SphereGrid(n, 2 * n));
  const auto surf = phys.at(0.0);
  for (auto _ : state) {
    auto geom = surface::extrinsic_geometry(surf);
    benchmark::DoNotOptimize(geom);
  }
}
BENCHMARK(BM_ExtrinsicGeometryConformal)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
