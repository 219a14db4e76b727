#include <memory>

#include <benchmark/benchmark.h>

#include "qlvar/family.hpp"
#include "qlvar/variation.hpp"

using namespace qlvar;

namespace {

void run_report(benchmark::State& state, family::ReferenceKind kind, ambient::AmbientMetric metric,
                family::GraphSpec spec, double ref_mass, int n_phi) {
  const int n = static_cast<int>(state.range(0));
  auto phys = std::make_shared<const family::PhysicalFamily>(std::move(metric), std::move(spec),
                                                              SphereGrid(n, n_phi > 0 ? n_phi : 2 * n));
  family::ReferenceSpec rs;
  rs.kind = kind;
  rs.mass = ref_mass;
  const family::ReferenceFamily ref(phys, rs);
  for (auto _ : state) {
    auto report = variation::evolution_rhs(*phys, ref, 0.0, 1e-3);
    benchmark::DoNotOptimize(report);
  }
}

}  // namespace

static void BM_EvolutionMatchedSphere(benchmark::State& state) {
  run_report(state, family::ReferenceKind::MatchedSphere, ambient::StaticSpace(0.0), {4.0, 1.0, {}}, 1.0, 0);
}
BENCHMARK(BM_EvolutionMatchedSphere)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_EvolutionEmbedded(benchmark::State& state) {
  ambient::ConformalFactor u;
  u.gaussian_amplitude = 0.01;
  u.gaussian_center = 4.0;
  run_report(state, family::ReferenceKind::Embedded, {ambient::StaticSpace(1.0), u}, {4.0, 1.0, {0.0, 0.0, 0.05}},
             1.0, 8);
}
BENCHMARK(BM_EvolutionEmbedded)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
