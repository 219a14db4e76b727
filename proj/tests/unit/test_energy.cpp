#include <cmath>

#include "doctest.h"

#include "oracles.hpp"
#include "qlvar/energy.hpp"
#include "qlvar/error.hpp"

using namespace qlvar;
using namespace qlvar::energy;
using ambient::AmbientMetric;
using ambient::StaticSpace;
using surface::ParamSurface;

namespace {

SurfacePair sphere_pair(double m_phys, double m_ref, double r, const SphereGrid& grid) {
  const auto phys = ParamSurface::coordinate_sphere(grid, AmbientMetric(StaticSpace(m_phys)), r);
  const auto ref = ParamSurface::coordinate_sphere(grid, AmbientMetric(StaticSpace(m_ref)), r);
  return SurfacePair::build(phys, ref, StaticSpace(m_ref));
}

}  // namespace

TEST_CASE("static Wang-Yau energy of round spheres") {
  const SphereGrid grid(12, 24);
  const auto pair = sphere_pair(0.0, 1.0, 4.0, grid);
  CHECK(pair.iso_residual < 1e-12);
  const double s = oracle::lapse(1.0, 4.0);
  const double closed = 4.0 * s * (s - 1.0);
  CHECK(closed == doctest::Approx(-0.8284271).epsilon(1e-7));
  // quadrature of the constant integrand written out
  const double quad = (1 / (8 * oracle::pi)) * s * (2 * s / 4 - 0.5) * 4 * oracle::pi * 16;
  CHECK(quad == doctest::Approx(closed).epsilon(1e-14));
  CHECK(wang_yau_static_energy(pair) == doctest::Approx(closed).epsilon(1e-10));

  const auto same = sphere_pair(1.0, 1.0, 4.0, grid);
  CHECK(std::abs(wang_yau_static_energy(same)) < 1e-12);
  const auto flat = sphere_pair(0.0, 0.0, 4.0, grid);
  CHECK(std::abs(wang_yau_static_energy(flat)) < 1e-12);
}

TEST_CASE("antisymmetry under swapping H and Hbar") {
  const SphereGrid grid(12, 24);
  auto pair = sphere_pair(0.0, 1.0, 5.0, grid);
  const double e = wang_yau_static_energy(pair);
  std::swap(pair.physical.H, pair.reference.H);
  CHECK(wang_yau_static_energy(pair) == doctest::Approx(-e).epsilon(1e-14));
}

TEST_CASE("Brown-York") {
  const SphereGrid grid(12, 24);
  CHECK(std::abs(brown_york(sphere_pair(0.0, 0.0, 4.0, grid))) < 1e-12);
  const auto pair = sphere_pair(1.0, 0.0, 4.0, grid);
  CHECK(brown_york(pair) == doctest::Approx(1.1715729).epsilon(1e-7));
  CHECK(std::abs(brown_york(pair) - 4.0 * (1.0 - oracle::lapse(1.0, 4.0))) < 1e-10);
  CHECK_THROWS_AS((void)brown_york(sphere_pair(1.0, 1.0, 4.0, grid)), Error);
}

TEST_CASE("Brown-York of coordinate spheres tends to the mass") {
  const SphereGrid grid(8, 16);
  // r (1 - s) = m + m^2 / (2 r) + O(r^-2)
  for (double r : {10.0, 100.0, 1000.0}) {
    const double by = brown_york(sphere_pair(1.0, 0.0, r, grid));
    CHECK(std::abs(by - r * (1 - oracle::lapse(1.0, r))) < 1e-8);
    CHECK(std::abs(by - (1.0 + 0.5 / r)) < 2.0 / (r * r));
  }
}

TEST_CASE("isometry violation is reported") {
  const SphereGrid grid(8, 16);
  const auto phys = ParamSurface::coordinate_sphere(grid, AmbientMetric(StaticSpace(0.0)), 4.0);
  const auto ref = ParamSurface::coordinate_sphere(grid, AmbientMetric(StaticSpace(1.0)), 4.1);
  const auto pair = SurfacePair::build(phys, ref, StaticSpace(1.0));
  try {
    (void)wang_yau_static_energy(pair);
    FAIL("expected an isometry violation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IsometryViolation);
  }
}

TEST_CASE("Penrose functional") {
  const SphereGrid grid(12, 24);
  SUBCASE("equality case") {
    for (double m : {0.5, 1.0, 2.0})
      for (double r : {3.0 * m, 4.0 * m, 8.0 * m}) {
        const auto pair = sphere_pair(m, m, r, grid);
        const auto rep = penrose_functional(pair, 16 * oracle::pi * m * m);
        CAPTURE(m);
        CAPTURE(r);
        CHECK(std::abs(rep.gap) <= 1e-8);
        CHECK(rep.mean_curvature_equal);
        CHECK(rep.horizon_equal);
        CHECK(rep.equality);
        CHECK_FALSE(rep.no_interior_minimal_surfaces_verified);
      }
  }
  SUBCASE("H = 0.9 H_m") {
    auto pair = sphere_pair(1.0, 1.0, 4.0, grid);
    pair.physical.H *= 0.9;
    // (1/8 pi) N (0.1 H_m) 4 pi r^2 with N = s, H_m = 2 s / r
    const double s = oracle::lapse(1.0, 4.0);
    const double closed = 0.1 * (2 * s / 4.0) * s * 4 * oracle::pi * 16 / (8 * oracle::pi);
    CHECK(closed == doctest::Approx(0.2).epsilon(1e-14));
    const auto rep = penrose_functional(pair, 16 * oracle::pi);
    CHECK(std::abs(rep.gap - 0.2) <= 1e-6);
    CHECK_FALSE(rep.mean_curvature_equal);
    CHECK_FALSE(rep.equality);
  }
  SUBCASE("sub-extremal horizon") {
    const auto rep = penrose_functional(sphere_pair(1.0, 1.0, 4.0, grid), 4 * oracle::pi);
    CHECK(std::abs(rep.gap - 0.5) < 1e-10);
    CHECK(rep.mean_curvature_equal);
    CHECK_FALSE(rep.horizon_equal);
  }
  SUBCASE("decreasing H increases energy and gap") {
    auto pair = sphere_pair(1.0, 1.0, 4.0, grid);
    const Field bump = grid.sample([](double t, double p) {
      return 1.0 + 0.5 * std::sin(t) * std::sin(t) * std::cos(p) * std::cos(p);
    });
    double prev_gap = -1.0, prev_e = -1e300;
    for (double k : {0.0, 0.01, 0.05, 0.1, 0.3}) {
      auto p = pair;
      p.physical.H = pair.physical.H - k * pair.physical.H.cwiseProduct(bump) / 2.0;
      const auto rep = penrose_functional(p, 16 * oracle::pi);
      const double e = wang_yau_static_energy(p);
      CHECK(rep.gap > prev_gap);
      CHECK(e > prev_e);
      prev_gap = rep.gap;
      prev_e = e;
    }
  }
}

TEST_CASE("hypothesis check") {
  const SphereGrid grid(16, 32);
  const auto sphere = surface::extrinsic_geometry(
      ParamSurface::coordinate_sphere(grid, AmbientMetric(StaticSpace(1.0)), 4.0));
  const auto rep = hypothesis_check(sphere);
  CHECK(rep.ric_nu_nu_max == doctest::Approx(-0.03125).epsilon(1e-10));
  const oracle::Mat3 ric = oracle::fd_ricci(oracle::schwarzschild(1.0), {4.0, 1.0, 0.0});
  CHECK(std::abs(rep.ric_nu_nu_max - ric(0, 0) / oracle::schwarzschild_metric(1.0, {4.0, 1.0, 0.0})(0, 0)) < 1e-8);
  CHECK(rep.H_positive);
  CHECK(rep.convexity_min_eigenvalue > 0.0);
  CHECK(rep.satisfied());

  const auto flat = surface::extrinsic_geometry(ParamSurface::radial_graph(
      grid, AmbientMetric(StaticSpace(0.0)), [](double t, double p) { return 3.0 + 0.2 * std::sin(t) * std::cos(p); }));
  CHECK(std::abs(hypothesis_check(flat).ric_nu_nu_max) < 1e-14);

  // meridian curvature at the equator of 4 + 2.4 cos^2 is (r^2 + 2 r'^2 - r r'') / ... < 0
  const auto peanut = surface::extrinsic_geometry(ParamSurface::radial_graph(
      grid, AmbientMetric(StaticSpace(1.0)), [](double t, double) { return 4.0 + 2.4 * std::cos(t) * std::cos(t); }));
  const auto bad = hypothesis_check(peanut);
  CHECK(bad.convexity_min_eigenvalue < 0.0);
  CHECK_FALSE(bad.satisfied());
}
