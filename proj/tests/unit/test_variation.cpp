#include <cmath>
#include <memory>

#include "doctest.h"

#include "oracles.hpp"
#include "qlvar/error.hpp"
#include "qlvar/variation.hpp"

using namespace qlvar;
using namespace qlvar::variation;
using ambient::AmbientMetric;
using ambient::StaticSpace;
using family::GraphSpec;
using family::PhysicalFamily;
using family::ReferenceFamily;
using family::ReferenceKind;
using family::ReferenceSpec;

namespace {

double max_abs(const Field& f) { return f.cwiseAbs().maxCoeff(); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

std::shared_ptr<PhysicalFamily> spheres(const AmbientMetric& metric, double r0, const SphereGrid& grid) {
  GraphSpec g;
  g.r0 = r0;
  g.speed = 1.0;
  return std::make_shared<PhysicalFamily>(metric, g, grid);
}

ReferenceFamily matched(std::shared_ptr<PhysicalFamily> phys, double mass, double omega = 0.0) {
  ReferenceSpec spec;
  spec.kind = ReferenceKind::MatchedSphere;
  spec.mass = mass;
  spec.omega = omega;
  return {std::move(phys), spec};
}

/// Coordinate sphere r in mass m with eta = f = 1 and a prescribed
/// trace-free perturbation Abar = A + a (E, 0, -G).
VariationData trace_free_pair(double m, double r, double a, const SphereGrid& grid) {
  const StaticSpace space(m);
  const auto geo = surface::extrinsic_geometry(
      surface::ParamSurface::coordinate_sphere(grid, AmbientMetric(space), r));
  const auto pot = surface::potential_on(geo, space);
  VariationData d;
  d.grid = grid;
  d.dsigma = geo.dsigma;
  d.inv_tt = geo.inv_tt;
  d.inv_tp = geo.inv_tp;
  d.inv_pp = geo.inv_pp;
  d.A_tt = geo.A_tt;
  d.A_tp = geo.A_tp;
  d.A_pp = geo.A_pp;
  d.Abar_tt = geo.A_tt + a * geo.E;
  d.Abar_tp = geo.A_tp;
  d.Abar_pp = geo.A_pp - a * geo.G;
  d.H = geo.H;
  d.Hbar = geo.H;
  d.R = grid.zeros();
  d.Rbar = grid.zeros();
  d.N = pot.N;
  d.dN_dnu = pot.dN_dnu;
  d.eta = grid.constant(1.0);
  d.f = grid.constant(1.0);
  d.Y_dN = grid.zeros();
  d.Y_norm = grid.zeros();
  d.sigma2_bar = geo.sigma2;
  d.speed_scale = 1.0;
  return d;
}

}  // namespace

TEST_CASE("lapse and shift") {
  const SphereGrid grid(12, 24);
  SUBCASE("radial spheres in m = 1") {
    auto phys = spheres(AmbientMetric(StaticSpace(0.0)), 4.0, grid);
    const auto ls = lapse_shift(matched(phys, 1.0), 0.0, 1e-3);
    CHECK(max_abs(ls.f.array() - 1.4142135624) < 1e-9);
    for (const auto& c : ls.Y) CHECK(max_abs(c) < 1e-10);
  }
  SUBCASE("static family") {
    auto phys = spheres(AmbientMetric(StaticSpace(0.0)), 4.0, grid);
    ReferenceSpec spec;
    spec.kind = ReferenceKind::Static;
    spec.mass = 1.0;
    const auto ls = lapse_shift(ReferenceFamily(phys, spec), 0.0, 1e-3);
    CHECK(max_abs(ls.f) == 0.0);
    for (const auto& c : ls.Y) CHECK(max_abs(c) == 0.0);
  }
  SUBCASE("rotating coordinate sphere") {
    GraphSpec still;
    still.r0 = 4.0;
    still.speed = 0.0;
    auto phys = std::make_shared<PhysicalFamily>(AmbientMetric(StaticSpace(0.0)), still, grid);
    const auto ref = matched(phys, 1.0, 1.0);
    const auto ls = lapse_shift(ref, 0.0, 1e-3);
    CHECK(max_abs(ls.f) < 1e-10);
    CHECK(ls.normal_residual <= 1e-10 * ls.speed_scale);
    const AmbientMetric metric(StaticSpace(1.0));
    const auto surf = ref.at(0.0);
    for (int i = 0; i < grid.n_theta(); ++i)
      for (int j = 0; j < grid.n_phi(); j += 5) {
        const Vec3 x = surf.at(i, j);
        const Vec3 y(ls.Y[0](i, j), ls.Y[1](i, j), ls.Y[2](i, j));
        const double sin_psi = std::sin(ambient::to_spherical(x).psi);
        CHECK(std::abs(y.dot(metric.cartesian_metric(x) * y) - 16.0 * sin_psi * sin_psi) < 1e-10);
      }
  }
}

TEST_CASE("iso compatibility") {
  const SphereGrid grid(12, 24);
  auto phys = spheres(AmbientMetric(StaticSpace(0.0)), 4.0, grid);
  CHECK(iso_compat_residual(*phys, matched(phys, 1.0), 0.3) <= 1e-12);
  ReferenceSpec same;
  same.kind = ReferenceKind::Identical;
  CHECK(iso_compat_residual(*phys, ReferenceFamily(phys, same), 0.1) == 0.0);
}

TEST_CASE("energy derivative, radial benchmark") {
  const SphereGrid grid(8, 16);
  for (double r : {4.0, 8.0}) {
    auto phys = spheres(AmbientMetric(StaticSpace(0.0)), r, grid);
    const auto d = energy_derivative_lhs(*phys, matched(phys, 1.0), 0.0, 1e-3);
    const double exact = oracle::radial::dq_dt(1.0, r);
    CAPTURE(r);
    CHECK(std::abs(d.value / exact - 1.0) < 1e-8);
    CHECK(std::abs(d.base / exact - 1.0) < 1e-5);
    if (d.order_measurable) CHECK(d.order >= 1.9);
  }
}

TEST_CASE("identical families: everything vanishes") {
  const SphereGrid grid(8, 16);
  GraphSpec g;
  g.r0 = 5.0;
  auto phys = std::make_shared<PhysicalFamily>(AmbientMetric(StaticSpace(1.0)), g, grid);
  ReferenceSpec same;
  same.kind = ReferenceKind::Identical;
  same.mass = 1.0;
  const ReferenceFamily ref(phys, same);
  const auto rep = evolution_rhs(*phys, ref, 0.0, 1e-3);
  CHECK(std::abs(rep.lhs) < 1e-12);
  CHECK(std::abs(rep.rhs_terms.bulk_A) < 1e-12);
  CHECK(std::abs(rep.rhs_terms.bulk_H) < 1e-12);
  CHECK(std::abs(rep.rhs_terms.bulk_R) < 1e-12);
  CHECK(std::abs(rep.rhs_terms.boundary_f) < 1e-12);
  CHECK(std::abs(rep.rhs_terms.boundary_Y) < 1e-12);
  const auto d = variation_data(*phys, ref, 0.0, 1e-3);
  CHECK(std::abs(chen_zhang_rhs(d)) < 1e-12);
  CHECK(std::abs(lu_miao_rhs(d)) < 1e-12);
  CHECK(std::abs(bartnik_rhs(d)) < 1e-12);
}

TEST_CASE("radial benchmark: per-term closed forms and Lu-Miao") {
  const SphereGrid grid(8, 16);
  const double m = 1.0, r = 4.0;
  auto phys = spheres(AmbientMetric(StaticSpace(0.0)), r, grid);
  const auto ref = matched(phys, m);
  const auto rep = evolution_rhs(*phys, ref, 0.0, 1e-3);
  const auto& t = rep.rhs_terms;
  CHECK(std::abs(t.bulk_A / oracle::radial::bulk_A(m, r) - 1.0) < 1e-10);
  CHECK(std::abs(t.bulk_H / oracle::radial::bulk_H(m, r) - 1.0) < 1e-10);
  CHECK(std::abs(t.boundary_f / oracle::radial::boundary_f(m, r) - 1.0) < 1e-10);
  CHECK(std::abs(t.bulk_R) < 1e-12);
  CHECK(std::abs(t.boundary_Y) < 1e-12);
  CHECK(std::abs(rep.rhs - t.total()) < 1e-15);
  CHECK(std::abs(rep.rhs / oracle::radial::dq_dt(m, r) - 1.0) < 1e-10);
  CHECK(rep.residual < 1e-9);
  CHECK(rep.reference_kind == "matched-sphere");

  const auto d = variation_data(*phys, ref, 0.0, 1e-3);
  const double lm = lu_miao_rhs(d);
  CHECK(std::abs(lm / oracle::radial::dq_dt(m, r) - 1.0) < 1e-10);
  CHECK(std::abs(lm - rep.rhs) <= 1e-8 * std::abs(rep.rhs));
}

TEST_CASE("rotating and rotated references leave the report unchanged") {
  const SphereGrid grid(8, 16);
  auto phys = spheres(AmbientMetric(StaticSpace(0.0)), 4.0, grid);
  const auto base = evolution_rhs(*phys, matched(phys, 1.0), 0.0, 1e-3);
  const auto rot = evolution_rhs(*phys, matched(phys, 1.0, 1.0), 0.0, 1e-3);
  CHECK(std::abs(rot.lhs - base.lhs) < 1e-8);
  CHECK(std::abs(rot.rhs - base.rhs) < 1e-8);
  CHECK(std::abs(rot.residual - base.residual) < 1e-8);

  ReferenceSpec tilted;
  tilted.mass = 1.0;
  tilted.fixed_rotation = family::rotation_matrix(Vec3(1, 1, 0), 0.8);
  const auto fixed = evolution_rhs(*phys, ReferenceFamily(phys, tilted), 0.0, 1e-3);
  CHECK(std::abs(fixed.lhs - base.lhs) < 1e-10);
  CHECK(std::abs(fixed.rhs - base.rhs) < 1e-10);

  const auto d = variation_data(*phys, matched(phys, 1.0, 1.0), 0.0, 1e-3);
  CHECK(code_of([&] { (void)lu_miao_rhs(d); }) == ErrorCode::PreconditionShiftNotZero);
}

TEST_CASE("Chen-Zhang and Bartnik on a prescribed trace-free perturbation") {
  const SphereGrid grid(12, 24);
  const double a = 1e-2, m = 1.0, r = 4.0;
  const auto d = trace_free_pair(m, r, a, grid);
  CHECK(max_abs(d.a_difference_norm2().array() - 2 * a * a) < 1e-15);
  const double n = oracle::lapse(m, r);
  const double area = 4 * oracle::pi * r * r;
  const double cz = chen_zhang_rhs(d);
  CHECK(std::abs(cz - 0.5 * n * 2 * a * a * area) < 1e-12);
  const auto terms = evolution_rhs_terms(d);
  CHECK(std::abs(terms.total() - cz) <= 1e-10 * std::abs(cz));
  const double bm = bartnik_rhs(d);
  CHECK(std::abs(bm - n * 2 * a * a * area / (16 * oracle::pi)) < 1e-14);
  CHECK(std::abs(terms.total() / (8 * oracle::pi) - bm) <= 1e-10 * std::abs(bm));

  auto off = d;
  off.Hbar = d.H * 1.01;
  CHECK(code_of([&] { (void)chen_zhang_rhs(off); }) == ErrorCode::PreconditionHNotMatched);
  CHECK(code_of([&] { (void)bartnik_rhs(off); }) == ErrorCode::PreconditionHNotMatched);

  auto still = d;
  still.eta.row(3).setZero();
  CHECK(code_of([&] { (void)lu_miao_rhs(still); }) == ErrorCode::EtaVanishes);
  auto curved = d;
  curved.R = grid.constant(1e-3);
  CHECK(code_of([&] { (void)lu_miao_rhs(curved); }) == ErrorCode::PreconditionScalarCurvatureMismatch);
}

TEST_CASE("Bartnik integrand with scalar curvature from a conformal factor") {
  // u = 1 + b (r - 4)^2: on r = 4, u = 1 and du = 0, so H = Hbar and A = Abar but R != 0.
  const SphereGrid grid(12, 24);
  const double b = 0.01, m = 1.0, r = 4.0;
  ambient::ConformalFactor u;
  u.quadratic_coefficient = b;
  u.quadratic_center = r;
  const AmbientMetric metric(StaticSpace(m), u);
  auto phys = spheres(metric, r, grid);
  const auto ref = matched(phys, m);
  const auto d = variation_data(*phys, ref, 0.0, 1e-3);

  const double r_fd = oracle::fd_scalar(
      oracle::conformal_cartesian(m, [&](double x) { return 1 + b * (x - r) * (x - r); }),
      Vec3(0.0, 0.0, r), 2e-3, 1e-3);
  const double s = oracle::lapse(m, r);
  CHECK(std::abs(r_fd - (-16 * b * s * s)) < 1e-7);
  // eta = u^2 / s, N = s, area = 4 pi r^2 u^4 on the initial sphere
  const double expected = s * r_fd * (1 / s) * 4 * oracle::pi * r * r / (16 * oracle::pi);
  const double bm = bartnik_rhs(d);
  CHECK(std::abs(bm - expected) < 1e-7);

  const auto rep = evolution_rhs(*phys, ref, 0.0, 1e-3);
  CHECK(std::abs(rep.rhs / (8 * oracle::pi) - bm) <= 1e-10 * std::abs(bm));
  CHECK(std::abs(rep.lhs - rep.rhs) < 1e-7 * std::abs(rep.rhs));
}

TEST_CASE("first variation identities") {
  const SphereGrid grid(12, 24);
  SUBCASE("radial Euclidean spheres") {
    auto phys = spheres(AmbientMetric(StaticSpace(0.0)), 4.0, grid);
    const auto r = first_variation_checks(*phys, matched(phys, 0.0), 0.0, 1e-3);
    CHECK(r.physical.metric < 1e-8);
    CHECK(r.physical.area < 1e-8);
    CHECK(r.reference.metric < 1e-8);
    CHECK(r.mean_curvature_link < 1e-10);
  }
  SUBCASE("static reference family") {
    auto phys = spheres(AmbientMetric(StaticSpace(0.0)), 4.0, grid);
    ReferenceSpec spec;
    spec.kind = ReferenceKind::Static;
    spec.mass = 1.0;
    const auto r = reference_first_variation(ReferenceFamily(phys, spec), 0.0, 1e-3);
    CHECK(r.metric == 0.0);
    CHECK(r.area == 0.0);
  }
  SUBCASE("rotating reference: second order in dt") {
    GraphSpec still;
    still.r0 = 4.0;
    auto phys = std::make_shared<PhysicalFamily>(AmbientMetric(StaticSpace(0.0)), still, grid);
    ReferenceSpec spec;
    spec.mass = 1.0;
    spec.omega = 1.0;
    spec.fixed_rotation = family::rotation_matrix(Vec3(1, 0, 0), 0.4);
    const ReferenceFamily ref(phys, spec);
    std::vector<double> res;
    for (double dt : {4e-2, 2e-2, 1e-2}) res.push_back(reference_first_variation(ref, 0.0, dt).area);
    CHECK(res[2] < 1e-3);
    CHECK(std::log2(res[0] / res[1]) > 1.8);
    CHECK(std::log2(res[1] / res[2]) > 1.8);
  }
}

TEST_CASE("non-isometric reference is rejected") {
  const SphereGrid grid(8, 16);
  auto phys = spheres(AmbientMetric(StaticSpace(0.0)), 4.0, grid);
  ReferenceSpec spec;
  spec.kind = ReferenceKind::Static;
  spec.mass = 1.0;
  spec.radius = 5.0;
  const ReferenceFamily bad(phys, spec);
  CHECK(iso_compat_residual(*phys, bad, 0.0) == doctest::Approx(9.0));
  CHECK(code_of([&] { (void)variation_data(*phys, bad, 0.0, 1e-3); }) == ErrorCode::IsometryViolation);
}

TEST_CASE("large steps are flagged") {
  // a narrow conformal bump makes Q(t) vary on the scale 0.3
  const SphereGrid grid(8, 16);
  const AmbientMetric bumpy(StaticSpace(0.0), ambient::ConformalFactor{0.05, 4.0, 0.3, 0.0, 0.0});
  auto phys = spheres(bumpy, 4.0, grid);
  const auto ref = matched(phys, 1.0);
  const auto fine = energy_derivative_lhs(*phys, ref, 0.0, 1e-3);
  CHECK(fine.order == doctest::Approx(2.0).epsilon(0.01));
  CHECK(code_of([&] { (void)energy_derivative_lhs(*phys, ref, 0.0, 0.2); }) == ErrorCode::StepTooLarge);
}
