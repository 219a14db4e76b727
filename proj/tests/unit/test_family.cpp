#include <cmath>
#include <memory>

#include "doctest.h"

#include "oracles.hpp"
#include "qlvar/error.hpp"
#include "qlvar/family.hpp"

using namespace qlvar;
using namespace qlvar::family;
using ambient::AmbientMetric;
using ambient::StaticSpace;

namespace {

double max_abs(const Field& f) { return f.cwiseAbs().maxCoeff(); }

GraphSpec cos2(double r0, double amp) {
  GraphSpec g;
  g.r0 = r0;
  g.speed = 1.0;
  g.cos_powers = {0.0, 0.0, amp};
  return g;
}

AmbientMetric conformal_m1() {
  ambient::ConformalFactor u;
  u.gaussian_amplitude = 0.01;
  u.gaussian_center = 4.0;
  u.gaussian_width = 1.0;
  return {StaticSpace(1.0), u};
}

}  // namespace

TEST_CASE("graph spec") {
  const auto g = cos2(4.0, 0.05);
  CHECK_FALSE(g.spherical());
  CHECK(g.rho(0.0, 0.5) == doctest::Approx(4.55));
  CHECK(g.rho(oracle::pi / 2, 0.0) == doctest::Approx(4.0));
  const double t = 0.7, h = 1e-4;
  CHECK(g.rho_theta(t) == doctest::Approx((g.rho(t + h, 0) - g.rho(t - h, 0)) / (2 * h)).epsilon(1e-7));
  GraphSpec sph;
  sph.r0 = 3.0;
  CHECK(sph.spherical());
}

TEST_CASE("labels follow orthogonal trajectories") {
  const SphereGrid grid(12, 8);
  const PhysicalFamily fam(conformal_m1(), cos2(4.0, 0.05), grid);
  CHECK((fam.labels(0.0) - grid.theta_nodes()).norm() == 0.0);
  const Eigen::VectorXd later = fam.labels(0.01);
  CHECK((later - grid.theta_nodes()).norm() > 1e-6);
  // poles and equator are fixed points of the label flow
  CHECK(std::abs(later[0] - grid.theta(0)) < std::abs(later[3] - grid.theta(3)));
}

TEST_CASE("physical velocity is normal and matches positions") {
  const SphereGrid grid(16, 8);
  const PhysicalFamily fam(conformal_m1(), cos2(4.0, 0.05), grid);
  const double t = 0.02;
  const auto v = fam.velocity(t);
  const auto geo = surface::extrinsic_geometry(fam.at(t));
  const auto cov = surface::covariant_components(geo, v);
  const Field eta = surface::normal_component(geo, v);
  CHECK(eta.minCoeff() > 0.5);
  CHECK(max_abs(cov[0].cwiseQuotient(geo.E.cwiseSqrt())) < 1e-10 * max_abs(eta));
  CHECK(max_abs(cov[1].cwiseQuotient(geo.G.cwiseSqrt())) < 1e-10 * max_abs(eta));

  std::vector<double> err;
  for (double h : {2e-3, 1e-3}) {
    const auto p = fam.at(t + h).position();
    const auto m = fam.at(t - h).position();
    double e = 0.0;
    for (int k = 0; k < 3; ++k) e = std::max(e, max_abs((p[k] - m[k]) / (2 * h) - v[k]));
    err.push_back(e);
  }
  CHECK(err[1] < 1e-5);
  CHECK(std::log2(err[0] / err[1]) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("reference kinds") {
  const SphereGrid grid(12, 8);
  GraphSpec sphere;
  sphere.r0 = 4.0;
  auto flat = std::make_shared<PhysicalFamily>(AmbientMetric(StaticSpace(0.0)), sphere, grid);
  auto bumpy = std::make_shared<PhysicalFamily>(conformal_m1(), cos2(4.0, 0.05), grid);

  ReferenceSpec matched;
  matched.kind = ReferenceKind::MatchedSphere;
  matched.mass = 1.0;
  const ReferenceFamily ref(flat, matched);
  const auto s = ref.at(0.5);
  CHECK(s.at(3, 2).norm() == doctest::Approx(4.5));
  CHECK_THROWS_AS(ReferenceFamily(bumpy, matched), Error);

  ReferenceSpec same;
  same.kind = ReferenceKind::Identical;
  same.mass = 0.0;
  CHECK_NOTHROW(ReferenceFamily(flat, same));
  same.mass = 1.0;
  CHECK_THROWS_AS(ReferenceFamily(flat, same), Error);

  ReferenceSpec fixed;
  fixed.kind = ReferenceKind::Static;
  fixed.mass = 1.0;
  fixed.radius = 5.0;
  const ReferenceFamily st(flat, fixed);
  CHECK(st.at(0.3).at(1, 1).norm() == doctest::Approx(5.0));
  CHECK(st.at(0.3).at(1, 1) == st.at(-0.2).at(1, 1));

  ReferenceSpec embedded;
  embedded.kind = ReferenceKind::Embedded;
  embedded.mass = 1.0;
  const ReferenceFamily emb(bumpy, embedded);
  CHECK(emb.embedding_residual(0.0) <= 1e-8);
  const auto pg = surface::induced_metric(bumpy->at(0.0));
  const auto rg = surface::induced_metric(emb.at(0.0));
  CHECK(surface::metric_mismatch(pg, rg) <= 1e-8);

  CHECK(to_string(ReferenceKind::MatchedSphere) == "matched-sphere");
  CHECK(to_string(ReferenceKind::Embedded) == "embed");
  CHECK(to_string(ReferenceKind::Identical) == "identical");
  CHECK(to_string(ReferenceKind::Static) == "static-sphere");
}

TEST_CASE("rotating reference is a rigid motion of the unrotated one") {
  const SphereGrid grid(8, 8);
  GraphSpec sphere;
  sphere.r0 = 4.0;
  auto flat = std::make_shared<PhysicalFamily>(AmbientMetric(StaticSpace(0.0)), sphere, grid);
  ReferenceSpec spec;
  spec.mass = 1.0;
  spec.omega = 1.0;
  const ReferenceFamily rot(flat, spec);
  const Mat3 r = rotation_matrix(Vec3::UnitZ(), 0.25);
  CHECK((r * r.transpose() - Mat3::Identity()).norm() < 1e-15);
  CHECK(r.determinant() == doctest::Approx(1.0));
  spec.omega = 0.0;
  const ReferenceFamily still(flat, spec);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) CHECK((rot.at(0.25).at(i, j) - r * still.at(0.25).at(i, j)).norm() < 1e-13);
}
