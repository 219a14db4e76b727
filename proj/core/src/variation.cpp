#include "qlvar/variation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qlvar/convergence.hpp"
#include "qlvar/error.hpp"

namespace qlvar::variation {

namespace {

using surface::SurfaceGeometry;

// g(v, v) per node, metric taken from `geom`
Field squared_norm(const SurfaceGeometry& geom, const VectorField& v) {
  Field out = geom.grid.zeros();
  for (int i = 0; i < geom.grid.n_theta(); ++i)
    for (int j = 0; j < geom.grid.n_phi(); ++j) {
      const Vec3 x = geom.vec(v, i, j);
      out(i, j) = x.dot(geom.ambient[geom.node(i, j)].metric * x);
    }
  return out;
}

double max_abs(const Field& f) { return f.size() ? f.cwiseAbs().maxCoeff() : 0.0; }

void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) fail(code, what);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

LapseShift lapse_shift(const family::ReferenceFamily& ref, double t, double dt,
                       const Tolerances& tol) {
  if (!(dt > 0.0)) fail(ErrorCode::InvalidArgument, "time step must be positive");
  const auto p1 = ref.at(t + dt).position();
  const auto m1 = ref.at(t - dt).position();
  const auto p2 = ref.at(t + 2.0 * dt).position();
  const auto m2 = ref.at(t - 2.0 * dt).position();
  VectorField v;
  for (int k = 0; k < 3; ++k) {
    const Field d1 = (p1[k] - m1[k]) / (2.0 * dt);
    const Field d2 = (p2[k] - m2[k]) / (4.0 * dt);
    v[k] = (4.0 * d1 - d2) / 3.0;
  }
  const auto geo = surface::extrinsic_geometry(ref.at(t));
  LapseShift out;
  out.f = surface::normal_component(geo, v);
  for (int k = 0; k < 3; ++k) out.Y[k] = v[k] - out.f.cwiseProduct(geo.nu[k]);
  out.speed_scale = std::sqrt(squared_norm(geo, v).maxCoeff());
  out.normal_residual = max_abs(surface::normal_component(geo, out.Y));
  require(out.normal_residual <= tol.decomposition * std::max(out.speed_scale, 1e-300) ||
              out.normal_residual == 0.0,
          ErrorCode::NonTangentialResidual,
          "shift has normal component " + fmt(out.normal_residual));
  return out;
}

double iso_compat_residual(const family::PhysicalFamily& phys, const family::ReferenceFamily& ref,
                           double t) {
  return surface::metric_mismatch(surface::induced_metric(phys.at(t)),
                                  surface::induced_metric(ref.at(t)));
}

double quasi_local_integral(const family::PhysicalFamily& phys, const family::ReferenceFamily& ref,
                            double t) {
  const auto pg = surface::extrinsic_geometry(phys.at(t));
  const auto rg = surface::extrinsic_geometry(ref.at(t));
  const auto pot = surface::potential_on(rg, ref.space());
  return surface::integrate(pg, pot.N.cwiseProduct(rg.H - pg.H));
}

DerivativeEstimate energy_derivative_lhs(const family::PhysicalFamily& phys,
                                         const family::ReferenceFamily& ref, double t0,
                                         double dt) {
  if (!(dt > 0.0)) fail(ErrorCode::InvalidArgument, "time step must be positive");
  auto q = [&](double t) { return quasi_local_integral(phys, ref, t); };
  const double qh2p = q(t0 + 0.5 * dt), qh2m = q(t0 - 0.5 * dt);
  const double qhp = q(t0 + dt), qhm = q(t0 - dt);
  const double q2p = q(t0 + 2.0 * dt), q2m = q(t0 - 2.0 * dt);
  DerivativeEstimate d;
  d.dt = dt;
  d.base = convergence::central(qhp, qhm, dt);
  d.at_2h = convergence::central(q2p, q2m, 2.0 * dt);
  d.at_half = convergence::central(qh2p, qh2m, 0.5 * dt);
  d.value = convergence::richardson(d.base, d.at_2h);
  // differences of Q at the 1e-13 level are round-off
  const double scale = std::max({std::abs(qhp), std::abs(qhm), 1.0});
  const auto ord = convergence::three_level_order(d.at_2h, d.base, d.at_half, 1e-12 * scale / dt);
  d.order = ord.order;
  d.order_measurable = ord.measurable;
  if (ord.measurable && ord.order < 1.5)
    fail(ErrorCode::StepTooLarge, "observed order " + fmt(ord.order) + " of dQ/dt below 1.5 at dt = " + fmt(dt));
  return d;
}

Field VariationData::a_difference_norm2() const {
  const Field d_tt = A_tt - Abar_tt;
  const Field d_tp = A_tp - Abar_tp;
  const Field d_pp = A_pp - Abar_pp;
  const Field m11 = inv_tt.cwiseProduct(d_tt) + inv_tp.cwiseProduct(d_tp);
  const Field m12 = inv_tt.cwiseProduct(d_tp) + inv_tp.cwiseProduct(d_pp);
  const Field m21 = inv_tp.cwiseProduct(d_tt) + inv_pp.cwiseProduct(d_tp);
  const Field m22 = inv_tp.cwiseProduct(d_tp) + inv_pp.cwiseProduct(d_pp);
  return m11.cwiseProduct(m11) + 2.0 * m12.cwiseProduct(m21) + m22.cwiseProduct(m22);
}

VariationData variation_data(const family::PhysicalFamily& phys, const family::ReferenceFamily& ref,
                             double t0, double dt, const Tolerances& tol) {
  const auto pg = surface::extrinsic_geometry(phys.at(t0));
  const auto rg = surface::extrinsic_geometry(ref.at(t0));
  VariationData d;
  d.grid = pg.grid;
  d.iso_residual = surface::metric_mismatch(pg, rg);
  require(d.iso_residual <= tol.iso, ErrorCode::IsometryViolation,
          "reference metric differs from physical by " + fmt(d.iso_residual));

  d.dsigma = pg.dsigma;
  d.inv_tt = pg.inv_tt;
  d.inv_tp = pg.inv_tp;
  d.inv_pp = pg.inv_pp;
  d.A_tt = pg.A_tt;
  d.A_tp = pg.A_tp;
  d.A_pp = pg.A_pp;
  d.Abar_tt = rg.A_tt;
  d.Abar_tp = rg.A_tp;
  d.Abar_pp = rg.A_pp;
  d.H = pg.H;
  d.Hbar = rg.H;
  d.R = pg.scalar_curv;
  d.Rbar = rg.scalar_curv;
  d.sigma2_bar = rg.sigma2;

  const auto pot = surface::potential_on(rg, ref.space());
  d.N = pot.N;
  d.dN_dnu = pot.dN_dnu;

  const auto v = phys.velocity(t0);
  d.eta = surface::normal_component(pg, v);
  VectorField tangential;
  for (int k = 0; k < 3; ++k) tangential[k] = v[k] - d.eta.cwiseProduct(pg.nu[k]);
  d.normal_leak = std::sqrt(squared_norm(pg, tangential).maxCoeff());
  const double eta_scale = max_abs(d.eta);
  require(d.normal_leak <= tol.normal_motion * eta_scale || d.normal_leak == 0.0,
          ErrorCode::NonNormalMotion,
          "physical motion has tangential part " + fmt(d.normal_leak));

  const auto ls = lapse_shift(ref, t0, dt, tol);
  d.f = ls.f;
  d.speed_scale = ls.speed_scale;
  d.decomposition_residual = ls.normal_residual;
  d.Y_dN = pot.dN[0].cwiseProduct(ls.Y[0]) + pot.dN[1].cwiseProduct(ls.Y[1]) +
           pot.dN[2].cwiseProduct(ls.Y[2]);
  d.Y_norm = squared_norm(rg, ls.Y).cwiseSqrt();
  return d;
}

RhsTerms evolution_rhs_terms(const VariationData& d) {
  const Field dh = d.Hbar - d.H;
  RhsTerms t;
  t.bulk_A = d.integrate(0.5 * d.N.cwiseProduct(d.a_difference_norm2()).cwiseProduct(d.eta));
  t.bulk_H = -d.integrate(0.5 * d.N.cwiseProduct(dh.cwiseProduct(dh)).cwiseProduct(d.eta));
  t.bulk_R = d.integrate(0.5 * d.N.cwiseProduct(d.R - d.Rbar).cwiseProduct(d.eta));
  t.boundary_f = d.integrate((d.f - d.eta).cwiseProduct(d.dN_dnu).cwiseProduct(dh));
  t.boundary_Y = d.integrate(d.Y_dN.cwiseProduct(dh));
  return t;
}

EvolutionReport evolution_rhs(const family::PhysicalFamily& phys, const family::ReferenceFamily& ref,
                              double t0, double dt, const Tolerances& tol) {
  const auto data = variation_data(phys, ref, t0, dt, tol);
  EvolutionReport r;
  r.t0 = t0;
  r.dt = dt;
  r.rhs_terms = evolution_rhs_terms(data);
  r.rhs = r.rhs_terms.total();
  const auto lhs = energy_derivative_lhs(phys, ref, t0, dt);
  r.lhs = lhs.value;
  r.lhs_central = lhs.base;
  r.richardson_order = lhs.order;
  r.order_measurable = lhs.order_measurable;
  r.residual = std::abs(r.lhs - r.rhs);
  r.iso_residual = data.iso_residual;
  r.normal_leak = data.normal_leak;
  r.decomposition_residual = data.decomposition_residual;
  r.reference_kind = family::to_string(ref.spec().kind);
  return r;
}

namespace {

void require_h_matched(const VariationData& d, const Tolerances& tol) {
  const double gap = max_abs(d.H - d.Hbar);
  require(gap <= tol.mean_curvature * std::max(max_abs(d.Hbar), 1e-300),
          ErrorCode::PreconditionHNotMatched, "max |H - Hbar| = " + fmt(gap));
}

}  // namespace

double chen_zhang_rhs(const VariationData& d, const Tolerances& tol) {
  require_h_matched(d, tol);
  return d.integrate(0.5 * d.N.cwiseProduct(d.a_difference_norm2()).cwiseProduct(d.eta));
}

double lu_miao_rhs(const VariationData& d, const Tolerances& tol) {
  const double y = max_abs(d.Y_norm);
  require(y <= tol.shift * d.speed_scale || y == 0.0, ErrorCode::PreconditionShiftNotZero,
          "max |Y| = " + fmt(y));
  const double dr = max_abs(d.R - d.Rbar);
  require(dr <= tol.scalar_curvature, ErrorCode::PreconditionScalarCurvatureMismatch,
          "max |R - Rbar| = " + fmt(dr));
  const double eta_max = max_abs(d.eta);
  const double eta_min = d.eta.cwiseAbs().minCoeff();
  require(eta_max > 0.0 && eta_min > tol.eta_floor * eta_max, ErrorCode::EtaVanishes,
          "min |eta| = " + fmt(eta_min));
  const Field df = d.f - d.eta;
  const Field bracket = -d.N.cwiseProduct(d.sigma2_bar) - d.Hbar.cwiseProduct(d.dN_dnu);
  return d.integrate(df.cwiseProduct(df).cwiseQuotient(d.eta).cwiseProduct(bracket));
}

double bartnik_rhs(const VariationData& d, const Tolerances& tol) {
  require_h_matched(d, tol);
  return d.integrate(d.N.cwiseProduct(d.a_difference_norm2() + d.R).cwiseProduct(d.eta)) /
         (16.0 * std::numbers::pi);
}

PhysicalVariationResiduals physical_first_variation(const family::PhysicalFamily& phys, double t0,
                                                    double dt) {
  const auto gp = surface::induced_metric(phys.at(t0 + dt));
  const auto gm = surface::induced_metric(phys.at(t0 - dt));
  const auto g0 = surface::extrinsic_geometry(phys.at(t0));
  const Field eta = surface::normal_component(g0, phys.velocity(t0));
  PhysicalVariationResiduals r;
  const double c = 1.0 / (2.0 * dt);
  r.metric = std::max({max_abs(c * (gp.E - gm.E) - 2.0 * eta.cwiseProduct(g0.A_tt)),
                       max_abs(c * (gp.F - gm.F) - 2.0 * eta.cwiseProduct(g0.A_tp)),
                       max_abs(c * (gp.G - gm.G) - 2.0 * eta.cwiseProduct(g0.A_pp))});
  r.area = max_abs(c * (gp.sqrt_det - gm.sqrt_det) -
                   eta.cwiseProduct(g0.H).cwiseProduct(g0.sqrt_det));
  return r;
}

ReferenceVariationResiduals reference_first_variation(const family::ReferenceFamily& ref,
                                                      double t0, double dt) {
  const auto gp = surface::induced_metric(ref.at(t0 + dt));
  const auto gm = surface::induced_metric(ref.at(t0 - dt));
  const auto g0 = surface::extrinsic_geometry(ref.at(t0));
  const auto ls = lapse_shift(ref, t0, dt);
  const auto lie = surface::lie_derivative_metric(g0, ls.Y);
  const Field div = surface::divergence(g0, ls.Y);
  ReferenceVariationResiduals r;
  const double c = 1.0 / (2.0 * dt);
  r.metric = std::max({max_abs(c * (gp.E - gm.E) - 2.0 * ls.f.cwiseProduct(g0.A_tt) - lie[0]),
                       max_abs(c * (gp.F - gm.F) - 2.0 * ls.f.cwiseProduct(g0.A_tp) - lie[1]),
                       max_abs(c * (gp.G - gm.G) - 2.0 * ls.f.cwiseProduct(g0.A_pp) - lie[2])});
  r.area = max_abs(c * (gp.sqrt_det - gm.sqrt_det) -
                   (ls.f.cwiseProduct(g0.H) + div).cwiseProduct(g0.sqrt_det));
  return r;
}

FirstVariationResiduals first_variation_checks(const family::PhysicalFamily& phys,
                                               const family::ReferenceFamily& ref, double t0,
                                               double dt) {
  FirstVariationResiduals r;
  r.physical = physical_first_variation(phys, t0, dt);
  r.reference = reference_first_variation(ref, t0, dt);
  const auto pg = surface::extrinsic_geometry(phys.at(t0));
  const auto rg = surface::extrinsic_geometry(ref.at(t0));
  const Field eta = surface::normal_component(pg, phys.velocity(t0));
  const auto ls = lapse_shift(ref, t0, dt);
  const Field div = surface::divergence(rg, ls.Y);
  r.mean_curvature_link = max_abs(eta.cwiseProduct(pg.H) - ls.f.cwiseProduct(rg.H) - div);
  return r;
}

}  // namespace qlvar::variation
