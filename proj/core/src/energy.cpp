#include "qlvar/energy.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qlvar/error.hpp"

namespace qlvar::energy {

namespace {

constexpr double kPi = std::numbers::pi;

void check_iso(const SurfacePair& pair, double tol_iso) {
  if (pair.iso_residual > tol_iso) {
    std::ostringstream os;
    os << "reference metric differs from physical by " << pair.iso_residual << " > " << tol_iso;
    fail(ErrorCode::IsometryViolation, os.str());
  }
}

}  // namespace

SurfacePair SurfacePair::build(const surface::ParamSurface& physical,
                               const surface::ParamSurface& reference,
                               const ambient::StaticSpace& reference_space) {
  SurfacePair p{surface::extrinsic_geometry(physical), surface::extrinsic_geometry(reference),
                reference_space, {}, 0.0};
  p.potential = surface::potential_on(p.reference, reference_space);
  p.iso_residual = surface::metric_mismatch(p.physical, p.reference);
  return p;
}

double wang_yau_static_energy(const SurfacePair& pair, double tol_iso) {
  check_iso(pair, tol_iso);
  const Field integrand = pair.potential.N.cwiseProduct(pair.reference.H - pair.physical.H);
  return surface::integrate(pair.physical, integrand) / (8.0 * kPi);
}

double brown_york(const SurfacePair& pair, double tol_iso) {
  if (pair.reference_space.mass != 0.0)
    fail(ErrorCode::InvalidArgument, "Brown-York energy needs a flat reference");
  return wang_yau_static_energy(pair, tol_iso);
}

PenroseReport penrose_functional(const SurfacePair& pair, double horizon_area, double tol_eq) {
  if (!(pair.reference_space.mass > 0.0))
    fail(ErrorCode::InvalidArgument, "Penrose functional needs a reference mass m > 0");
  if (!(horizon_area > 0.0)) fail(ErrorCode::InvalidArgument, "horizon area must be positive");
  PenroseReport r;
  r.m = pair.reference_space.mass;
  const Field diff = pair.reference.H - pair.physical.H;
  r.energy_term =
      surface::integrate(pair.physical, pair.potential.N.cwiseProduct(diff)) / (8.0 * kPi);
  r.horizon_term = std::sqrt(horizon_area / (16.0 * kPi));
  r.gap = r.m + r.energy_term - r.horizon_term;
  const double h_scale = pair.reference.H.cwiseAbs().maxCoeff();
  r.mean_curvature_equal = diff.cwiseAbs().maxCoeff() <= tol_eq * h_scale;
  r.horizon_equal = std::abs(r.horizon_term - r.m) <= tol_eq * r.m;
  r.equality = r.mean_curvature_equal && r.horizon_equal;
  return r;
}

HypothesisReport hypothesis_check(const surface::SurfaceGeometry& geom) {
  if (!geom.has_extrinsic)
    fail(ErrorCode::InvalidArgument, "hypothesis check needs extrinsic geometry");
  HypothesisReport r;
  r.ric_nu_nu_max = geom.ric_nu_nu.maxCoeff();
  r.convexity_min_eigenvalue = surface::principal_curvatures(geom).k_min.minCoeff();
  r.H_positive = geom.H.minCoeff() > 0.0;
  return r;
}

}  // namespace qlvar::energy
