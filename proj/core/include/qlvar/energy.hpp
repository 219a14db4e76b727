#pragma once

#include "qlvar/ambient.hpp"
#include "qlvar/surface.hpp"

namespace qlvar::energy {

/// A physical surface and its isometric image in a static space.
struct SurfacePair {
  surface::SurfaceGeometry physical;
  surface::SurfaceGeometry reference;
  ambient::StaticSpace reference_space;
  surface::PotentialFields potential;  // static potential on the reference surface
  double iso_residual = 0.0;

  static SurfacePair build(const surface::ParamSurface& physical,
                           const surface::ParamSurface& reference,
                           const ambient::StaticSpace& reference_space);
};

/// (1/8 pi) integral N (Hbar - H) dsigma.
[[nodiscard]] double wang_yau_static_energy(const SurfacePair& pair, double tol_iso = 1e-8);
/// The same with a flat reference (N == 1).
[[nodiscard]] double brown_york(const SurfacePair& pair, double tol_iso = 1e-8);

struct PenroseReport {
  double m = 0.0;
  double energy_term = 0.0;   // (1/8 pi) integral N (H_m - H)
  double horizon_term = 0.0;  // sqrt(|Sigma_H| / 16 pi)
  double gap = 0.0;           // m + energy_term - horizon_term
  bool mean_curvature_equal = false;  // H == H_m within tolerance
  bool horizon_equal = false;         // horizon_term == m within tolerance
  bool equality = false;
  /// "No other closed minimal surfaces in the interior" cannot be checked
  /// from surface data and is never verified.
  bool no_interior_minimal_surfaces_verified = false;
};

/// Localised Penrose functional against the reference (mass m > 0) surface.
/// `tol_eq` is relative to max |H_m|.
[[nodiscard]] PenroseReport penrose_functional(const SurfacePair& pair, double horizon_area,
                                               double tol_eq = 1e-8);

struct HypothesisReport {
  double ric_nu_nu_max = 0.0;
  double convexity_min_eigenvalue = 0.0;
  bool H_positive = false;

  [[nodiscard]] bool satisfied() const {
    return ric_nu_nu_max <= 0.0 && convexity_min_eigenvalue > 0.0 && H_positive;
  }
};

[[nodiscard]] HypothesisReport hypothesis_check(const surface::SurfaceGeometry& geom);

}  // namespace qlvar::energy
