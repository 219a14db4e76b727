#pragma once

#include <string>

#include "qlvar/family.hpp"
#include "qlvar/surface.hpp"

namespace qlvar::variation {

using surface::VectorField;

/// Thresholds for the preconditions of the specialised formulas and for the
/// consistency checks made while assembling variation data. Scaled checks
/// multiply by the natural size of the compared quantity.
struct Tolerances {
  double iso = 1e-8;           // metric compatibility, absolute
  double mean_curvature = 1e-8;  // |H - Hbar| relative to max |Hbar|
  double shift = 1e-8;         // |Y| relative to max |dFbar/dt|
  double scalar_curvature = 1e-8;  // |R - Rbar|, absolute
  double eta_floor = 1e-8;     // min |eta| relative to max |eta|
  double normal_motion = 1e-8;  // tangential part of dF/dt relative to max |eta|
  double decomposition = 1e-10;  // |g(Y, nu)| relative to max |dFbar/dt|
};

struct LapseShift {
  Field f;
  VectorField Y;
  double normal_residual = 0.0;  // max |gbar(Y, nubar)|
  double speed_scale = 0.0;      // max |dFbar/dt|
};

/// dFbar/dt by Richardson-extrapolated central differences, split into lapse
/// f = gbar(V, nubar) and tangential shift Y = V - f nubar.
[[nodiscard]] LapseShift lapse_shift(const family::ReferenceFamily& ref, double t, double dt,
                                     const Tolerances& tol = {});

[[nodiscard]] double iso_compat_residual(const family::PhysicalFamily& phys,
                                         const family::ReferenceFamily& ref, double t);

/// Q(t) = integral of N (Hbar - H) over the physical surface at time t.
[[nodiscard]] double quasi_local_integral(const family::PhysicalFamily& phys,
                                          const family::ReferenceFamily& ref, double t);

struct DerivativeEstimate {
  double value = 0.0;  // Richardson (4 D(h) - D(2h)) / 3
  double base = 0.0;   // central difference D(h)
  double at_2h = 0.0;
  double at_half = 0.0;
  double order = 0.0;
  bool order_measurable = false;
  double dt = 0.0;
};

/// dQ/dt at t0. Raises StepTooLarge when the observed order of the central
/// differences is measurable and below 1.5.
[[nodiscard]] DerivativeEstimate energy_derivative_lhs(const family::PhysicalFamily& phys,
                                                       const family::ReferenceFamily& ref,
                                                       double t0, double dt);

/// Per-node fields entering the right-hand sides at one instant. Formula
/// evaluations are pure functions of this data.
struct VariationData {
  SphereGrid grid{2, 2};
  Field dsigma;
  Field inv_tt, inv_tp, inv_pp;
  Field A_tt, A_tp, A_pp;           // physical
  Field Abar_tt, Abar_tp, Abar_pp;  // reference
  Field H, Hbar;
  Field R, Rbar;
  Field N, dN_dnu;
  Field eta, f;
  Field Y_dN;     // dN(Y)
  Field Y_norm;   // |Y| under the reference metric
  Field sigma2_bar;
  double iso_residual = 0.0;
  double normal_leak = 0.0;
  double speed_scale = 0.0;
  double decomposition_residual = 0.0;

  /// |A - Abar|^2 with indices raised by the (common) induced metric.
  [[nodiscard]] Field a_difference_norm2() const;
  [[nodiscard]] double integrate(const Field& field) const {
    return field.cwiseProduct(dsigma).sum();
  }
};

[[nodiscard]] VariationData variation_data(const family::PhysicalFamily& phys,
                                           const family::ReferenceFamily& ref, double t0,
                                           double dt, const Tolerances& tol = {});

struct RhsTerms {
  double bulk_A = 0.0;
  double bulk_H = 0.0;
  double bulk_R = 0.0;
  double boundary_f = 0.0;
  double boundary_Y = 0.0;

  [[nodiscard]] double total() const { return bulk_A + bulk_H + bulk_R + boundary_f + boundary_Y; }
};

[[nodiscard]] RhsTerms evolution_rhs_terms(const VariationData& d);

struct EvolutionReport {
  double t0 = 0.0;
  double dt = 0.0;
  double lhs = 0.0;
  double lhs_central = 0.0;
  double rhs = 0.0;
  RhsTerms rhs_terms;
  double residual = 0.0;
  double richardson_order = 0.0;
  bool order_measurable = false;
  double iso_residual = 0.0;
  double normal_leak = 0.0;
  double decomposition_residual = 0.0;
  std::string reference_kind;
  std::string embedding_branch = "convex, equator-anchored";
};

[[nodiscard]] EvolutionReport evolution_rhs(const family::PhysicalFamily& phys,
                                            const family::ReferenceFamily& ref, double t0,
                                            double dt, const Tolerances& tol = {});

/// 1/2 integral N |A - Abar|^2 eta; requires H = Hbar.
[[nodiscard]] double chen_zhang_rhs(const VariationData& d, const Tolerances& tol = {});
/// integral eta^-1 (f - eta)^2 (-N sigma2bar - Hbar dN/dnu); requires Y = 0,
/// R = Rbar and eta bounded away from zero.
[[nodiscard]] double lu_miao_rhs(const VariationData& d, const Tolerances& tol = {});
/// (1/16 pi) integral N (|A - Abar|^2 + R) eta; requires H = Hbar.
[[nodiscard]] double bartnik_rhs(const VariationData& d, const Tolerances& tol = {});

/// Max-norm residuals of the evolution equations, left sides by central
/// differences with step dt.
struct PhysicalVariationResiduals {
  double metric = 0.0;  // gamma' - 2 eta A
  double area = 0.0;    // (sqrt det gamma)' - eta H sqrt det gamma
};
struct ReferenceVariationResiduals {
  double metric = 0.0;  // gamma' - 2 f Abar - L_Y gamma
  double area = 0.0;    // (sqrt det gamma)' - (f Hbar + div Y) sqrt det gamma
};
struct FirstVariationResiduals {
  PhysicalVariationResiduals physical;
  ReferenceVariationResiduals reference;
  double mean_curvature_link = 0.0;  // eta H - f Hbar - div Y
};

[[nodiscard]] PhysicalVariationResiduals physical_first_variation(
    const family::PhysicalFamily& phys, double t0, double dt);
[[nodiscard]] ReferenceVariationResiduals reference_first_variation(
    const family::ReferenceFamily& ref, double t0, double dt);
[[nodiscard]] FirstVariationResiduals first_variation_checks(const family::PhysicalFamily& phys,
                                                             const family::ReferenceFamily& ref,
                                                             double t0, double dt);

}  // namespace qlvar::variation
