#pragma once

#include <array>

#include <Eigen/Dense>

namespace qlvar {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

}  // namespace qlvar

namespace qlvar::ambient {

/// Spatial Schwarzschild slice of mass `mass` (flat space when mass == 0),
/// g = (1-2m/r)^-1 dr^2 + r^2 (dpsi^2 + sin^2 psi dphi^2), with static
/// potential N = sqrt(1-2m/r).
///
/// `horizon_margin` is the extra clearance surfaces built by the embedding
/// solver must keep from r = 2m; pointwise evaluation only needs r > 2m.
struct StaticSpace {
  double mass = 0.0;
  double horizon_margin = 0.0;

  explicit StaticSpace(double m = 0.0);
  StaticSpace(double m, double margin);

  [[nodiscard]] double r_min() const { return 2.0 * mass; }
  /// s(r) = sqrt(1 - 2m/r), evaluated as sqrt((r-2m)/r).
  [[nodiscard]] double lapse(double r) const;
};

/// Point in Schwarzschild curvature coordinates (r, psi, phi).
struct AmbientPoint {
  double r = 0.0;
  double psi = 0.0;
  double phi = 0.0;
};

[[nodiscard]] Vec3 to_cartesian(const AmbientPoint& p);
[[nodiscard]] AmbientPoint to_spherical(const Vec3& x);

/// Metric together with its first and second coordinate derivatives at a
/// point: dg[k](i,j) = d_k g_ij and ddg[k][l](i,j) = d_k d_l g_ij.
struct MetricJet {
  Mat3 g = Mat3::Identity();
  std::array<Mat3, 3> dg{Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};
  std::array<std::array<Mat3, 3>, 3> ddg{};
};

/// Levi-Civita data assembled from a MetricJet. gamma[k](i,j) = Gamma^k_ij.
struct AmbientGeometryAt {
  Mat3 metric;
  Mat3 inverse;
  std::array<Mat3, 3> christoffel;
  Mat3 ricci;
  double scalar = 0.0;
};

[[nodiscard]] AmbientGeometryAt assemble_curvature(const MetricJet& jet);

/// Closed-form jet of the Schwarzschild metric in (r, psi, phi).
[[nodiscard]] MetricJet spherical_jet(const StaticSpace& space, const AmbientPoint& p);

/// Metric only, (r, psi, phi) ordering.
[[nodiscard]] AmbientGeometryAt metric_at(const StaticSpace& space, const AmbientPoint& p);
/// Christoffels from analytic derivatives, Ricci and scalar assembled from them.
[[nodiscard]] AmbientGeometryAt curvature_at(const StaticSpace& space, const AmbientPoint& p);

struct StaticPotential {
  double value = 0.0;
  Vec3 gradient = Vec3::Zero();     // covector d_i N
  Mat3 hessian = Mat3::Zero();      // covariant Hessian D^2 N
};

[[nodiscard]] StaticPotential static_potential(const StaticSpace& space, const AmbientPoint& p);

/// Max-norm, in the orthonormal frame, of (Lap N) g - D^2 N + N Ric.
[[nodiscard]] double static_equation_residual(const StaticSpace& space, const AmbientPoint& p);

/// omega * d_phi in (r, psi, phi) components.
[[nodiscard]] Vec3 killing_rotation_field(const AmbientPoint& p, double omega);
/// Squared length of a (r, psi, phi) vector under the Schwarzschild metric.
[[nodiscard]] double squared_norm(const StaticSpace& space, const AmbientPoint& p, const Vec3& v);

/// Smooth radial conformal factor
///   u(r) = 1 + a exp(-((r - c_g)/w)^2) + b (r - c_q)^2.
/// The default is u == 1.
struct ConformalFactor {
  double gaussian_amplitude = 0.0;
  double gaussian_center = 0.0;
  double gaussian_width = 1.0;
  double quadratic_coefficient = 0.0;
  double quadratic_center = 0.0;

  [[nodiscard]] bool trivial() const {
    return gaussian_amplitude == 0.0 && quadratic_coefficient == 0.0;
  }
  /// {u, u', u''} at r.
  [[nodiscard]] std::array<double, 3> eval(double r) const;
};

/// Physical 3-metric g = u^4 g_m, with g_m Schwarzschild of mass m (flat for
/// m = 0). With u == 1 this is exactly the StaticSpace.
class AmbientMetric {
 public:
  AmbientMetric() = default;
  AmbientMetric(StaticSpace base, ConformalFactor u = {});  // NOLINT: implicit from StaticSpace

  [[nodiscard]] const StaticSpace& base() const { return base_; }
  [[nodiscard]] const ConformalFactor& conformal() const { return u_; }
  [[nodiscard]] bool is_static() const { return u_.trivial(); }

  /// Jet in the Cartesian-like chart x = r (sin psi cos phi, sin psi sin phi, cos psi),
  /// g_ij = u^4 (delta_ij + kappa n_i n_j), kappa = 2m/(r-2m).
  [[nodiscard]] MetricJet cartesian_jet(const Vec3& x) const;
  [[nodiscard]] AmbientGeometryAt cartesian_curvature(const Vec3& x) const;
  /// Metric only, Cartesian chart.
  [[nodiscard]] Mat3 cartesian_metric(const Vec3& x) const;

  /// Scalar curvature by the conformal law R = u^-5 (R_m u - 8 Lap_m u), R_m = 0.
  [[nodiscard]] double scalar_curvature(double r) const;

 private:
  StaticSpace base_{};
  ConformalFactor u_{};
};

/// Static potential N and its Cartesian gradient covector; requires r > 2m.
struct PotentialSample {
  double value = 1.0;
  Vec3 gradient = Vec3::Zero();
};
[[nodiscard]] PotentialSample cartesian_potential(const StaticSpace& space, const Vec3& x);

/// Unit-speed rotation generator about `axis` (Cartesian components).
[[nodiscard]] Vec3 cartesian_rotation_field(const Vec3& x, const Vec3& axis, double omega);

}  // namespace qlvar::ambient
