#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <vector>

#include "qlvar/ambient.hpp"
#include "qlvar/grid.hpp"

namespace qlvar::surface {

/// Cartesian components (chart of AmbientMetric::cartesian_jet) of a vector
/// field sampled on the grid.
using VectorField = std::array<Field, 3>;

/// Which side the unit normal points to. Auto picks the side of increasing
/// areal radius and refuses surfaces where that side is not well defined.
enum class Orientation { Auto, Natural, Reversed };

/// Axisymmetric surface of revolution: areal radius and ambient polar angle as
/// functions of the parameter theta, sampled on the grid's theta nodes.
struct AxiProfile {
  Eigen::VectorXd theta;
  Eigen::VectorXd rho;
  Eigen::VectorXd psi_bar;
};

/// Embedded sphere F: S^2 -> (M, g), given by its Cartesian positions on a grid.
class ParamSurface {
 public:
  ParamSurface(SphereGrid grid, VectorField position, ambient::AmbientMetric metric,
               Orientation orientation = Orientation::Auto);

  /// r = radius(theta, phi) at psi = theta.
  static ParamSurface radial_graph(const SphereGrid& grid, const ambient::AmbientMetric& metric,
                                   const std::function<double(double, double)>& radius);
  static ParamSurface coordinate_sphere(const SphereGrid& grid,
                                        const ambient::AmbientMetric& metric, double radius);
  static ParamSurface from_profile(const SphereGrid& grid, const ambient::AmbientMetric& metric,
                                   const AxiProfile& profile);

  [[nodiscard]] const SphereGrid& grid() const { return grid_; }
  [[nodiscard]] const VectorField& position() const { return position_; }
  [[nodiscard]] const ambient::AmbientMetric& metric() const { return metric_; }
  [[nodiscard]] Orientation orientation() const { return orientation_; }
  [[nodiscard]] Vec3 at(int i, int j) const;
  [[nodiscard]] ambient::AmbientPoint point(int i, int j) const;

  /// Image under a fixed rotation of the ambient space (an isometry for the
  /// spherically symmetric metrics used here).
  [[nodiscard]] ParamSurface rotated(const Mat3& rotation) const;

 private:
  SphereGrid grid_;
  VectorField position_;
  ambient::AmbientMetric metric_;
  Orientation orientation_;
};

/// Fundamental forms and derived quantities at every node.
/// Index (theta, phi) pairs as tt, tp, pp.
struct SurfaceGeometry {
  SphereGrid grid{2, 2};
  ambient::AmbientMetric metric;
  VectorField position, x_theta, x_phi;

  Field E, F, G;  // gamma_tt, gamma_tp, gamma_pp
  Field det, sqrt_det, dsigma;
  Field inv_tt, inv_tp, inv_pp;
  Field E_theta, E_phi, F_theta, F_phi, G_theta, G_phi;

  bool has_extrinsic = false;
  VectorField nu;       // unit normal, vector components
  VectorField nu_flat;  // g(nu, .)
  Field A_tt, A_tp, A_pp;
  Field H, A_norm2, sigma2, gauss_curv;
  Field ric_nu_nu, scalar_curv;
  std::vector<ambient::AmbientGeometryAt> ambient;  // row-major over (i, j)

  [[nodiscard]] std::size_t node(int i, int j) const {
    return std::size_t(i) * std::size_t(grid.n_phi()) + std::size_t(j);
  }
  [[nodiscard]] Vec3 vec(const VectorField& v, int i, int j) const {
    return {v[0](i, j), v[1](i, j), v[2](i, j)};
  }
};

[[nodiscard]] SurfaceGeometry induced_metric(const ParamSurface& surface);
[[nodiscard]] SurfaceGeometry extrinsic_geometry(const ParamSurface& surface);

[[nodiscard]] double integrate(const SurfaceGeometry& geom, const Field& f);
/// max over nodes and components of |gamma_a - gamma_b| (same grid required).
[[nodiscard]] double metric_mismatch(const SurfaceGeometry& a, const SurfaceGeometry& b);
[[nodiscard]] double area(const SurfaceGeometry& geom);

/// Tangent vector fields are carried as ambient vectors; these give the
/// parameter components Y^theta, Y^phi and the covariant ones g(Y, X_a).
[[nodiscard]] std::array<Field, 2> tangent_components(const SurfaceGeometry& geom,
                                                      const VectorField& y);
[[nodiscard]] std::array<Field, 2> covariant_components(const SurfaceGeometry& geom,
                                                        const VectorField& y);
/// Normal part g(Y, nu).
[[nodiscard]] Field normal_component(const SurfaceGeometry& geom, const VectorField& y);

[[nodiscard]] VectorField gradient(const SurfaceGeometry& geom, const Field& u);
[[nodiscard]] Field laplacian(const SurfaceGeometry& geom, const Field& u);
/// Intrinsic divergence (1/sqrt g) d_a (sqrt g Y^a) of a tangent field.
[[nodiscard]] Field divergence(const SurfaceGeometry& geom, const VectorField& y);
/// gamma^ab g(Dbar_a Y, X_b): the same divergence from the ambient connection.
[[nodiscard]] Field divergence_ambient(const SurfaceGeometry& geom, const VectorField& y);
/// (L_Y gamma)_ab = g(Dbar_a Y, X_b) + g(X_a, Dbar_b Y), components tt, tp, pp.
[[nodiscard]] std::array<Field, 3> lie_derivative_metric(const SurfaceGeometry& geom,
                                                         const VectorField& y);

/// 2K - (R - 2 Ric(nu, nu) + H^2 - |A|^2) per node.
[[nodiscard]] Field gauss_residual(const SurfaceGeometry& geom);
/// Pointwise (div A - dH)(Y) - Ric(Y, nu).
[[nodiscard]] Field codazzi_defect(const SurfaceGeometry& geom, const VectorField& y);
/// Integral of |codazzi_defect|.
[[nodiscard]] double codazzi_residual(const SurfaceGeometry& geom, const VectorField& y);

struct PrincipalCurvatures {
  Field k_min;
  Field k_max;
};
[[nodiscard]] PrincipalCurvatures principal_curvatures(const SurfaceGeometry& geom);

/// Static potential of `space` restricted to the surface, its derivative
/// along the unit normal and the ambient gradient covector.
struct PotentialFields {
  Field N;
  Field dN_dnu;
  VectorField dN;
};
[[nodiscard]] PotentialFields potential_on(const SurfaceGeometry& geom,
                                           const ambient::StaticSpace& space);

/// One row per node: i, j, theta, phi, gamma, A, H, N.
void write_csv(std::ostream& os, const SurfaceGeometry& geom, const Field* lapse = nullptr);

}  // namespace qlvar::surface
