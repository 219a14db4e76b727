#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qlvar/ambient.hpp"
#include "qlvar/embedding.hpp"
#include "qlvar/surface.hpp"

namespace qlvar::family {

/// rho(theta, t) = r0 + speed t + sum_k cos_powers[k] cos^k(theta).
struct GraphSpec {
  double r0 = 4.0;
  double speed = 1.0;
  std::vector<double> cos_powers;

  [[nodiscard]] bool spherical() const;
  [[nodiscard]] double rho(double theta, double t) const;
  [[nodiscard]] double rho_theta(double theta) const;
  [[nodiscard]] double rho_t() const { return speed; }
};

/// Family of graphs over coordinate spheres in (M, g) moving along their
/// normals. The grid labels follow the orthogonal trajectories of the graphs
/// so that dF/dt = eta nu; labels coincide with theta at t = label_time.
class PhysicalFamily {
 public:
  PhysicalFamily(ambient::AmbientMetric metric, GraphSpec spec, SphereGrid grid,
                 double label_time = 0.0);

  [[nodiscard]] const ambient::AmbientMetric& metric() const { return metric_; }
  [[nodiscard]] const GraphSpec& spec() const { return spec_; }
  [[nodiscard]] const SphereGrid& grid() const { return grid_; }

  /// Polar angle of each theta label at time t.
  [[nodiscard]] Eigen::VectorXd labels(double t) const;
  [[nodiscard]] surface::ParamSurface at(double t) const;
  /// dF/dt in Cartesian components.
  [[nodiscard]] surface::VectorField velocity(double t) const;

 private:
  ambient::AmbientMetric metric_;
  GraphSpec spec_;
  SphereGrid grid_;
  double label_time_;

  [[nodiscard]] double label_speed(double theta, double t) const;
};

enum class ReferenceKind {
  MatchedSphere,  // coordinate sphere of the physical areal radius
  Embedded,       // embed_axisymmetric of the physical induced metric per t
  Identical,      // the physical surfaces themselves (static physical metric)
  Static,         // a fixed coordinate sphere of radius `radius`
};

[[nodiscard]] std::string to_string(ReferenceKind kind);

struct ReferenceSpec {
  ReferenceKind kind = ReferenceKind::MatchedSphere;
  double mass = 0.0;
  double radius = 4.0;  // Static only
  /// Rotation R(omega t) about `axis`, applied after `fixed_rotation`.
  Vec3 axis = Vec3::UnitZ();
  double omega = 0.0;
  Mat3 fixed_rotation = Mat3::Identity();
  embedding::EmbeddingOptions embedding{};
};

/// t -> reference surface in the static space of mass `spec.mass`, with the
/// same grid labelling as the physical family.
class ReferenceFamily {
 public:
  ReferenceFamily(std::shared_ptr<const PhysicalFamily> physical, ReferenceSpec spec);

  [[nodiscard]] const ambient::StaticSpace& space() const { return space_; }
  [[nodiscard]] const ReferenceSpec& spec() const { return spec_; }
  [[nodiscard]] surface::ParamSurface at(double t) const;
  /// Profile residual of the last embedding call (Embedded kind only).
  [[nodiscard]] double embedding_residual(double t) const;

 private:
  std::shared_ptr<const PhysicalFamily> physical_;
  ReferenceSpec spec_;
  ambient::StaticSpace space_;

  [[nodiscard]] surface::ParamSurface unrotated(double t) const;
  [[nodiscard]] embedding::EmbeddingResult embed(double t) const;
};

/// Rotation by `angle` about `axis` (Rodrigues).
[[nodiscard]] Mat3 rotation_matrix(const Vec3& axis, double angle);

}  // namespace qlvar::family
