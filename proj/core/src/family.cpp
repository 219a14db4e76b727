#include "qlvar/family.hpp"

#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "qlvar/error.hpp"

namespace qlvar::family {

namespace odeint = boost::numeric::odeint;

bool GraphSpec::spherical() const {
  for (std::size_t k = 1; k < cos_powers.size(); ++k)
    if (cos_powers[k] != 0.0) return false;
  return true;
}

double GraphSpec::rho(double theta, double t) const {
  const double c = std::cos(theta);
  double v = r0 + speed * t;
  double p = 1.0;
  for (double a : cos_powers) {
    v += a * p;
    p *= c;
  }
  return v;
}

double GraphSpec::rho_theta(double theta) const {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  double v = 0.0;
  double p = 1.0;  // cos^(k-1)
  for (std::size_t k = 1; k < cos_powers.size(); ++k) {
    v += -double(k) * cos_powers[k] * p * s;
    p *= c;
  }
  return v;
}

PhysicalFamily::PhysicalFamily(ambient::AmbientMetric metric, GraphSpec spec, SphereGrid grid,
                               double label_time)
    : metric_(metric), spec_(std::move(spec)), grid_(std::move(grid)), label_time_(label_time) {}

double PhysicalFamily::label_speed(double theta, double t) const {
  const double rho = spec_.rho(theta, t);
  const double rt = spec_.rho_theta(theta);
  const double s2 = (rho - 2.0 * metric_.base().mass) / rho;
  return -spec_.rho_t() * rt / (rt * rt + s2 * rho * rho);
}

Eigen::VectorXd PhysicalFamily::labels(double t) const {
  Eigen::VectorXd out = grid_.theta_nodes();
  if (t == label_time_ || spec_.spherical() || spec_.speed == 0.0) return out;
  using State = std::vector<double>;
  State y(out.data(), out.data() + out.size());
  auto rhs = [this](const State& x, State& dxdt, double time) {
    for (std::size_t i = 0; i < x.size(); ++i) dxdt[i] = label_speed(x[i], time);
  };
  const double span = t - label_time_;
  odeint::integrate_adaptive(
      odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(1e-14, 1e-14), rhs, y,
      label_time_, t, span / 16.0);
  for (int i = 0; i < out.size(); ++i) out[i] = y[std::size_t(i)];
  return out;
}

surface::ParamSurface PhysicalFamily::at(double t) const {
  const Eigen::VectorXd th = labels(t);
  surface::VectorField pos{grid_.zeros(), grid_.zeros(), grid_.zeros()};
  for (int i = 0; i < grid_.n_theta(); ++i) {
    const double rho = spec_.rho(th[i], t);
    for (int j = 0; j < grid_.n_phi(); ++j) {
      const Vec3 x = ambient::to_cartesian({rho, th[i], grid_.phi(j)});
      for (int k = 0; k < 3; ++k) pos[k](i, j) = x[k];
    }
  }
  return {grid_, pos, metric_};
}

surface::VectorField PhysicalFamily::velocity(double t) const {
  const Eigen::VectorXd th = labels(t);
  surface::VectorField v{grid_.zeros(), grid_.zeros(), grid_.zeros()};
  for (int i = 0; i < grid_.n_theta(); ++i) {
    const double rho = spec_.rho(th[i], t);
    const double dth = spec_.spherical() ? 0.0 : label_speed(th[i], t);
    const double radial = spec_.rho_t() + spec_.rho_theta(th[i]) * dth;
    const double ct = std::cos(th[i]);
    const double st = std::sin(th[i]);
    for (int j = 0; j < grid_.n_phi(); ++j) {
      const double cp = std::cos(grid_.phi(j));
      const double sp = std::sin(grid_.phi(j));
      const Vec3 n(st * cp, st * sp, ct);
      const Vec3 e(ct * cp, ct * sp, -st);
      const Vec3 w = radial * n + rho * dth * e;
      for (int k = 0; k < 3; ++k) v[k](i, j) = w[k];
    }
  }
  return v;
}

std::string to_string(ReferenceKind kind) {
  switch (kind) {
    case ReferenceKind::MatchedSphere: return "matched-sphere";
    case ReferenceKind::Embedded: return "embed";
    case ReferenceKind::Identical: return "identical";
    case ReferenceKind::Static: return "static-sphere";
  }
  return "unknown";
}

Mat3 rotation_matrix(const Vec3& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

ReferenceFamily::ReferenceFamily(std::shared_ptr<const PhysicalFamily> physical, ReferenceSpec spec)
    : physical_(std::move(physical)), spec_(std::move(spec)), space_(spec_.mass) {
  if (!physical_) fail(ErrorCode::InvalidArgument, "reference family needs a physical family");
  switch (spec_.kind) {
    case ReferenceKind::MatchedSphere:
      if (!physical_->spec().spherical())
        fail(ErrorCode::InvalidArgument,
             "matched-sphere reference needs a spherical physical family");
      break;
    case ReferenceKind::Identical:
      if (!physical_->metric().is_static() || physical_->metric().base().mass != spec_.mass)
        fail(ErrorCode::InvalidArgument,
             "identical reference needs a static physical metric of the reference mass");
      space_ = physical_->metric().base();
      break;
    case ReferenceKind::Embedded:
    case ReferenceKind::Static: break;
  }
}

embedding::EmbeddingResult ReferenceFamily::embed(double t) const {
  const auto geo = surface::induced_metric(physical_->at(t));
  const Eigen::VectorXd e = geo.E.col(0);
  const Eigen::VectorXd g = geo.G.col(0);
  const auto metric = embedding::AxiMetric::from_samples(physical_->grid(), e, g);
  return embedding::embed_axisymmetric(metric, space_, physical_->grid(), spec_.embedding);
}

double ReferenceFamily::embedding_residual(double t) const {
  if (spec_.kind != ReferenceKind::Embedded) return 0.0;
  return embed(t).residual;
}

surface::ParamSurface ReferenceFamily::unrotated(double t) const {
  const auto& grid = physical_->grid();
  const ambient::AmbientMetric metric(space_);
  switch (spec_.kind) {
    case ReferenceKind::MatchedSphere: {
      const double rho = physical_->spec().rho(0.0, t);
      const double u = physical_->metric().conformal().eval(rho)[0];
      return surface::ParamSurface::coordinate_sphere(grid, metric, u * u * rho);
    }
    case ReferenceKind::Embedded:
      return surface::ParamSurface::from_profile(grid, metric, embed(t).profile);
    case ReferenceKind::Identical: {
      const auto s = physical_->at(t);
      return {grid, s.position(), metric};
    }
    case ReferenceKind::Static:
      return surface::ParamSurface::coordinate_sphere(grid, metric, spec_.radius);
  }
  fail(ErrorCode::InvalidArgument, "unknown reference kind");
}

surface::ParamSurface ReferenceFamily::at(double t) const {
  const bool rotating = spec_.omega != 0.0;
  const bool fixed = !spec_.fixed_rotation.isIdentity(0.0);
  const auto base = unrotated(t);
  if (!rotating && !fixed) return base;
  Mat3 r = spec_.fixed_rotation;
  if (rotating) r = rotation_matrix(spec_.axis, spec_.omega * t) * r;
  return base.rotated(r);
}

}  // namespace qlvar::family
