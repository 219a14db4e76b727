#include "qlvar/ambient.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qlvar/error.hpp"

namespace qlvar::ambient {

namespace {

void require_outside_horizon(const StaticSpace& space, double r) {
  if (!(r > space.r_min()) || !(r > 0.0)) {
    std::ostringstream os;
    os << "r = " << r << " is not outside the horizon r = " << space.r_min();
    fail(ErrorCode::PointInsideHorizon, os.str());
  }
}

void require_chart(const AmbientPoint& p) {
  if (!(p.psi > 0.0 && p.psi < std::numbers::pi) || std::sin(p.psi) == 0.0)
    fail(ErrorCode::PoleEvaluation, "polar angle must lie strictly inside (0, pi)");
}

}  // namespace

StaticSpace::StaticSpace(double m) : StaticSpace(m, 1e-6 * m) {}

StaticSpace::StaticSpace(double m, double margin) : mass(m), horizon_margin(margin) {
  if (!(m >= 0.0)) fail(ErrorCode::InvalidArgument, "mass must be nonnegative");
  if (!(margin >= 0.0)) fail(ErrorCode::InvalidArgument, "horizon margin must be nonnegative");
}

double StaticSpace::lapse(double r) const { return std::sqrt((r - 2.0 * mass) / r); }

Vec3 to_cartesian(const AmbientPoint& p) {
  const double sp = std::sin(p.psi);
  return {p.r * sp * std::cos(p.phi), p.r * sp * std::sin(p.phi), p.r * std::cos(p.psi)};
}

AmbientPoint to_spherical(const Vec3& x) {
  const double r = x.norm();
  const double rho = std::hypot(x.x(), x.y());
  double phi = std::atan2(x.y(), x.x());
  if (phi < 0.0) phi += 2.0 * std::numbers::pi;
  return {r, std::atan2(rho, x.z()), phi};
}

AmbientGeometryAt assemble_curvature(const MetricJet& jet) {
  AmbientGeometryAt out;
  out.metric = jet.g;
  out.inverse = jet.g.inverse();
  const Mat3& gi = out.inverse;

  // T[l](i,j) = d_i g_jl + d_j g_il - d_l g_ij
  std::array<Mat3, 3> t;
  for (int l = 0; l < 3; ++l)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        t[l](i, j) = jet.dg[i](j, l) + jet.dg[j](i, l) - jet.dg[l](i, j);

  for (int k = 0; k < 3; ++k) {
    out.christoffel[k].setZero();
    for (int l = 0; l < 3; ++l) out.christoffel[k] += 0.5 * gi(k, l) * t[l];
  }

  // dgamma[m][k](i,j) = d_m Gamma^k_ij
  std::array<std::array<Mat3, 3>, 3> dgamma;
  for (int m = 0; m < 3; ++m) {
    const Mat3 dgi = -gi * jet.dg[m] * gi;
    std::array<Mat3, 3> dt;
    for (int l = 0; l < 3; ++l)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          dt[l](i, j) = jet.ddg[m][i](j, l) + jet.ddg[m][j](i, l) - jet.ddg[m][l](i, j);
    for (int k = 0; k < 3; ++k) {
      dgamma[m][k].setZero();
      for (int l = 0; l < 3; ++l) dgamma[m][k] += 0.5 * (dgi(k, l) * t[l] + gi(k, l) * dt[l]);
    }
  }

  const auto& gam = out.christoffel;
  out.ricci.setZero();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double r = 0.0;
      for (int k = 0; k < 3; ++k) {
        r += dgamma[k][k](i, j) - dgamma[j][k](i, k);
        for (int l = 0; l < 3; ++l)
          r += gam[k](k, l) * gam[l](i, j) - gam[k](j, l) * gam[l](i, k);
      }
      out.ricci(i, j) = r;
    }
  }
  out.ricci = 0.5 * (out.ricci + out.ricci.transpose()).eval();
  out.scalar = (gi.cwiseProduct(out.ricci)).sum();
  return out;
}

MetricJet spherical_jet(const StaticSpace& space, const AmbientPoint& p) {
  require_outside_horizon(space, p.r);
  require_chart(p);
  const double m = space.mass;
  const double r = p.r;
  const double dr = r - 2.0 * m;
  const double a = r / dr;
  const double a1 = -2.0 * m / (dr * dr);
  const double a2 = 4.0 * m / (dr * dr * dr);
  const double sp = std::sin(p.psi);
  const double s2 = sp * sp;
  const double sin2 = std::sin(2.0 * p.psi);
  const double cos2 = std::cos(2.0 * p.psi);

  MetricJet jet;
  jet.g = Vec3(a, r * r, r * r * s2).asDiagonal();
  jet.dg[0] = Vec3(a1, 2.0 * r, 2.0 * r * s2).asDiagonal();
  jet.dg[1] = Vec3(0.0, 0.0, r * r * sin2).asDiagonal();
  jet.dg[2].setZero();
  for (auto& row : jet.ddg)
    for (auto& mat : row) mat.setZero();
  jet.ddg[0][0] = Vec3(a2, 2.0, 2.0 * s2).asDiagonal();
  jet.ddg[0][1] = Vec3(0.0, 0.0, 2.0 * r * sin2).asDiagonal();
  jet.ddg[1][0] = jet.ddg[0][1];
  jet.ddg[1][1] = Vec3(0.0, 0.0, 2.0 * r * r * cos2).asDiagonal();
  return jet;
}

AmbientGeometryAt metric_at(const StaticSpace& space, const AmbientPoint& p) {
  require_outside_horizon(space, p.r);
  require_chart(p);
  AmbientGeometryAt out;
  const double sp = std::sin(p.psi);
  out.metric = Vec3(p.r / (p.r - 2.0 * space.mass), p.r * p.r, p.r * p.r * sp * sp).asDiagonal();
  out.inverse = out.metric.inverse();
  for (auto& c : out.christoffel) c.setZero();
  out.ricci.setZero();
  return out;
}

AmbientGeometryAt curvature_at(const StaticSpace& space, const AmbientPoint& p) {
  return assemble_curvature(spherical_jet(space, p));
}

StaticPotential static_potential(const StaticSpace& space, const AmbientPoint& p) {
  require_outside_horizon(space, p.r);
  require_chart(p);
  const double m = space.mass;
  const double r = p.r;
  const double s = space.lapse(r);
  StaticPotential out;
  out.value = s;
  const double n1 = m / (r * r * s);
  const double n2 = -2.0 * m / (r * r * r * s) - m * m / (r * r * r * r * s * s * s);
  out.gradient = Vec3(n1, 0.0, 0.0);
  const auto geo = curvature_at(space, p);
  Mat3 second = Mat3::Zero();
  second(0, 0) = n2;
  out.hessian = second - n1 * geo.christoffel[0];
  return out;
}

double static_equation_residual(const StaticSpace& space, const AmbientPoint& p) {
  const auto geo = curvature_at(space, p);
  const auto pot = static_potential(space, p);
  const double lap = (geo.inverse.cwiseProduct(pot.hessian)).sum();
  const Mat3 res = lap * geo.metric - pot.hessian + pot.value * geo.ricci;
  // diagonal metric: orthonormal frame scaling
  const Vec3 scale = geo.metric.diagonal().cwiseSqrt().cwiseInverse();
  const Mat3 hat = scale.asDiagonal() * res * scale.asDiagonal();
  return hat.cwiseAbs().maxCoeff();
}

Vec3 killing_rotation_field(const AmbientPoint&, double omega) { return {0.0, 0.0, omega}; }

double squared_norm(const StaticSpace& space, const AmbientPoint& p, const Vec3& v) {
  const auto geo = metric_at(space, p);
  return v.dot(geo.metric * v);
}

std::array<double, 3> ConformalFactor::eval(double r) const {
  double u = 1.0;
  double u1 = 0.0;
  double u2 = 0.0;
  if (gaussian_amplitude != 0.0) {
    const double z = (r - gaussian_center) / gaussian_width;
    const double e = gaussian_amplitude * std::exp(-z * z);
    const double w2 = gaussian_width * gaussian_width;
    u += e;
    u1 += -2.0 * z / gaussian_width * e;
    u2 += (4.0 * z * z - 2.0) / w2 * e;
  }
  if (quadratic_coefficient != 0.0) {
    const double d = r - quadratic_center;
    u += quadratic_coefficient * d * d;
    u1 += 2.0 * quadratic_coefficient * d;
    u2 += 2.0 * quadratic_coefficient;
  }
  return {u, u1, u2};
}

AmbientMetric::AmbientMetric(StaticSpace base, ConformalFactor u) : base_(base), u_(u) {}

MetricJet AmbientMetric::cartesian_jet(const Vec3& x) const {
  const double r = x.norm();
  require_outside_horizon(base_, r);
  const double m = base_.mass;
  const Vec3 n = x / r;
  const Mat3 q = n * n.transpose();
  const Mat3 proj = Mat3::Identity() - q;

  const auto [u, u1, u2] = u_.eval(r);
  const double u3 = u * u * u;
  const double phi0 = u3 * u;
  const double phi1 = 4.0 * u3 * u1;
  const double phi2 = 12.0 * u * u * u1 * u1 + 4.0 * u3 * u2;
  const double dr = r - 2.0 * m;
  const double k0 = 2.0 * m / dr;
  const double k1 = -2.0 * m / (dr * dr);
  const double k2 = 4.0 * m / (dr * dr * dr);
  const double psi0 = phi0 * k0;
  const double psi1 = phi1 * k0 + phi0 * k1;
  const double psi2 = phi2 * k0 + 2.0 * phi1 * k1 + phi0 * k2;

  // dq[k](i,j) = d_k (n_i n_j)
  std::array<Mat3, 3> dq;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        dq[k](i, j) = (proj(i, k) * n(j) + proj(j, k) * n(i)) / r;

  MetricJet jet;
  jet.g = phi0 * Mat3::Identity() + psi0 * q;
  for (int k = 0; k < 3; ++k)
    jet.dg[k] = phi1 * n(k) * Mat3::Identity() + psi1 * n(k) * q + psi0 * dq[k];

  const double r2 = r * r;
  for (int k = 0; k < 3; ++k) {
    for (int l = 0; l < 3; ++l) {
      Mat3 ddq;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          const double tkij = proj(i, k) * n(j) + proj(j, k) * n(i);
          ddq(i, j) = (-(proj(i, l) * n(k) + proj(k, l) * n(i)) * n(j) + proj(i, k) * proj(j, l) -
                       (proj(j, l) * n(k) + proj(k, l) * n(j)) * n(i) + proj(j, k) * proj(i, l) -
                       tkij * n(l)) /
                      r2;
        }
      }
      jet.ddg[k][l] = (phi2 * n(l) * n(k) + phi1 * proj(k, l) / r) * Mat3::Identity() +
                      (psi2 * n(l) * n(k) + psi1 * proj(k, l) / r) * q +
                      psi1 * (n(k) * dq[l] + n(l) * dq[k]) + psi0 * ddq;
    }
  }
  return jet;
}

AmbientGeometryAt AmbientMetric::cartesian_curvature(const Vec3& x) const {
  return assemble_curvature(cartesian_jet(x));
}

Mat3 AmbientMetric::cartesian_metric(const Vec3& x) const {
  const double r = x.norm();
  require_outside_horizon(base_, r);
  const Vec3 n = x / r;
  const double u = u_.eval(r)[0];
  const double u4 = u * u * u * u;
  const double kappa = 2.0 * base_.mass / (r - 2.0 * base_.mass);
  return u4 * (Mat3::Identity() + kappa * n * n.transpose());
}

double AmbientMetric::scalar_curvature(double r) const {
  require_outside_horizon(base_, r);
  if (u_.trivial()) return 0.0;
  const double m = base_.mass;
  const auto [u, u1, u2] = u_.eval(r);
  const double s2 = (r - 2.0 * m) / r;
  const double lap = s2 * u2 + (2.0 * s2 / r + m / (r * r)) * u1;
  return -8.0 * lap / std::pow(u, 5);
}

PotentialSample cartesian_potential(const StaticSpace& space, const Vec3& x) {
  const double r = x.norm();
  require_outside_horizon(space, r);
  const double s = space.lapse(r);
  PotentialSample out;
  out.value = s;
  out.gradient = (space.mass / (r * r * s)) * (x / r);
  return out;
}

Vec3 cartesian_rotation_field(const Vec3& x, const Vec3& axis, double omega) {
  return omega * axis.normalized().cross(x);
}

}  // namespace qlvar::ambient
