#pragma once

// Independent reference computations used by the tests. Nothing here calls
// the analytic jets of the library; curvature comes from finite differences
// of closed-form metric samples.

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <type_traits>

#include <Eigen/Dense>

namespace oracle {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

inline constexpr double pi = std::numbers::pi;

inline std::uint64_t seed() {
  if (const char* s = std::getenv("QLVAR_SEED")) return std::stoull(s);
  return 20240611ULL;
}

inline std::mt19937_64 rng(std::uint64_t salt = 0) { return std::mt19937_64(seed() + salt); }

/// Fourth-order central difference.
template <class F>
auto fd4(F&& f, double x, double h) -> std::decay_t<decltype(f(x))> {
  return (-f(x + 2 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2 * h)) / (12.0 * h);
}

/// Schwarzschild metric in (r, psi, phi), written out independently.
inline Mat3 schwarzschild_metric(double m, const Vec3& q) {
  const double r = q[0];
  const double s = std::sin(q[1]);
  Mat3 g = Mat3::Zero();
  g(0, 0) = 1.0 / (1.0 - 2.0 * m / r);
  g(1, 1) = r * r;
  g(2, 2) = r * r * s * s;
  return g;
}

using MetricFn = std::function<Mat3(const Vec3&)>;

inline MetricFn schwarzschild(double m) {
  return [m](const Vec3& q) { return schwarzschild_metric(m, q); };
}

/// u(r)^4 (delta + 2m/(r-2m) n n) in Cartesian coordinates, u given as a callable.
inline MetricFn conformal_cartesian(double m, std::function<double(double)> u) {
  return [m, u](const Vec3& x) {
    const double r = x.norm();
    const Vec3 n = x / r;
    const double v = u(r);
    return Mat3(std::pow(v, 4) * (Mat3::Identity() + 2.0 * m / (r - 2.0 * m) * n * n.transpose()));
  };
}

/// d_k g_ij by fourth-order differences; index order [k](i, j).
inline std::array<Mat3, 3> fd_metric_derivative(const MetricFn& metric, const Vec3& q, double h) {
  std::array<Mat3, 3> dg;
  for (int k = 0; k < 3; ++k) {
    auto g = [&](double x) {
      Vec3 p = q;
      p[k] = x;
      return Mat3(metric(p));
    };
    dg[k] = fd4(g, q[k], h);
  }
  return dg;
}

/// Gamma^k_ij from finite-difference metric derivatives.
inline std::array<Mat3, 3> fd_christoffel(const MetricFn& metric, const Vec3& q, double h) {
  const Mat3 gi = metric(q).inverse();
  const auto dg = fd_metric_derivative(metric, q, h);
  std::array<Mat3, 3> gam;
  for (int k = 0; k < 3; ++k) {
    gam[k].setZero();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l)
          gam[k](i, j) += 0.5 * gi(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
  }
  return gam;
}

/// Ricci tensor by nested finite differences of the Christoffel symbols.
inline Mat3 fd_ricci(const MetricFn& metric, const Vec3& q, double h_outer = 2e-3,
                     double h_inner = 1e-3) {
  const auto gam = fd_christoffel(metric, q, h_inner);
  // dgam[l][k](i,j) = d_l Gamma^k_ij
  std::array<std::array<Mat3, 3>, 3> dgam;
  for (int l = 0; l < 3; ++l) {
    for (int k = 0; k < 3; ++k) {
      auto c = [&](double x) {
        Vec3 p = q;
        p[l] = x;
        return Mat3(fd_christoffel(metric, p, h_inner)[k]);
      };
      dgam[l][k] = fd4(c, q[l], h_outer);
    }
  }
  Mat3 ric = Mat3::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        ric(i, j) += dgam[k][k](i, j) - dgam[j][k](i, k);
        for (int l = 0; l < 3; ++l)
          ric(i, j) += gam[k](k, l) * gam[l](i, j) - gam[k](j, l) * gam[l](i, k);
      }
  return ric;
}

inline double fd_scalar(const MetricFn& metric, const Vec3& q, double h_outer = 2e-3,
                        double h_inner = 1e-3) {
  return (metric(q).inverse().cwiseProduct(fd_ricci(metric, q, h_outer, h_inner))).sum();
}

inline double lapse(double m, double r) { return std::sqrt(1.0 - 2.0 * m / r); }

/// Static-equation residual with every derivative of N and of the metric
/// taken by fourth-order differences of step h.
inline double fd4_static_residual(double m, const Vec3& q, double h) {
  auto n_at = [&](const Vec3& p) { return lapse(m, p[0]); };
  Vec3 dn;
  Mat3 ddn;
  for (int a = 0; a < 3; ++a) {
    auto along = [&](int dir, const Vec3& base) {
      return [&, dir, base](double x) {
        Vec3 p = base;
        p[dir] = x;
        return n_at(p);
      };
    };
    dn[a] = fd4(along(a, q), q[a], h);
    for (int b = 0; b < 3; ++b) {
      auto inner = [&](double x) {
        Vec3 p = q;
        p[a] = x;
        return fd4(along(b, p), p[b], h);
      };
      ddn(a, b) = fd4(inner, q[a], h);
    }
  }
  const MetricFn metric = schwarzschild(m);
  const auto gam = fd_christoffel(metric, q, h);
  const Mat3 ric = fd_ricci(metric, q, h, h);
  const Mat3 g = metric(q);
  const Mat3 gi = g.inverse();
  Mat3 hess = ddn;
  for (int k = 0; k < 3; ++k) hess -= dn[k] * gam[k];
  const double lap = (gi.cwiseProduct(hess)).sum();
  const Mat3 res = lap * g - hess + n_at(q) * ric;
  const Vec3 scale = g.diagonal().cwiseSqrt().cwiseInverse();
  return (scale.asDiagonal() * res * scale.asDiagonal()).cwiseAbs().maxCoeff();
}

/// g_rr = r / (r - 2m) in quad precision, r taken exactly as given.
inline double extended_grr(double m, double r) {
  const __float128 rr = r;
  const __float128 mm = m;
  return static_cast<double>(rr / (rr - 2 * mm));
}

namespace round_sphere {
inline double s(double m, double r) { return lapse(m, r); }
inline double H(double m, double r) { return 2.0 * s(m, r) / r; }
inline double A2(double m, double r) { return 2.0 * s(m, r) * s(m, r) / (r * r); }
inline double sigma2(double m, double r) { return s(m, r) * s(m, r) / (r * r); }
inline double K(double, double r) { return 1.0 / (r * r); }
inline double dN_dnu(double m, double r) { return m / (r * r); }
inline double ric_nu_nu(double m, double r) { return -2.0 * m / (r * r * r); }
}  // namespace round_sphere

/// Radial benchmark: flat spheres r(t) = r + t against mass-m coordinate
/// spheres of the same radius.
namespace radial {
inline double s(double m, double r) { return lapse(m, r); }
inline double dq_dt(double m, double r) {
  const double v = s(m, r);
  return -4.0 * pi * (1 - v) * (1 - v) / v;
}
inline double bulk_A(double m, double r) {
  const double v = s(m, r);
  return 4.0 * pi * v * (1 - v) * (1 - v);
}
inline double bulk_H(double m, double r) { return -2.0 * bulk_A(m, r); }
inline double boundary_f(double m, double r) {
  const double v = s(m, r);
  return -8.0 * pi * (m / r) * (1 - v) * (1 - v) / v;
}
}  // namespace radial

}  // namespace oracle
