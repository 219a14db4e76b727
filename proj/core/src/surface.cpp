#include "qlvar/surface.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "qlvar/error.hpp"

namespace qlvar::surface {

namespace {

using ambient::AmbientMetric;

Vec3 christoffel_contract(const std::array<Mat3, 3>& christoffel, const Vec3& a, const Vec3& b) {
  return {a.dot(christoffel[0] * b), a.dot(christoffel[1] * b), a.dot(christoffel[2] * b)};
}

VectorField apply_each(const VectorField& v, const std::function<Field(const Field&)>& op) {
  return {op(v[0]), op(v[1]), op(v[2])};
}

SurfaceGeometry build(const ParamSurface& s, bool extrinsic) {
  const SphereGrid& grid = s.grid();
  const int nt = grid.n_theta();
  const int np = grid.n_phi();

  SurfaceGeometry geo;
  geo.grid = grid;
  geo.metric = s.metric();
  geo.position = s.position();
  geo.x_theta = apply_each(geo.position, [&](const Field& f) { return grid.d_theta(f, Parity::Even); });
  geo.x_phi = apply_each(geo.position, [&](const Field& f) { return grid.d_phi(f); });

  geo.E = grid.zeros();
  geo.F = grid.zeros();
  geo.G = grid.zeros();
  geo.ambient.resize(std::size_t(nt) * std::size_t(np));
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < np; ++j) {
      const Vec3 x = geo.vec(geo.position, i, j);
      auto& amb = geo.ambient[geo.node(i, j)];
      if (extrinsic) {
        amb = s.metric().cartesian_curvature(x);
      } else {
        amb.metric = s.metric().cartesian_metric(x);
        amb.inverse = amb.metric.inverse();
      }
      const Vec3 xt = geo.vec(geo.x_theta, i, j);
      const Vec3 xp = geo.vec(geo.x_phi, i, j);
      geo.E(i, j) = xt.dot(amb.metric * xt);
      geo.F(i, j) = xt.dot(amb.metric * xp);
      geo.G(i, j) = xp.dot(amb.metric * xp);
    }
  }
  geo.det = geo.E.cwiseProduct(geo.G) - geo.F.cwiseProduct(geo.F);
  if (!(geo.det.minCoeff() > 0.0)) {
    std::ostringstream os;
    os << "induced metric not positive definite (min det = " << geo.det.minCoeff() << ")";
    fail(ErrorCode::DegenerateMetric, os.str());
  }
  geo.sqrt_det = geo.det.cwiseSqrt();
  geo.dsigma = geo.sqrt_det.cwiseProduct(grid.weights());
  geo.inv_tt = geo.G.cwiseQuotient(geo.det);
  geo.inv_tp = -geo.F.cwiseQuotient(geo.det);
  geo.inv_pp = geo.E.cwiseQuotient(geo.det);
  geo.E_theta = grid.d_theta(geo.E, Parity::Even);
  geo.E_phi = grid.d_phi(geo.E);
  geo.F_theta = grid.d_theta(geo.F, Parity::Odd);
  geo.F_phi = grid.d_phi(geo.F);
  geo.G_theta = grid.d_theta(geo.G, Parity::Even);
  geo.G_phi = grid.d_phi(geo.G);
  if (!extrinsic) return geo;

  const VectorField x_tt =
      apply_each(geo.x_theta, [&](const Field& f) { return grid.d_theta(f, Parity::Odd); });
  const VectorField x_tp = apply_each(geo.x_theta, [&](const Field& f) { return grid.d_phi(f); });
  const VectorField x_pp = apply_each(geo.x_phi, [&](const Field& f) { return grid.d_phi(f); });

  for (auto& c : geo.nu) c = grid.zeros();
  for (auto& c : geo.nu_flat) c = grid.zeros();
  Field radial = grid.zeros();
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < np; ++j) {
      const auto& amb = geo.ambient[geo.node(i, j)];
      const Vec3 cov = geo.vec(geo.x_theta, i, j).cross(geo.vec(geo.x_phi, i, j));
      const Vec3 up = amb.inverse * cov;
      const double norm = std::sqrt(cov.dot(up));
      for (int k = 0; k < 3; ++k) {
        geo.nu[k](i, j) = up[k] / norm;
        geo.nu_flat[k](i, j) = cov[k] / norm;
      }
      const Vec3 x = geo.vec(geo.position, i, j);
      radial(i, j) = x.normalized().dot(up / norm);
    }
  }
  double sign = 1.0;
  switch (s.orientation()) {
    case Orientation::Natural: break;
    case Orientation::Reversed: sign = -1.0; break;
    case Orientation::Auto:
      if (radial.minCoeff() > 0.0) {
        sign = 1.0;
      } else if (radial.maxCoeff() < 0.0) {
        sign = -1.0;
      } else {
        fail(ErrorCode::NormalOrientationAmbiguous,
             "normal crosses the radial direction; pass an orientation hint");
      }
      break;
  }
  for (int k = 0; k < 3; ++k) {
    geo.nu[k] *= sign;
    geo.nu_flat[k] *= sign;
  }

  geo.A_tt = grid.zeros();
  geo.A_tp = grid.zeros();
  geo.A_pp = grid.zeros();
  geo.ric_nu_nu = grid.zeros();
  geo.scalar_curv = grid.zeros();
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < np; ++j) {
      const auto& amb = geo.ambient[geo.node(i, j)];
      const Vec3 xt = geo.vec(geo.x_theta, i, j);
      const Vec3 xp = geo.vec(geo.x_phi, i, j);
      const Vec3 nf = geo.vec(geo.nu_flat, i, j);
      const Vec3 nu = geo.vec(geo.nu, i, j);
      geo.A_tt(i, j) = -nf.dot(geo.vec(x_tt, i, j) + christoffel_contract(amb.christoffel, xt, xt));
      geo.A_tp(i, j) = -nf.dot(geo.vec(x_tp, i, j) + christoffel_contract(amb.christoffel, xt, xp));
      geo.A_pp(i, j) = -nf.dot(geo.vec(x_pp, i, j) + christoffel_contract(amb.christoffel, xp, xp));
      geo.ric_nu_nu(i, j) = nu.dot(amb.ricci * nu);
      geo.scalar_curv(i, j) = amb.scalar;
    }
  }
  geo.H = geo.inv_tt.cwiseProduct(geo.A_tt) + 2.0 * geo.inv_tp.cwiseProduct(geo.A_tp) +
          geo.inv_pp.cwiseProduct(geo.A_pp);
  // |A|^2 = tr((gamma^-1 A)^2)
  const Field m11 = geo.inv_tt.cwiseProduct(geo.A_tt) + geo.inv_tp.cwiseProduct(geo.A_tp);
  const Field m12 = geo.inv_tt.cwiseProduct(geo.A_tp) + geo.inv_tp.cwiseProduct(geo.A_pp);
  const Field m21 = geo.inv_tp.cwiseProduct(geo.A_tt) + geo.inv_pp.cwiseProduct(geo.A_tp);
  const Field m22 = geo.inv_tp.cwiseProduct(geo.A_tp) + geo.inv_pp.cwiseProduct(geo.A_pp);
  geo.A_norm2 = m11.cwiseProduct(m11) + 2.0 * m12.cwiseProduct(m21) + m22.cwiseProduct(m22);
  geo.sigma2 = 0.5 * (geo.H.cwiseProduct(geo.H) - geo.A_norm2);

  // Liouville form of the Gauss curvature
  const Field two_e_sqrt = 2.0 * geo.E.cwiseProduct(geo.sqrt_det);
  const Field p = (-geo.F.cwiseProduct(geo.E_theta) +
                   geo.E.cwiseProduct(2.0 * geo.F_theta - geo.E_phi))
                      .cwiseQuotient(two_e_sqrt);
  const Field q = (-geo.F.cwiseProduct(geo.E_phi) + geo.E.cwiseProduct(geo.G_theta))
                      .cwiseQuotient(two_e_sqrt);
  geo.gauss_curv =
      (grid.d_phi(p) - grid.d_theta(q, Parity::Even)).cwiseQuotient(geo.sqrt_det);
  geo.has_extrinsic = true;
  return geo;
}

void require_extrinsic(const SurfaceGeometry& geom) {
  if (!geom.has_extrinsic)
    fail(ErrorCode::InvalidArgument, "operation needs extrinsic_geometry output");
}

}  // namespace

ParamSurface::ParamSurface(SphereGrid grid, VectorField position, ambient::AmbientMetric metric,
                           Orientation orientation)
    : grid_(std::move(grid)),
      position_(std::move(position)),
      metric_(metric),
      orientation_(orientation) {
  for (const auto& c : position_)
    if (c.rows() != grid_.n_theta() || c.cols() != grid_.n_phi())
      fail(ErrorCode::InvalidArgument, "position samples do not match the grid");
  const double rmin = metric_.base().r_min();
  for (int i = 0; i < grid_.n_theta(); ++i)
    for (int j = 0; j < grid_.n_phi(); ++j)
      if (!(at(i, j).norm() > rmin)) {
        std::ostringstream os;
        os << "surface node (" << i << ", " << j << ") at r = " << at(i, j).norm()
           << " is not outside r = " << rmin;
        fail(ErrorCode::PointInsideHorizon, os.str());
      }
}

ParamSurface ParamSurface::radial_graph(const SphereGrid& grid, const ambient::AmbientMetric& metric,
                                        const std::function<double(double, double)>& radius) {
  VectorField pos{grid.zeros(), grid.zeros(), grid.zeros()};
  for (int i = 0; i < grid.n_theta(); ++i) {
    for (int j = 0; j < grid.n_phi(); ++j) {
      const double r = radius(grid.theta(i), grid.phi(j));
      const Vec3 x = ambient::to_cartesian({r, grid.theta(i), grid.phi(j)});
      for (int k = 0; k < 3; ++k) pos[k](i, j) = x[k];
    }
  }
  return {grid, pos, metric};
}

ParamSurface ParamSurface::coordinate_sphere(const SphereGrid& grid,
                                             const ambient::AmbientMetric& metric, double radius) {
  return radial_graph(grid, metric, [radius](double, double) { return radius; });
}

ParamSurface ParamSurface::from_profile(const SphereGrid& grid, const ambient::AmbientMetric& metric,
                                        const AxiProfile& profile) {
  if (profile.rho.size() != grid.n_theta() || profile.psi_bar.size() != grid.n_theta())
    fail(ErrorCode::InvalidArgument, "profile samples do not match the grid");
  VectorField pos{grid.zeros(), grid.zeros(), grid.zeros()};
  for (int i = 0; i < grid.n_theta(); ++i) {
    const double rho = profile.rho[i];
    const double sp = std::sin(profile.psi_bar[i]);
    const double cp = std::cos(profile.psi_bar[i]);
    for (int j = 0; j < grid.n_phi(); ++j) {
      pos[0](i, j) = rho * sp * std::cos(grid.phi(j));
      pos[1](i, j) = rho * sp * std::sin(grid.phi(j));
      pos[2](i, j) = rho * cp;
    }
  }
  return {grid, pos, metric};
}

Vec3 ParamSurface::at(int i, int j) const {
  return {position_[0](i, j), position_[1](i, j), position_[2](i, j)};
}

ambient::AmbientPoint ParamSurface::point(int i, int j) const {
  return ambient::to_spherical(at(i, j));
}

ParamSurface ParamSurface::rotated(const Mat3& rotation) const {
  VectorField pos = position_;
  for (int i = 0; i < grid_.n_theta(); ++i) {
    for (int j = 0; j < grid_.n_phi(); ++j) {
      const Vec3 x = rotation * at(i, j);
      for (int k = 0; k < 3; ++k) pos[k](i, j) = x[k];
    }
  }
  return {grid_, pos, metric_, orientation_};
}

SurfaceGeometry induced_metric(const ParamSurface& surface) { return build(surface, false); }
SurfaceGeometry extrinsic_geometry(const ParamSurface& surface) { return build(surface, true); }

double integrate(const SurfaceGeometry& geom, const Field& f) {
  return f.cwiseProduct(geom.dsigma).sum();
}

double metric_mismatch(const SurfaceGeometry& a, const SurfaceGeometry& b) {
  if (a.E.rows() != b.E.rows() || a.E.cols() != b.E.cols())
    fail(ErrorCode::InvalidArgument, "surfaces are sampled on different grids");
  return std::max({(a.E - b.E).cwiseAbs().maxCoeff(), (a.F - b.F).cwiseAbs().maxCoeff(),
                   (a.G - b.G).cwiseAbs().maxCoeff()});
}

double area(const SurfaceGeometry& geom) { return geom.dsigma.sum(); }

std::array<Field, 2> covariant_components(const SurfaceGeometry& geom, const VectorField& y) {
  std::array<Field, 2> out{geom.grid.zeros(), geom.grid.zeros()};
  for (int i = 0; i < geom.grid.n_theta(); ++i) {
    for (int j = 0; j < geom.grid.n_phi(); ++j) {
      const Mat3& g = geom.ambient[geom.node(i, j)].metric;
      const Vec3 gy = g * geom.vec(y, i, j);
      out[0](i, j) = gy.dot(geom.vec(geom.x_theta, i, j));
      out[1](i, j) = gy.dot(geom.vec(geom.x_phi, i, j));
    }
  }
  return out;
}

std::array<Field, 2> tangent_components(const SurfaceGeometry& geom, const VectorField& y) {
  const auto cov = covariant_components(geom, y);
  return {geom.inv_tt.cwiseProduct(cov[0]) + geom.inv_tp.cwiseProduct(cov[1]),
          geom.inv_tp.cwiseProduct(cov[0]) + geom.inv_pp.cwiseProduct(cov[1])};
}

Field normal_component(const SurfaceGeometry& geom, const VectorField& y) {
  require_extrinsic(geom);
  return geom.nu_flat[0].cwiseProduct(y[0]) + geom.nu_flat[1].cwiseProduct(y[1]) +
         geom.nu_flat[2].cwiseProduct(y[2]);
}

VectorField gradient(const SurfaceGeometry& geom, const Field& u) {
  const Field ut = geom.grid.d_theta(u, Parity::Even);
  const Field up = geom.grid.d_phi(u);
  const Field ct = geom.inv_tt.cwiseProduct(ut) + geom.inv_tp.cwiseProduct(up);
  const Field cp = geom.inv_tp.cwiseProduct(ut) + geom.inv_pp.cwiseProduct(up);
  VectorField out;
  for (int k = 0; k < 3; ++k)
    out[k] = ct.cwiseProduct(geom.x_theta[k]) + cp.cwiseProduct(geom.x_phi[k]);
  return out;
}

Field laplacian(const SurfaceGeometry& geom, const Field& u) {
  const auto& grid = geom.grid;
  const Field ut = grid.d_theta(u, Parity::Even);
  const Field up = grid.d_phi(u);
  const Field flux_t =
      (geom.G.cwiseProduct(ut) - geom.F.cwiseProduct(up)).cwiseQuotient(geom.sqrt_det);
  const Field flux_p =
      (-geom.F.cwiseProduct(ut) + geom.E.cwiseProduct(up)).cwiseQuotient(geom.sqrt_det);
  return (grid.d_theta(flux_t, Parity::Even) + grid.d_phi(flux_p)).cwiseQuotient(geom.sqrt_det);
}

Field divergence(const SurfaceGeometry& geom, const VectorField& y) {
  const auto& grid = geom.grid;
  const auto cov = covariant_components(geom, y);
  const Field flux_t =
      (geom.G.cwiseProduct(cov[0]) - geom.F.cwiseProduct(cov[1])).cwiseQuotient(geom.sqrt_det);
  const Field flux_p =
      (-geom.F.cwiseProduct(cov[0]) + geom.E.cwiseProduct(cov[1])).cwiseQuotient(geom.sqrt_det);
  return (grid.d_theta(flux_t, Parity::Even) + grid.d_phi(flux_p)).cwiseQuotient(geom.sqrt_det);
}

namespace {

// g(Dbar_a Y, X_b) for a, b in {theta, phi}: [a][b]
std::array<std::array<Field, 2>, 2> connection_pairing(const SurfaceGeometry& geom,
                                                        const VectorField& y) {
  require_extrinsic(geom);
  const auto& grid = geom.grid;
  VectorField yt, yp;
  for (int k = 0; k < 3; ++k) {
    yt[k] = grid.d_theta(y[k], Parity::Even);
    yp[k] = grid.d_phi(y[k]);
  }
  std::array<std::array<Field, 2>, 2> out{
      {{grid.zeros(), grid.zeros()}, {grid.zeros(), grid.zeros()}}};
  for (int i = 0; i < grid.n_theta(); ++i) {
    for (int j = 0; j < grid.n_phi(); ++j) {
      const auto& amb = geom.ambient[geom.node(i, j)];
      const Vec3 yv = geom.vec(y, i, j);
      const std::array<Vec3, 2> xa{geom.vec(geom.x_theta, i, j), geom.vec(geom.x_phi, i, j)};
      const std::array<Vec3, 2> da{geom.vec(yt, i, j), geom.vec(yp, i, j)};
      for (int a = 0; a < 2; ++a) {
        const Vec3 cov = da[a] + christoffel_contract(amb.christoffel, xa[a], yv);
        const Vec3 lowered = amb.metric * cov;
        for (int b = 0; b < 2; ++b) out[a][b](i, j) = lowered.dot(xa[b]);
      }
    }
  }
  return out;
}

}  // namespace

Field divergence_ambient(const SurfaceGeometry& geom, const VectorField& y) {
  const auto p = connection_pairing(geom, y);
  return geom.inv_tt.cwiseProduct(p[0][0]) + geom.inv_tp.cwiseProduct(p[0][1] + p[1][0]) +
         geom.inv_pp.cwiseProduct(p[1][1]);
}

std::array<Field, 3> lie_derivative_metric(const SurfaceGeometry& geom, const VectorField& y) {
  const auto p = connection_pairing(geom, y);
  return {2.0 * p[0][0], p[0][1] + p[1][0], 2.0 * p[1][1]};
}

Field gauss_residual(const SurfaceGeometry& geom) {
  require_extrinsic(geom);
  return 2.0 * geom.gauss_curv -
         (geom.scalar_curv - 2.0 * geom.ric_nu_nu + geom.H.cwiseProduct(geom.H) - geom.A_norm2);
}

Field codazzi_defect(const SurfaceGeometry& geom, const VectorField& y) {
  require_extrinsic(geom);
  const auto& grid = geom.grid;
  const Field& sg = geom.sqrt_det;

  // mixed components A^a_b
  const Field a_t_t = geom.inv_tt.cwiseProduct(geom.A_tt) + geom.inv_tp.cwiseProduct(geom.A_tp);
  const Field a_t_p = geom.inv_tt.cwiseProduct(geom.A_tp) + geom.inv_tp.cwiseProduct(geom.A_pp);
  const Field a_p_t = geom.inv_tp.cwiseProduct(geom.A_tt) + geom.inv_pp.cwiseProduct(geom.A_tp);
  const Field a_p_p = geom.inv_tp.cwiseProduct(geom.A_tp) + geom.inv_pp.cwiseProduct(geom.A_pp);
  // contravariant A^ab
  const Field up_tt = a_t_t.cwiseProduct(geom.inv_tt) + a_t_p.cwiseProduct(geom.inv_tp);
  const Field up_tp = a_t_t.cwiseProduct(geom.inv_tp) + a_t_p.cwiseProduct(geom.inv_pp);
  const Field up_pp = a_p_t.cwiseProduct(geom.inv_tp) + a_p_p.cwiseProduct(geom.inv_pp);

  const Field div_t =
      (grid.d_theta(sg.cwiseProduct(a_t_t), Parity::Odd) + grid.d_phi(sg.cwiseProduct(a_p_t)))
          .cwiseQuotient(sg) -
      0.5 * (up_tt.cwiseProduct(geom.E_theta) + 2.0 * up_tp.cwiseProduct(geom.F_theta) +
             up_pp.cwiseProduct(geom.G_theta));
  const Field div_p =
      (grid.d_theta(sg.cwiseProduct(a_t_p), Parity::Even) + grid.d_phi(sg.cwiseProduct(a_p_p)))
          .cwiseQuotient(sg) -
      0.5 * (up_tt.cwiseProduct(geom.E_phi) + 2.0 * up_tp.cwiseProduct(geom.F_phi) +
             up_pp.cwiseProduct(geom.G_phi));
  const Field h_t = grid.d_theta(geom.H, Parity::Even);
  const Field h_p = grid.d_phi(geom.H);

  const auto yc = tangent_components(geom, y);
  Field ric = grid.zeros();
  for (int i = 0; i < grid.n_theta(); ++i)
    for (int j = 0; j < grid.n_phi(); ++j)
      ric(i, j) = geom.vec(y, i, j).dot(geom.ambient[geom.node(i, j)].ricci *
                                        geom.vec(geom.nu, i, j));
  return (div_t - h_t).cwiseProduct(yc[0]) + (div_p - h_p).cwiseProduct(yc[1]) - ric;
}

double codazzi_residual(const SurfaceGeometry& geom, const VectorField& y) {
  return integrate(geom, codazzi_defect(geom, y).cwiseAbs());
}

PrincipalCurvatures principal_curvatures(const SurfaceGeometry& geom) {
  require_extrinsic(geom);
  const Field det_a = geom.A_tt.cwiseProduct(geom.A_pp) - geom.A_tp.cwiseProduct(geom.A_tp);
  const Field k = det_a.cwiseQuotient(geom.det);
  const Field half_h = 0.5 * geom.H;
  const Field disc = (half_h.cwiseProduct(half_h) - k).cwiseMax(0.0).cwiseSqrt();
  return {half_h - disc, half_h + disc};
}

PotentialFields potential_on(const SurfaceGeometry& geom, const ambient::StaticSpace& space) {
  require_extrinsic(geom);
  const auto& grid = geom.grid;
  PotentialFields out{grid.zeros(), grid.zeros(), {grid.zeros(), grid.zeros(), grid.zeros()}};
  for (int i = 0; i < grid.n_theta(); ++i) {
    for (int j = 0; j < grid.n_phi(); ++j) {
      const auto pot = ambient::cartesian_potential(space, geom.vec(geom.position, i, j));
      out.N(i, j) = pot.value;
      out.dN_dnu(i, j) = pot.gradient.dot(geom.vec(geom.nu, i, j));
      for (int k = 0; k < 3; ++k) out.dN[k](i, j) = pot.gradient[k];
    }
  }
  return out;
}

void write_csv(std::ostream& os, const SurfaceGeometry& geom, const Field* lapse) {
  os << "i,j,theta,phi,gamma_tt,gamma_tp,gamma_pp";
  if (geom.has_extrinsic) os << ",A_tt,A_tp,A_pp,H";
  if (lapse) os << ",N";
  os << '\n';
  os.precision(17);
  for (int i = 0; i < geom.grid.n_theta(); ++i) {
    for (int j = 0; j < geom.grid.n_phi(); ++j) {
      os << i << ',' << j << ',' << geom.grid.theta(i) << ',' << geom.grid.phi(j) << ','
         << geom.E(i, j) << ',' << geom.F(i, j) << ',' << geom.G(i, j);
      if (geom.has_extrinsic)
        os << ',' << geom.A_tt(i, j) << ',' << geom.A_tp(i, j) << ',' << geom.A_pp(i, j) << ','
           << geom.H(i, j);
      if (lapse) os << ',' << (*lapse)(i, j);
      os << '\n';
    }
  }
}

}  // namespace qlvar::surface
