#include "qlvar/embedding.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "qlvar/error.hpp"

namespace qlvar::embedding {

namespace odeint = boost::numeric::odeint;

AxiMetric AxiMetric::round(double r0) {
  return {[r0](double) { return r0 * r0; }, [r0](double t) { return r0 * std::sin(t); },
          [r0](double t) { return r0 * std::cos(t); }};
}

AxiMetric AxiMetric::from_samples(const SphereGrid& grid, const Eigen::VectorXd& e,
                                  const Eigen::VectorXd& g) {
  if (e.size() != grid.n_theta() || g.size() != grid.n_theta())
    fail(ErrorCode::InvalidArgument, "metric samples do not match the grid");
  if (e.minCoeff() <= 0.0 || g.minCoeff() <= 0.0)
    fail(ErrorCode::DegenerateMetric, "metric samples must be positive");
  const ThetaInterpolant ei(grid, e, false);
  const ThetaInterpolant wi(grid, g.cwiseSqrt(), true);
  return {[ei](double t) { return ei.value(t); }, [wi](double t) { return wi.value(t); },
          [wi](double t) { return wi.derivative(t); }};
}

AxiMetric AxiMetric::from_profile(const ambient::AmbientMetric& metric,
                                  std::function<double(double)> rho,
                                  std::function<double(double)> drho) {
  const double m = metric.base().mass;
  const ambient::ConformalFactor u = metric.conformal();
  auto e = [=](double t) {
    const double r = rho(t);
    const double dr = drho(t);
    const double uu = u.eval(r)[0];
    const double u4 = uu * uu * uu * uu;
    return u4 * (dr * dr * r / (r - 2.0 * m) + r * r);
  };
  auto w = [=](double t) {
    const double r = rho(t);
    const double uu = u.eval(r)[0];
    return uu * uu * r * std::sin(t);
  };
  auto dw = [=](double t) {
    const double r = rho(t);
    const double dr = drho(t);
    const auto [uu, u1, u2] = u.eval(r);
    (void)u2;
    return (2.0 * uu * u1 * r + uu * uu) * dr * std::sin(t) + uu * uu * r * std::cos(t);
  };
  return {e, w, dw};
}

surface::AxiProfile embed_round(double r0, const ambient::StaticSpace& space,
                                const SphereGrid& grid) {
  if (!(r0 > space.r_min())) {
    std::ostringstream os;
    os << "sphere radius " << r0 << " is not outside the horizon r = " << space.r_min();
    fail(ErrorCode::PointInsideHorizon, os.str());
  }
  surface::AxiProfile p;
  p.theta = grid.theta_nodes();
  p.rho = Eigen::VectorXd::Constant(grid.n_theta(), r0);
  p.psi_bar = grid.theta_nodes();
  return p;
}

double radicand(const AxiMetric& metric, const ambient::StaticSpace& space, double theta,
                double rho, double psi_bar) {
  const double sp = std::sin(psi_bar);
  const double n = 1.0 - 2.0 * space.mass * sp * sp / rho;
  const double dw = metric.dw(theta);
  return metric.E(theta) * n - dw * dw;
}

namespace {

using State = std::array<double, 2>;  // rho, psi_bar

struct Rhs {
  const AxiMetric* metric;
  const ambient::StaticSpace* space;
  const EmbeddingOptions* options;
  SolverReport* report;

  void operator()(const State& y, State& dydt, double theta) const {
    ++report->rhs_evaluations;
    const double rho = y[0];
    const double psi = y[1];
    if (!(rho > space->r_min() + space->horizon_margin)) {
      std::ostringstream os;
      os << "profile reached rho = " << rho << " at theta = " << theta
         << " (horizon " << space->r_min() << " + margin " << space->horizon_margin << ")";
      fail(ErrorCode::HorizonCrossing, os.str());
    }
    const double s = std::sqrt((rho - 2.0 * space->mass) / rho);
    const double c1 = s * std::sin(psi);
    const double c2 = std::cos(psi);
    const double n = c1 * c1 + c2 * c2;
    const double e = metric->E(theta);
    const double dw = metric->dw(theta);
    double d = e * n - dw * dw;
    report->min_radicand = std::min(report->min_radicand, d / e);
    if (d < -options->radicand_floor * e) {
      std::ostringstream os;
      os << "radicand E n - w'^2 = " << d << " < 0 at theta = " << theta << ", rho = " << rho;
      fail(ErrorCode::SolvabilityLost, os.str());
    }
    d = std::max(d, 0.0);
    const double root = std::sqrt(d);
    const double a = (dw * c1 - c2 * root) / n;
    const double b = (dw * c2 + c1 * root) / n;
    dydt[0] = s * a;
    dydt[1] = b / rho;
  }
};

void check_pole(const AxiMetric& metric, double theta, double tol) {
  const double e = metric.E(theta);
  const double dw = metric.dw(theta);
  if (std::abs(dw * dw - e) > tol * e) {
    std::ostringstream os;
    os << "metric is not smooth at theta = " << theta << ": w'^2 = " << dw * dw
       << " but E = " << e;
    fail(ErrorCode::PoleRegularityFailure, os.str());
  }
}

}  // namespace

EmbeddingResult embed_axisymmetric(const AxiMetric& metric, const ambient::StaticSpace& space,
                                   const SphereGrid& grid, const EmbeddingOptions& options) {
  const double pi = std::numbers::pi;
  check_pole(metric, 0.0, options.pole_tolerance);
  check_pole(metric, pi, options.pole_tolerance);

  EmbeddingResult result;
  result.solver_report.min_radicand = std::numeric_limits<double>::infinity();
  const int n = grid.n_theta();
  result.profile.theta = grid.theta_nodes();
  result.profile.rho.resize(n);
  result.profile.psi_bar.resize(n);

  const double half = 0.5 * pi;
  const State anchor{metric.w(half), half};
  if (!(anchor[0] > space.r_min() + space.horizon_margin))
    fail(ErrorCode::HorizonCrossing, "equatorial radius lies inside the horizon margin");

  Rhs rhs{&metric, &space, &options, &result.solver_report};
  const double h0 = 1e-3;

  // towards theta = 0, then towards theta = pi
  for (int dir : {-1, 1}) {
    std::vector<double> times{half};
    std::vector<int> index{-1};
    if (dir < 0) {
      for (int i = n - 1; i >= 0; --i)
        if (grid.theta(i) < half) {
          times.push_back(grid.theta(i));
          index.push_back(i);
        } else if (grid.theta(i) == half) {
          index[0] = i;
        }
    } else {
      for (int i = 0; i < n; ++i)
        if (grid.theta(i) > half) {
          times.push_back(grid.theta(i));
          index.push_back(i);
        }
    }
    if (times.size() < 2) continue;
    State y = anchor;
    std::size_t k = 0;
    auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(
        options.ode_tolerance, options.ode_tolerance);
    auto observe = [&](const State& state, double) {
      const int i = index[k++];
      if (i < 0) return;
      result.profile.rho[i] = state[0];
      result.profile.psi_bar[i] = state[1];
    };
    result.solver_report.steps += int(odeint::integrate_times(
        stepper, std::ref(rhs), y, times.begin(), times.end(), dir * h0, observe));
  }
  result.solver_report.min_rho = result.profile.rho.minCoeff();
  for (int i = 1; i < n; ++i)
    if (!(result.profile.psi_bar[i] > result.profile.psi_bar[i - 1]))
      fail(ErrorCode::SolvabilityLost, "psi_bar is not monotone along the solve");

  result.residual = embedding_residual(result.profile, metric, space, grid);
  if (result.residual > options.tolerance) {
    std::ostringstream os;
    os << "embedding residual " << result.residual << " exceeds tolerance " << options.tolerance;
    fail(ErrorCode::EmbeddingToleranceNotMet, os.str());
  }
  return result;
}

double embedding_residual(const surface::AxiProfile& profile, const AxiMetric& metric,
                          const ambient::StaticSpace& space, const SphereGrid& grid) {
  const auto surf = surface::ParamSurface::from_profile(grid, ambient::AmbientMetric(space), profile);
  const auto geo = surface::induced_metric(surf);
  double worst = 0.0;
  for (int i = 0; i < grid.n_theta(); ++i) {
    const double t = grid.theta(i);
    worst = std::max(worst, std::abs(geo.E(i, 0) - metric.E(t)));
    worst = std::max(worst, std::abs(geo.G(i, 0) - metric.G(t)));
  }
  return worst;
}

}  // namespace qlvar::embedding
