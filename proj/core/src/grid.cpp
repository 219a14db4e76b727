#include "qlvar/grid.hpp"

#include <cmath>
#include <numbers>

#include "qlvar/error.hpp"
#include "qlvar/spectral.hpp"

namespace qlvar {

SphereGrid::SphereGrid(int n_theta, int n_phi) : n_theta_(n_theta), n_phi_(n_phi) {
  if (n_theta < 2) fail(ErrorCode::InvalidArgument, "n_theta must be at least 2");
  if (n_phi < 2 || n_phi % 2 != 0)
    fail(ErrorCode::InvalidArgument, "n_phi must be even and at least 2");

  const auto gl = spectral::gauss_legendre(n_theta);
  theta_.resize(n_theta);
  x_.resize(n_theta);
  sin_.resize(n_theta);
  gl_weights_.resize(n_theta);
  for (int i = 0; i < n_theta; ++i) {
    // ascending theta means descending x
    const double x = -gl.nodes[i];
    theta_[i] = std::acos(x);
    x_[i] = std::cos(theta_[i]);
    sin_[i] = std::sin(theta_[i]);
    gl_weights_[i] = gl.weights[i];
  }
  phi_.resize(n_phi);
  const double h = 2.0 * std::numbers::pi / n_phi;
  for (int j = 0; j < n_phi; ++j) phi_[j] = h * j;

  weights_.resize(n_theta, n_phi);
  for (int i = 0; i < n_theta; ++i) weights_.row(i).setConstant(gl_weights_[i] / sin_[i] * h);

  std::vector<double> xs(x_.data(), x_.data() + n_theta);
  dx_ = spectral::differentiation_matrix(xs);
  d_even_ = -(sin_.asDiagonal() * dx_);
  const Eigen::VectorXd inv_sin = sin_.cwiseInverse();
  const Eigen::VectorXd sin2 = sin_.cwiseProduct(sin_);
  d_odd_ = Eigen::MatrixXd(x_.cwiseProduct(inv_sin).asDiagonal()) -
           sin2.asDiagonal() * dx_ * inv_sin.asDiagonal();
  d_phi_t_ = spectral::fourier_differentiation_matrix(n_phi).transpose();
}

Field SphereGrid::sphere_weights() const {
  Field w(n_theta_, n_phi_);
  const double h = 2.0 * std::numbers::pi / n_phi_;
  for (int i = 0; i < n_theta_; ++i) w.row(i).setConstant(gl_weights_[i] * h);
  return w;
}

Field SphereGrid::half_turn(const Field& f) const {
  Field out(f.rows(), f.cols());
  const int half = n_phi_ / 2;
  for (int j = 0; j < n_phi_; ++j) out.col(j) = f.col((j + half) % n_phi_);
  return out;
}

Field SphereGrid::d_theta(const Field& f, Parity p) const {
  const Field h = half_turn(f);
  const Field even_m = 0.5 * (f + h);
  const Field odd_m = 0.5 * (f - h);
  if (p == Parity::Even) return d_even_ * even_m + d_odd_ * odd_m;
  return d_odd_ * even_m + d_even_ * odd_m;
}

Field SphereGrid::d_phi(const Field& f) const { return f * d_phi_t_; }

double SphereGrid::integrate_parameter(const Field& f) const {
  return f.cwiseProduct(weights_).sum();
}

ThetaInterpolant::ThetaInterpolant(const SphereGrid& grid, const Eigen::VectorXd& samples,
                                   bool sine_class)
    : sine_class_(sine_class) {
  const int n = grid.n_theta();
  if (samples.size() != n) fail(ErrorCode::InvalidArgument, "profile sample count mismatch");
  x_.assign(grid.x_nodes().data(), grid.x_nodes().data() + n);
  bary_ = spectral::barycentric_weights(x_);
  Eigen::VectorXd g = samples;
  for (int i = 0; i < n && sine_class; ++i) g[i] = samples[i] / grid.sin_theta(i);
  const Eigen::VectorXd dg = grid.dx() * g;
  g_.assign(g.data(), g.data() + n);
  dg_.assign(dg.data(), dg.data() + n);
}

double ThetaInterpolant::eval(const std::vector<double>& v, double x) const {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < x_.size(); ++j) {
    const double d = x - x_[j];
    if (d == 0.0) return v[j];
    const double c = bary_[j] / d;
    num += c * v[j];
    den += c;
  }
  return num / den;
}

double ThetaInterpolant::value(double theta) const {
  const double x = std::cos(theta);
  const double g = eval(g_, x);
  return sine_class_ ? std::sin(theta) * g : g;
}

double ThetaInterpolant::derivative(double theta) const {
  const double x = std::cos(theta);
  const double s = std::sin(theta);
  const double dg = eval(dg_, x);
  if (!sine_class_) return -s * dg;
  return x * eval(g_, x) - s * s * dg;
}

}  // namespace qlvar
