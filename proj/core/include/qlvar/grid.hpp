#pragma once

#include <vector>

#include <Eigen/Dense>

namespace qlvar {

/// Scalar samples on a SphereGrid, rows = theta nodes, columns = phi nodes.
using Field = Eigen::MatrixXd;

/// Behaviour of a lat-long field under the pole reflection
/// (theta, phi) -> (-theta, phi + pi). Scalars and Cartesian components of
/// smooth vector fields are Even; theta-derivatives flip the parity.
enum class Parity : int { Even = 1, Odd = -1 };

[[nodiscard]] constexpr Parity flip(Parity p) {
  return p == Parity::Even ? Parity::Odd : Parity::Even;
}
[[nodiscard]] constexpr Parity operator*(Parity a, Parity b) {
  return a == b ? Parity::Even : Parity::Odd;
}

/// Gauss-Legendre nodes in x = cos(theta) (theta ascending, no node at a
/// pole) times n_phi equispaced azimuths phi_j = 2 pi j / n_phi.
///
/// Theta differentiation splits a field into its even- and odd-m azimuthal
/// parts; each part is either g(cos theta) or sin(theta) g(cos theta) for a
/// polynomial g, and g is differentiated by Legendre collocation.
class SphereGrid {
 public:
  SphereGrid(int n_theta, int n_phi);

  [[nodiscard]] int n_theta() const { return n_theta_; }
  [[nodiscard]] int n_phi() const { return n_phi_; }
  [[nodiscard]] Eigen::Index size() const { return Eigen::Index(n_theta_) * n_phi_; }

  [[nodiscard]] double theta(int i) const { return theta_[i]; }
  [[nodiscard]] double cos_theta(int i) const { return x_[i]; }
  [[nodiscard]] double sin_theta(int i) const { return sin_[i]; }
  [[nodiscard]] double phi(int j) const { return phi_[j]; }
  [[nodiscard]] const Eigen::VectorXd& theta_nodes() const { return theta_; }
  [[nodiscard]] const Eigen::VectorXd& x_nodes() const { return x_; }
  [[nodiscard]] const Eigen::VectorXd& phi_nodes() const { return phi_; }

  /// Weight for integrals in d theta d phi, w_i / sin(theta_i) * 2 pi / n_phi.
  [[nodiscard]] const Field& weights() const { return weights_; }
  /// Round unit sphere weights (w_i * 2 pi / n_phi).
  [[nodiscard]] Field sphere_weights() const;

  [[nodiscard]] Field zeros() const { return Field::Zero(n_theta_, n_phi_); }
  [[nodiscard]] Field constant(double c) const { return Field::Constant(n_theta_, n_phi_, c); }

  template <class F>
  [[nodiscard]] Field sample(F&& f) const {
    Field out(n_theta_, n_phi_);
    for (int i = 0; i < n_theta_; ++i)
      for (int j = 0; j < n_phi_; ++j) out(i, j) = f(theta_[i], phi_[j]);
    return out;
  }

  [[nodiscard]] Field d_theta(const Field& f, Parity p) const;
  [[nodiscard]] Field d_phi(const Field& f) const;

  /// Sum of f * weights(): integral over the parameter domain in d theta d phi.
  [[nodiscard]] double integrate_parameter(const Field& f) const;

  /// Legendre collocation matrix in x on the theta nodes.
  [[nodiscard]] const Eigen::MatrixXd& dx() const { return dx_; }

  /// Field with columns shifted by half a turn, f(theta, phi + pi).
  [[nodiscard]] Field half_turn(const Field& f) const;

 private:
  int n_theta_;
  int n_phi_;
  Eigen::VectorXd theta_, x_, sin_, phi_;
  Eigen::VectorXd gl_weights_;
  Field weights_;
  Eigen::MatrixXd dx_;
  Eigen::MatrixXd d_even_;   // acts on g(x)
  Eigen::MatrixXd d_odd_;    // acts on sin(theta) g(x)
  Eigen::MatrixXd d_phi_t_;  // transposed Fourier matrix, applied on the right
};

/// Interpolant of an axisymmetric theta profile sampled on the grid nodes.
/// `sine_class` selects the representation sin(theta) g(cos theta) (fields
/// odd about the poles, e.g. a distance from the axis) instead of g(cos theta).
class ThetaInterpolant {
 public:
  ThetaInterpolant() = default;
  ThetaInterpolant(const SphereGrid& grid, const Eigen::VectorXd& samples, bool sine_class);

  [[nodiscard]] double value(double theta) const;
  [[nodiscard]] double derivative(double theta) const;

 private:
  std::vector<double> x_;
  std::vector<double> bary_;
  std::vector<double> g_;
  std::vector<double> dg_;
  bool sine_class_ = false;

  [[nodiscard]] double eval(const std::vector<double>& v, double x) const;
};

}  // namespace qlvar
