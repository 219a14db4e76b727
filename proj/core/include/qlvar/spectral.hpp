#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qlvar::spectral {

/// Gauss-Legendre rule on [-1, 1]; nodes ascending.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendre gauss_legendre(int n);

/// Barycentric weights for polynomial interpolation on arbitrary distinct
/// nodes, normalised so the largest magnitude is one.
std::vector<double> barycentric_weights(std::span<const double> nodes);

/// Collocation differentiation matrix D with (D f)_i = p'(x_i), p the
/// interpolant of f on the nodes.
Eigen::MatrixXd differentiation_matrix(std::span<const double> nodes);

/// Lagrange interpolant in barycentric form (second kind).
class Interpolant {
 public:
  Interpolant() = default;
  Interpolant(std::vector<double> nodes, std::vector<double> values);

  [[nodiscard]] double operator()(double x) const;
  [[nodiscard]] const std::vector<double>& nodes() const { return nodes_; }

 private:
  std::vector<double> nodes_;
  std::vector<double> values_;
  std::vector<double> weights_;
};

/// Symmetric Fourier differentiation matrix on n equispaced periodic nodes
/// phi_j = 2 pi j / n, n even. The Nyquist mode is differentiated to zero.
Eigen::MatrixXd fourier_differentiation_matrix(int n);

}  // namespace qlvar::spectral
