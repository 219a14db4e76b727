#include "qlvar/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qlvar/error.hpp"

namespace qlvar::spectral {

GaussLegendre gauss_legendre(int n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "gauss_legendre needs n >= 1");
  GaussLegendre rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double pi = std::numbers::pi;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? x : p1;
      const double pnm1 = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged root
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double pn = n == 1 ? x : p1;
    const double pnm1 = n == 1 ? 1.0 : p0;
    dp = n * (x * pn - pnm1) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

std::vector<double> barycentric_weights(std::span<const double> nodes) {
  const auto n = nodes.size();
  std::vector<double> w(n, 1.0);
  // log-magnitude accumulation keeps large n from overflowing
  std::vector<double> logw(n, 0.0);
  std::vector<int> sign(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = nodes[i] - nodes[j];
      logw[i] -= std::log(std::abs(d));
      if (d < 0) sign[i] = -sign[i];
    }
  }
  const double maxlog = *std::max_element(logw.begin(), logw.end());
  for (std::size_t i = 0; i < n; ++i) w[i] = sign[i] * std::exp(logw[i] - maxlog);
  return w;
}

Eigen::MatrixXd differentiation_matrix(std::span<const double> nodes) {
  const auto n = static_cast<Eigen::Index>(nodes.size());
  const auto w = barycentric_weights(nodes);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double diag = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      d(i, j) = (w[j] / w[i]) / (nodes[i] - nodes[j]);
      diag -= d(i, j);
    }
    // negative-sum trick: rows annihilate constants exactly
    d(i, i) = diag;
  }
  return d;
}

Interpolant::Interpolant(std::vector<double> nodes, std::vector<double> values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
  if (nodes_.size() != values_.size() || nodes_.empty())
    fail(ErrorCode::InvalidArgument, "interpolant needs matching, non-empty samples");
  weights_ = barycentric_weights(nodes_);
}

double Interpolant::operator()(double x) const {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    const double d = x - nodes_[j];
    if (d == 0.0) return values_[j];
    const double c = weights_[j] / d;
    num += c * values_[j];
    den += c;
  }
  return num / den;
}

Eigen::MatrixXd fourier_differentiation_matrix(int n) {
  if (n < 2 || n % 2 != 0)
    fail(ErrorCode::InvalidArgument, "Fourier differentiation needs an even node count");
  const double h = 2.0 * std::numbers::pi / n;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (j == k) continue;
      const int diff = j - k;
      const double sgn = (diff % 2 == 0) ? 1.0 : -1.0;
      d(j, k) = 0.5 * sgn / std::tan(0.5 * diff * h);
    }
  }
  return d;
}

}  // namespace qlvar::spectral
