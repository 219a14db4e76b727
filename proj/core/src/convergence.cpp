#include "qlvar/convergence.hpp"

#include <cmath>

#include "qlvar/error.hpp"

namespace qlvar::convergence {

double central(double f_plus, double f_minus, double h) { return (f_plus - f_minus) / (2.0 * h); }

double richardson(double at_h, double at_2h, double p) {
  const double k = std::pow(2.0, p);
  return (k * at_h - at_2h) / (k - 1.0);
}

OrderEstimate three_level_order(double at_2h, double at_h, double at_half, double floor) {
  const double coarse = std::abs(at_2h - at_h);
  const double fine = std::abs(at_h - at_half);
  if (fine <= floor || coarse <= floor) return {0.0, false};
  return {std::log2(coarse / fine), true};
}

LadderFit fit_order(std::span<const double> h, std::span<const double> residual, double floor) {
  if (h.size() != residual.size() || h.size() < 2)
    fail(ErrorCode::InvalidArgument, "ladder needs matching spacing and residual lists");
  LadderFit fit;
  for (std::size_t k = 1; k < h.size(); ++k) {
    if (residual[k] > residual[k - 1] && residual[k] > floor) fit.monotone = false;
    if (residual[k] > floor && residual[k - 1] > floor)
      fit.local_orders.push_back(std::log(residual[k - 1] / residual[k]) / std::log(h[k - 1] / h[k]));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (!(residual[k] > floor)) continue;
    const double x = std::log(h[k]);
    const double y = std::log(residual[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  fit.levels_used = n;
  if (n < 2) return fit;
  const double den = n * sxx - sx * sx;
  if (den == 0.0) return fit;
  fit.order = (n * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.order * sx) / n;
  fit.measurable = true;
  return fit;
}

}  // namespace qlvar::convergence
