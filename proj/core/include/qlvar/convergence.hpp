#pragma once

#include <span>
#include <vector>

namespace qlvar::convergence {

/// Central difference (f(t+h) - f(t-h)) / 2h.
[[nodiscard]] double central(double f_plus, double f_minus, double h);

/// Richardson combination of two estimates of order p taken at steps h and 2h.
[[nodiscard]] double richardson(double at_h, double at_2h, double p = 2.0);

struct OrderEstimate {
  double order = 0.0;
  bool measurable = false;
};

/// Observed order from estimates at 2h, h, h/2:
/// log2(|D(2h) - D(h)| / |D(h) - D(h/2)|). Differences below `floor` are
/// round-off and make the order unmeasurable.
[[nodiscard]] OrderEstimate three_level_order(double at_2h, double at_h, double at_half,
                                              double floor);

/// Least-squares fit log(residual) = p log(h) + c over ladder levels whose
/// residual lies above `floor`.
struct LadderFit {
  double order = 0.0;
  double intercept = 0.0;
  int levels_used = 0;
  bool monotone = true;
  bool measurable = false;
  std::vector<double> local_orders;
};

[[nodiscard]] LadderFit fit_order(std::span<const double> h, std::span<const double> residual,
                                  double floor = 0.0);

}  // namespace qlvar::convergence
