#pragma once

#include <functional>
#include <string>

#include "qlvar/ambient.hpp"
#include "qlvar/grid.hpp"
#include "qlvar/surface.hpp"

namespace qlvar::embedding {

/// Axisymmetric metric E(theta) dtheta^2 + G(theta) dphi^2 on S^2, carried as
/// E, w = sqrt(G) and dw/dtheta.
struct AxiMetric {
  std::function<double(double)> E;
  std::function<double(double)> w;
  std::function<double(double)> dw;

  [[nodiscard]] double G(double theta) const {
    const double v = w(theta);
    return v * v;
  }

  /// r0^2 (dtheta^2 + sin^2 theta dphi^2).
  static AxiMetric round(double r0);
  /// Interpolates E and G sampled on the theta nodes of `grid`.
  static AxiMetric from_samples(const SphereGrid& grid, const Eigen::VectorXd& e,
                                const Eigen::VectorXd& g);
  /// Metric induced on the graph r = rho(theta), psi = theta, by
  /// u^4 (Schwarzschild of the metric's base mass).
  static AxiMetric from_profile(const ambient::AmbientMetric& metric,
                                std::function<double(double)> rho,
                                std::function<double(double)> drho);
};

struct SolverReport {
  int steps = 0;
  int rhs_evaluations = 0;
  double min_radicand = 0.0;  // min of E n - w'^2 relative to E
  double min_rho = 0.0;
  std::string anchor = "equator";
  std::string branch = "convex";
};

struct EmbeddingResult {
  surface::AxiProfile profile;
  double residual = 0.0;
  SolverReport solver_report;
};

struct EmbeddingOptions {
  double ode_tolerance = 1e-12;   // absolute and relative
  double tolerance = 1e-8;        // max induced-metric mismatch accepted
  double pole_tolerance = 1e-6;   // |w'(pole)^2 - E(pole)| relative to E(pole)
  double radicand_floor = 1e-10;  // negative radicand tolerated, relative to E
};

/// rho == r0, psi_bar == theta on the grid's theta nodes.
[[nodiscard]] surface::AxiProfile embed_round(double r0, const ambient::StaticSpace& space,
                                              const SphereGrid& grid);

/// Surface of revolution in `space` whose induced metric is `metric`. The
/// solve is anchored on the parameter equator (psi_bar = pi/2) and integrated
/// towards both poles on the convex branch.
[[nodiscard]] EmbeddingResult embed_axisymmetric(const AxiMetric& metric,
                                                 const ambient::StaticSpace& space,
                                                 const SphereGrid& grid,
                                                 const EmbeddingOptions& options = {});

/// Max over theta nodes of |gamma - target| over (E, G), the induced metric
/// being computed by spectral differentiation of the profile's positions.
[[nodiscard]] double embedding_residual(const surface::AxiProfile& profile, const AxiMetric& metric,
                                        const ambient::StaticSpace& space, const SphereGrid& grid);

/// E n - w'^2 with n = 1 - 2m sin^2(psi_bar)/rho; negative means no convex
/// branch through (rho, psi_bar) at this theta.
[[nodiscard]] double radicand(const AxiMetric& metric, const ambient::StaticSpace& space,
                              double theta, double rho, double psi_bar);

}  // namespace qlvar::embedding
