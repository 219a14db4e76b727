#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "oracles.hpp"
#include "qlvar/error.hpp"
#include "qlvar/grid.hpp"

using namespace qlvar;

namespace {
double max_abs(const Field& f) { return f.cwiseAbs().maxCoeff(); }
}  // namespace

TEST_CASE("grid layout") {
  const SphereGrid g(8, 16);
  CHECK(g.n_theta() == 8);
  CHECK(g.size() == 128);
  for (int i = 1; i < 8; ++i) CHECK(g.theta(i) > g.theta(i - 1));
  CHECK(g.theta(0) > 0.0);
  CHECK(g.theta(7) < oracle::pi);
  CHECK(g.phi(4) == doctest::Approx(oracle::pi / 2));
  CHECK_THROWS_AS(SphereGrid(1, 16), Error);
  CHECK_THROWS_AS(SphereGrid(8, 15), Error);
}

TEST_CASE("quadrature on the unit sphere") {
  const SphereGrid g(16, 32);
  const Field w = g.sphere_weights();
  CHECK(w.sum() == doctest::Approx(4 * oracle::pi).epsilon(1e-14));
  const Field c2 = g.sample([](double t, double) { return std::cos(t) * std::cos(t); });
  CHECK(c2.cwiseProduct(w).sum() == doctest::Approx(4 * oracle::pi / 3).epsilon(1e-14));
  const Field y = g.sample([](double t, double p) { return std::sin(t) * std::sin(t) * std::cos(2 * p); });
  CHECK(std::abs(y.cwiseProduct(w).sum()) < 1e-14);
  // d theta d phi weights: integral of sin(theta) is the sphere area
  const Field s = g.sample([](double t, double) { return std::sin(t); });
  CHECK(g.integrate_parameter(s) == doctest::Approx(4 * oracle::pi).epsilon(1e-14));
}

TEST_CASE("theta derivative for both parity classes") {
  const SphereGrid g(20, 16);
  const Field x = g.sample([](double t, double p) { return std::sin(t) * std::cos(p); });
  const Field dx = g.sample([](double t, double p) { return std::cos(t) * std::cos(p); });
  CHECK(max_abs(g.d_theta(x, Parity::Even) - dx) < 1e-12);
  const Field ddx = g.sample([](double t, double p) { return -std::sin(t) * std::cos(p); });
  CHECK(max_abs(g.d_theta(dx, Parity::Odd) - ddx) < 1e-12);

  const Field z = g.sample([](double t, double) { return std::cos(t); });
  const Field dz = g.sample([](double t, double) { return -std::sin(t); });
  CHECK(max_abs(g.d_theta(z, Parity::Even) - dz) < 1e-12);
  const Field ddz = g.sample([](double t, double) { return -std::cos(t); });
  CHECK(max_abs(g.d_theta(dz, Parity::Odd) - ddz) < 1e-12);
}

TEST_CASE("theta derivative of a smooth non-polynomial field converges spectrally") {
  auto f = [](double t, double p) {
    const double x = std::sin(t) * std::cos(p), y = std::sin(t) * std::sin(p), z = std::cos(t);
    return std::exp(0.3 * x - 0.2 * y + 0.5 * z);
  };
  auto df = [](double t, double p) {
    const double x = std::sin(t) * std::cos(p), y = std::sin(t) * std::sin(p), z = std::cos(t);
    const double e = std::exp(0.3 * x - 0.2 * y + 0.5 * z);
    return e * (0.3 * std::cos(t) * std::cos(p) - 0.2 * std::cos(t) * std::sin(p) - 0.5 * std::sin(t));
  };
  const SphereGrid coarse(8, 16), fine(24, 48);
  const double e_coarse = max_abs(coarse.d_theta(coarse.sample(f), Parity::Even) - coarse.sample(df));
  const double e_fine = max_abs(fine.d_theta(fine.sample(f), Parity::Even) - fine.sample(df));
  CHECK(e_fine < 1e-11);
  CHECK(e_fine < 1e-3 * e_coarse);
}

TEST_CASE("phi derivative and half turn") {
  const SphereGrid g(6, 12);
  const Field f = g.sample([](double t, double p) { return std::sin(t) * std::sin(3 * p); });
  const Field df = g.sample([](double t, double p) { return 3 * std::sin(t) * std::cos(3 * p); });
  CHECK(max_abs(g.d_phi(f) - df) < 1e-12);
  const Field h = g.half_turn(f);
  const Field expected = g.sample([](double t, double p) { return std::sin(t) * std::sin(3 * (p + oracle::pi)); });
  CHECK(max_abs(h - expected) < 1e-14);
}

TEST_CASE("theta interpolant between nodes") {
  const SphereGrid g(24, 4);
  Eigen::VectorXd even(24), odd(24);
  for (int i = 0; i < 24; ++i) {
    even[i] = 4.0 + 0.1 * std::pow(g.cos_theta(i), 2);
    odd[i] = std::sin(g.theta(i)) * (1 + 0.2 * g.cos_theta(i));
  }
  const ThetaInterpolant pe(g, even, false), po(g, odd, true);
  auto gen = oracle::rng(3);
  std::uniform_real_distribution<double> th(0.0, oracle::pi);
  for (int k = 0; k < 20; ++k) {
    const double t = th(gen);
    const double c = std::cos(t), s = std::sin(t);
    CHECK(pe.value(t) == doctest::Approx(4.0 + 0.1 * c * c).epsilon(1e-13));
    CHECK(pe.derivative(t) == doctest::Approx(-0.2 * c * s).epsilon(1e-11).scale(1.0));
    CHECK(po.value(t) == doctest::Approx(s * (1 + 0.2 * c)).epsilon(1e-13).scale(1.0));
    CHECK(po.derivative(t) == doctest::Approx(c * (1 + 0.2 * c) - 0.2 * s * s).epsilon(1e-11).scale(1.0));
  }
  CHECK(po.value(0.0) == doctest::Approx(0.0).scale(1.0));
}
