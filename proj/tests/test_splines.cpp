#include <doctest.h>

#include <cmath>

#include "coqm/splines.hpp"

using namespace coqm;

TEST_CASE("f_r and gamma_b") {
  CHECK(f_r(1, -2.0) == 2.0);
  CHECK(f_r(2, -2.0) == doctest::Approx(-2.0));
  CHECK(f_r(3, 2.0) == doctest::Approx(8.0 / 6.0));
  CHECK(gamma_b(kPi) == 0.0);
  CHECK(gamma_b(kPi / 2) == doctest::Approx(0.5));
}

TEST_CASE("ideal spline structure") {
  for (int r : {1, 2, 3})
    for (double b : {kPi / 4, kPi / 2, kPi}) {
      CAPTURE(r);
      CAPTURE(b);
      const IdealSpline E = build_ideal_spline(r, b);
      CHECK(std::abs(E.spline().integral()) / kTwoPi <= 1e-12);
      // r-th derivative is sign(x) - gamma_b
      CHECK(E.derivative(0.5 * (kTwoPi - b), r) == doctest::Approx(1.0 - gamma_b(b)));
      CHECK(E.derivative(-0.5 * b, r) == doctest::Approx(-1.0 - gamma_b(b)));
      CHECK(E.derivative(0.3, r + 1) == 0.0);
      // periodicity
      CHECK(E(-b + 1e-3) == doctest::Approx(E(kTwoPi - b + 1e-3)).epsilon(1e-12));
      // E = F_r + p_{r,b} on the window
      const Polynomiald p = residual_polynomial(r, b);
      for (double x : {-b + 0.01, -0.1, 0.2, 1.0, kTwoPi - b - 0.01})
        CHECK(E(x) == doctest::Approx(f_r(r, x) + p(x)).epsilon(1e-12));
      CHECK(p.coeffs()(r) == doctest::Approx(-gamma_b(b) / std::tgamma(r + 1.0)).epsilon(1e-12));
    }
  CHECK_THROWS_AS((void)build_ideal_spline(0, 1.0), ValidationError);
  CHECK_THROWS_AS((void)build_ideal_spline(1, 4.0), ValidationError);
}

TEST_CASE("mollifier transition") {
  auto M = build_mollifier();
  CHECK(M->S(-1.0) == -1.0);
  CHECK(M->S(1.0) == 1.0);
  CHECK(M->S(0.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(M->S(0.3) == doctest::Approx(-M->S(-0.3)).epsilon(1e-13));
  CHECK(M->s_norm(0) == doctest::Approx(1.0));
  CHECK(M->bump_integral() == doctest::Approx(0.4439938161680798).epsilon(1e-14));
  // S' from the table against a central difference of S
  const double h = 1e-5;
  for (double u : {-0.7, -0.2, 0.1, 0.6})
    CHECK(M->derivative(u, 1) == doctest::Approx((M->S(u + h) - M->S(u - h)) / (2 * h)).epsilon(1e-7));
}

TEST_CASE("smooth spline properties") {
  auto M = build_mollifier();
  for (int r : {1, 2}) {
    const double d = kPi / 2;
    const IdealSpline E = build_ideal_spline(r, d);
    for (double lambda : {d / 3, d / 12}) {
      CAPTURE(r);
      CAPTURE(lambda);
      const SmoothSpline S = build_smooth_spline(r, d, lambda, M);
      const auto br = S.zone_boundaries();
      // Norm identity sup|E^(r+j)| lambda^j = s_j.
      for (int j = 1; j <= 2; ++j) {
        const double v = sup_norm([&](double x) { return S.derivative(x, r + j); }, S.window(), {}, 0, br);
        CHECK(v * std::pow(lambda, j) / M->s_norm(j) == doctest::Approx(1.0).epsilon(1e-3));
      }
      // Distance to the ideal spline.
      const double dist = sup_norm([&](double x) { return S(x) - E(x); }, S.window(), {}, 0, br);
      CHECK(dist <= smoothing_distance_constant(r) * lambda);
      // Zero mean.
      CHECK(std::abs(S.spline().integral()) <= 1e-12);
      // Derivative consistency.
      const double x = 0.5 * lambda + 1e-3, h = 1e-6;
      CHECK(S.derivative(x, 1) == doctest::Approx((S(x + h) - S(x - h)) / (2 * h)).epsilon(1e-6));
    }
  }
  CHECK_THROWS_AS((void)build_smooth_spline(1, 1.0, 0.5, M), ValidationError);
}
