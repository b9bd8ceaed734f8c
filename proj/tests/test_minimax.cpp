#include <doctest.h>

#include <cmath>
#include <random>

#include "coqm/minimax.hpp"
#include "coqm/splines.hpp"

using namespace coqm;

TEST_CASE("revised simplex on a small LP") {
  // min -x0 - 2 x1  s.t.  x0 + x1 + s0 = 4,  x1 + s1 = 3.
  Eigen::MatrixXd A(2, 4);
  A << 1, 1, 1, 0, 0, 1, 0, 1;
  Eigen::VectorXd b(2), c(4);
  b << 4, 3;
  c << -1, -2, 0, 0;
  const auto res = solve_lp<double>(A, b, c);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.objective == doctest::Approx(-7.0));
  CHECK(res.x(0) == doctest::Approx(1.0));
  CHECK(res.x(1) == doctest::Approx(3.0));
  CHECK(std::abs(res.duality_gap) <= 1e-9 * (1 + std::abs(res.objective)));
}

TEST_CASE("discrete Chebyshev LP: best constant") {
  Eigen::MatrixXd rows(3, 1);
  rows << 1, 1, 1;
  DiscreteChebyshevLp lp(rows, 1.0);
  for (double g : {0.0, 1.0, 4.0}) lp.add_objective(Eigen::RowVectorXd::Ones(1), g);
  const auto sol = lp.solve();
  CHECK(sol.coeffs(0) == doctest::Approx(2.0));
  CHECK(sol.error == doctest::Approx(2.0));
}

TEST_CASE("trigonometric targets in the space are reproduced") {
  const ApproxResult r = best_approx([](double t) { return std::cos(t); }, 1);
  CHECK(r.error <= 1e-12);
  CHECK(r.approximant.cos_coeffs()(0) == doctest::Approx(1.0));
  const ApproxResult r0 = best_approx([](double t) { return std::cos(t); }, 0);
  CHECK(r0.error == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("local basis evaluates like its trigonometric form") {
  const TrigBasis B = TrigBasis::local(5, 0.3, 0.8);
  Eigen::VectorXd c = Eigen::VectorXd::LinSpaced(B.size(), -1.0, 1.0);
  const TrigPolyd T = B.to_trig(c);
  for (double t : {-0.4, 0.1, 0.9})
    for (int order : {0, 1, 2}) CHECK(B.eval(c, t, order) == doctest::Approx(T.derivative(order)(t)).epsilon(1e-9));
}

TEST_CASE("alternation and monotonicity on a smooth target") {
  auto g = [](double t) { return std::exp(std::sin(t)) + 0.3 * std::cos(3 * t + 0.2); };
  double prev = HUGE_VAL;
  for (int n : {2, 3, 4, 6}) {
    const ApproxResult r = best_approx(g, n);
    CHECK(residual_alternations(g, r, Interval(-kPi, kPi), 1e-6, true) >= 2 * n + 2);
    CHECK(r.error <= prev * (1 + 1e-9));
    CHECK(r.post_check_error == doctest::Approx(r.error).epsilon(1e-8));
    prev = r.error;
  }
}

TEST_CASE("count_alternations") {
  const std::vector<double> xs = {0, 1, 2, 3, 4, 5};
  const std::vector<double> rs = {1, -1, 1, 0.2, -1, 1};
  CHECK(count_alternations(xs, rs, 0.9, false) == 5);
  CHECK(count_alternations(xs, rs, 0.9, true) == 4);
}

TEST_CASE("property: constrained error dominates unconstrained") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<double> a(12), s(12);
    for (int k = 0; k < 12; ++k) {
      a[k] = normal(rng) * std::pow(0.7, k);
      s[k] = normal(rng) * std::pow(0.7, k);
    }
    auto g = [a, s](double t) {
      double v = 0.0;
      for (int k = 0; k < 12; ++k) v += a[k] * std::cos((k + 1) * t) + s[k] * std::sin((k + 1) * t);
      return v;
    };
    const int n = 2 + trial % 3, q = 1 + trial % 3;
    const SignChangeSet Y({-1.0 - 0.1 * trial, 0.5});
    const ApproxResult con = best_co_q_monotone(g, n, q, Y);
    const ApproxResult unc = best_approx(g, n);
    CHECK(con.error >= unc.error * (1 - 1e-9));
    CHECK(con.constraint_ok);
    const ApproxResult con1 = best_co_q_monotone(g, n + 1, q, Y);
    CHECK(con1.error <= con.error * (1 + 1e-7) + 1e-12);
  }
}

TEST_CASE("co-q-monotone: constant optimum for a monotone-violating target") {
  // q = 1 with Y = {-pi/2, pi/2}: T' must be <= 0 on (-pi/2, pi/2); g = sin t needs T' >= 0 there.
  const SignChangeSet Y({-kPi / 2, kPi / 2});
  const ApproxResult r = best_co_q_monotone([](double t) { return std::sin(t); }, 3, 1, Y);
  CHECK(r.constraint_ok);
  CHECK(r.error >= best_approx([](double t) { return std::sin(t); }, 3).error);
  CHECK(r.error <= 1.0 + 1e-9);
}

TEST_CASE("ideal spline of order r is unresolvable under the constraint") {
  const IdealSpline E = build_ideal_spline(1, kPi / 2);
  const SignChangeSet Y({-kPi / 2, 0.0});
  auto f = [&](double x) { return E(x); };
  const ApproxResult c4 = best_co_q_monotone(f, 4, 3, Y, {}, {}, {-kPi / 2, 0.0});
  const ApproxResult c8 = best_co_q_monotone(f, 8, 3, Y, {}, {}, {-kPi / 2, 0.0});
  const ApproxResult u8 = best_approx(f, 8, std::nullopt, {}, {-kPi / 2, 0.0});
  CHECK(c8.error >= 0.3 * c4.error);
  CHECK(u8.error < c8.error);
}

TEST_CASE("validation") {
  MinimaxProblem pb;
  pb.target = [](double t) { return t; };
  pb.degree = -1;
  CHECK_THROWS_AS((void)solve_minimax(pb), ValidationError);
}
