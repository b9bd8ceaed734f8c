#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "coqm/core.hpp"

using namespace coqm;

TEST_CASE("interval validation") {
  CHECK_THROWS_AS(Interval(1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(Interval(0.0, 7.0), ValidationError);
  const Interval I(-1.0, 2.0);
  CHECK(I.length() == doctest::Approx(3.0));
  CHECK(I.contains(0.5));
  CHECK_FALSE(I.contains(2.5));
}

TEST_CASE("sign change set labelling and signs") {
  CHECK_THROWS_AS(SignChangeSet({0.0, 1.0, 2.0}), ValidationError);
  CHECK_THROWS_AS(SignChangeSet({1.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(SignChangeSet({0.0, 7.0}), ValidationError);
  const SignChangeSet Y({-kPi / 2, 0.0});
  CHECK(Y.s() == 1);
  CHECK(Y.y(2) == -kPi / 2);
  CHECK(Y.y(1) == 0.0);
  CHECK(Y.y(0) == doctest::Approx(-kPi / 2 + kTwoPi));
  // sigma_1 = +1 on (y_1, y_0), sigma_2 = -1 on (y_2, y_1).
  CHECK(Y.required_sign(1.0) == 1);
  CHECK(Y.required_sign(-0.5) == -1);
  CHECK(Y.product(1.0) > 0.0);
  CHECK(Y.product(-0.5) < 0.0);
  CHECK(Y.to_window(-kPi) == doctest::Approx(kPi));
}

TEST_CASE("sup norm is a lower bound that is tight on smooth functions") {
  const double s = sup_norm([](double x) { return std::sin(x); }, Interval(0.0, kPi), {}, 1);
  CHECK(s <= 1.0);
  CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  const double c = sup_norm([](double x) { return std::cos(7 * x) * std::exp(-x * x); }, Interval(-2.0, 2.0), {}, 7);
  CHECK(c == doctest::Approx(1.0).epsilon(1e-12));
  const double k = sup_norm([](double x) { return std::abs(x - 0.3); }, Interval(-1.0, 1.0), {}, 0, std::vector{0.3});
  CHECK(k == doctest::Approx(1.3));
}

TEST_CASE("chebyshev grids") {
  const auto lob = chebyshev_lobatto(-1.0, 2.0, 9);
  REQUIRE(lob.size() == 9);
  CHECK(lob.front() == -1.0);
  CHECK(lob.back() == 2.0);
  CHECK(std::is_sorted(lob.begin(), lob.end()));
  const auto gau = chebyshev_gauss(0.0, 1.0, 5);
  CHECK(gau.front() > 0.0);
  CHECK(gau.back() < 1.0);
  const auto cuts = cut_points(0.0, 1.0, std::vector{0.5, 2.0, -1.0});
  CHECK(cuts == std::vector<double>{0.0, 0.5, 1.0});
}

TEST_CASE("membership report") {
  const SignChangeSet Y({-1.0, 1.0});
  CHECK(delta_q_membership([&](double t) { return Y.product(t); }, Y));
  CHECK_FALSE(delta_q_membership([&](double t) { return -Y.product(t); }, Y));
  CHECK(delta_q_membership([](double) { return 0.0; }, Y));
}

TEST_CASE("property: canonical shift transports membership") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int count = 2 + 2 * (trial % 3);
    std::vector<double> pts;
    for (int i = 0; i < count; ++i) pts.push_back(-kPi + kTwoPi * unit(rng));
    std::sort(pts.begin(), pts.end());
    bool distinct = true;
    for (int i = 1; i < count; ++i) distinct = distinct && pts[i] - pts[i - 1] > 1e-3;
    if (!distinct) continue;
    const SignChangeSet Y(pts);
    const CanonicalShift cs = shift_to_canonical(Y);
    const double b = min_gap(Y);
    CHECK(min_gap(cs.canonical) == doctest::Approx(b).epsilon(1e-12));
    REQUIRE(cs.canonical.points().size() == pts.size());
    CHECK(std::find_if(cs.canonical.points().begin(), cs.canonical.points().end(),
                       [&](double y) { return std::abs(y + b) < 1e-12; }) != cs.canonical.points().end());
    CHECK(std::find_if(cs.canonical.points().begin(), cs.canonical.points().end(),
                       [&](double y) { return std::abs(y) < 1e-12; }) != cs.canonical.points().end());
    // The canonical product is in Delta(canonical); its transport must be in Delta(Y).
    auto dq = [&](double t) { return cs.orientation * cs.canonical.product(cs.canonical.to_window(t + cs.shift)); };
    CHECK(delta_q_membership(dq, Y));
    auto wrong = [&](double t) { return -dq(t); };
    CHECK_FALSE(delta_q_membership(wrong, Y));
  }
}
