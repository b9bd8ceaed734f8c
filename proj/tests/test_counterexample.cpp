#include <doctest.h>

#include <cmath>

#include "coqm/bigrational.hpp"
#include "coqm/counterexample.hpp"

using namespace coqm;

namespace {

/// Measured inputs of a calibration run (q = 3, d = pi), frozen for fast tests.
MeasuredConstants frozen_inputs() {
  MeasuredConstants mc;
  mc.c0 = 1.69203;
  mc.c1 = 0.0947477;
  mc.c2 = 1.72254;
  mc.c3 = 0.229974;
  mc.c4 = 1.54891;
  mc.c5 = 3.07097;
  return mc;
}

const SignChangeSet& canonical_pi() {
  static const SignChangeSet Y({-kPi, 0.0});
  return Y;
}

}  // namespace

TEST_CASE("bigrational helpers") {
  CHECK(exact_rational(0.1) != mpq_class(1, 10));
  CHECK(to_double(exact_rational(0.1)) == 0.1);
  CHECK(ceil_rational(mpq_class(7, 2)) == 4);
  CHECK(ceil_rational(mpq_class(-7, 2)) == -3);
  CHECK(ceil_rational(mpq_class(4)) == 4);
  CHECK(pow_integer(mpz_class(3), 4) == 81);
  CHECK(pow_rational(mpq_class(2, 3), 3) == mpq_class(8, 27));
  CHECK(decimal_digits(mpz_class(100000)) == 6);
  CHECK(parse_rational(to_string(mpq_class(-22, 7))) == mpq_class(-22, 7));
  const mpz_class big = pow_integer(mpz_class(10), 400);
  CHECK(log_integer(big) == doctest::Approx(400 * std::log(10.0)).epsilon(1e-14));
  CHECK(log_rational(mpq_class(1) / mpq_class(big)) == doctest::Approx(-400 * std::log(10.0)).epsilon(1e-14));
}

TEST_CASE("ledger identities") {
  auto M = build_mollifier();
  for (const ConstantsLedger& L : {proven_ledger(3, 3, *M), proven_ledger(4, 6, *M),
                                   empirical_ledger(3, 4, kPi, frozen_inputs(), *M)}) {
    CAPTURE(to_string(L.mode));
    CHECK(L.check().empty());
    CHECK(L.r == L.q - 1);
    CHECK(L.m == L.p - L.r);
    CHECK(L.b_max == doctest::Approx(L.d / 4));
    const double sm = M->s_norm(L.m);
    CHECK(L.c_star == doctest::Approx(1.0 / (40 * L.c0)).epsilon(1e-14));
    CHECK(L.c6 == doctest::Approx(L.c3 / (2 * L.c5)).epsilon(1e-14));
    CHECK(L.c7 == doctest::Approx(std::pow(L.c6, L.m) / sm).epsilon(1e-13));
    CHECK(L.c10 == doctest::Approx(L.c7 * L.c3 / 2).epsilon(1e-13));
    CHECK(L.c9 == doctest::Approx(L.c7 * L.c4 * std::pow(L.b_max, L.r * L.m)).epsilon(1e-13));
    double c8 = 0.0;
    for (int j = 0; j <= L.m; ++j)
      c8 = std::max(c8, std::pow(L.c6, L.m - j) * std::pow(L.b_max, L.r * (L.m - j)) * M->s_norm(j) / sm);
    CHECK(L.c8 == doctest::Approx(c8).epsilon(1e-13));

    ConstantsLedger bad = L;
    bad.c6 *= 1.01;
    CHECK_FALSE(bad.check().empty());
    CHECK(bad.hash() != L.hash());
    ConstantsLedger same = L;
    CHECK(same.hash() == L.hash());
  }
  const ConstantsLedger P = proven_ledger(3, 3, *M);
  CHECK(P.c0 < 10.0);
  CHECK(P.c1 == doctest::Approx(1.0 / (80 * P.c0)));
  CHECK(P.c4 == doctest::Approx(2 * kPi * kPi));
  CHECK(P.c5 == doctest::Approx(8 * kPi));
  CHECK_THROWS_AS((void)proven_ledger(1, 3, *M), ValidationError);
  CHECK_THROWS_AS((void)proven_ledger(3, 2, *M), ValidationError);
}

TEST_CASE("scaled spline construction") {
  auto M = build_mollifier();
  const ConstantsLedger L = empirical_ledger(3, 4, kPi, frozen_inputs(), *M);
  const double b = L.b_max, n = 64;
  CHECK(lambda_n_b(n, b, L) == doctest::Approx(L.c6 * b * b / n));
  const ScaledSpline f = build_f_nb(n, b, kPi, L, M);
  CHECK(f.lambda() == doctest::Approx(lambda_n_b(n, b, L)));
  CHECK(f.amplitude() == doctest::Approx(L.c7 * std::pow(b, L.r * L.m) / std::pow(n, L.m)));
  const RealizationCheck rc = check_f_nb(f, canonical_pi(), 3, L.m);
  CHECK(rc.membership);
  // c7 = c6^m / s_m makes ||f^{(r+m)}|| = c7 (b^{rm} / n^m) s_m / lambda^m exactly 1.
  CHECK(rc.top_derivative_norm == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(rc.top_derivative_norm <= 1.0 + 1e-9);

  CHECK_THROWS_AS((void)build_f_nb(n, 2 * b, kPi, L, M), ValidationError);
  CHECK_THROWS_AS((void)build_f_nb(3 * L.c6 * b * b / 2, b, kPi, L, M), ValidationError);
  CHECK_THROWS_AS((void)build_f_nb(n, -1.0, kPi, L, M), ValidationError);
  CHECK_THROWS_AS((void)build_f_nb(1e30, b, kPi, L, M), NumericalError);
}

TEST_CASE("proven plan with the linear rule verifies exactly") {
  auto M = build_mollifier();
  const ConstantsLedger L = proven_ledger(3, 3, *M);
  const RecursionPlan plan = plan_recursion(canonical_pi(), 3, 3, EpsRule::linear, 2, L);
  REQUIRE(plan.entries.size() == 3);
  CHECK(plan.level(1).n == ceil_rational(3 * exact_rational(L.c6) * exact_rational(kPi) * exact_rational(kPi)));
  CHECK(plan.level(1).b == exact_rational(kPi) / 4);
  for (int k = 1; k < 3; ++k) {
    CHECK(plan.level(k + 1).n >= 2 * plan.level(k).n);
    CHECK(plan.level(k + 1).b < plan.level(k).b);
  }
  const auto items = verify_plan(plan);
  CHECK(plan_ok(items));
  for (const auto& it : items) CHECK(it.exact);

  RecursionPlan tampered = plan;
  tampered.entries[1].n -= 1;
  CHECK_FALSE(plan_ok(verify_plan(tampered)));
  tampered = plan;
  tampered.entries[2].b *= 2;
  CHECK_FALSE(plan_ok(verify_plan(tampered)));
  tampered = plan;
  tampered.entries[2].n += 1;
  CHECK_FALSE(plan_ok(verify_plan(tampered)));

  CHECK_THROWS_AS((void)plan_recursion(canonical_pi(), 3, 3, EpsRule::log, 2, L), NumericalError);
}

TEST_CASE("exp-rule plan on an empirical ledger") {
  auto M = build_mollifier();
  const ConstantsLedger L = empirical_ledger(3, 4, kPi, frozen_inputs(), *M);
  const RecursionPlan plan = plan_recursion(canonical_pi(), 3, 4, EpsRule::exp, 3, L);
  REQUIRE(plan.entries.size() == 4);
  const auto items = verify_plan(plan);
  CHECK(plan_ok(items));
  for (const auto& it : items) {
    CAPTURE(it.condition);
    CHECK(it.exact);
  }
  // Condition (b) at k = 1, recomputed with e_lo.
  const mpq_class e_lo(2718281828, 1000000000);
  const mpq_class lhs = pow_rational(e_lo, plan.level(2).n.get_ui()) * plan.c10 *
                        pow_rational(plan.level(1).b, static_cast<unsigned>(L.r * (L.m + 1)));
  CHECK(lhs >= 1);

  const PartialSum f2 = build_partial_sum(plan, 2, L, M);
  CHECK(f2.K() == 2);
  CHECK(f2.tail_from_next_level());
  const RealizationCheck rc = check_partial_sum(f2, canonical_pi(), 3, 4);
  CHECK(rc.membership);
  CHECK(rc.top_derivative_norm <= 1.0 + 1e-9);
  CHECK(polynomial_fit_residual(f2, to_double(plan.level(2).b), L.r) <= 1e-8);
  CHECK_THROWS_AS((void)build_partial_sum(plan, 3, L, M), NumericalError);
}

TEST_CASE("plan on a non-canonical set is transported") {
  auto M = build_mollifier();
  const SignChangeSet Y({-2.0, 0.5, 1.5, 3.0});
  const double d = min_gap(Y);
  // The proven constants hold for every gap d <= pi; empirical ones only for their own gap.
  const RecursionPlan proven = plan_recursion(Y, 3, 3, EpsRule::linear, 1, proven_ledger(3, 3, *M));
  CHECK(proven.d == doctest::Approx(d));
  CHECK(plan_ok(verify_plan(proven)));
  const ConstantsLedger wrong_gap = empirical_ledger(3, 4, kPi, frozen_inputs(), *M);
  CHECK_THROWS_AS((void)plan_recursion(Y, 3, 4, EpsRule::exp, 1, wrong_gap), ValidationError);

  const ConstantsLedger L = empirical_ledger(3, 4, d, frozen_inputs(), *M);
  const RecursionPlan plan = plan_recursion(Y, 3, 4, EpsRule::exp, 1, L);
  CHECK(plan_ok(verify_plan(plan)));
  const PartialSum f1 = build_partial_sum(plan, 1, L, M);
  const RealizationCheck rc = check_partial_sum(f1, Y, 3, 4);
  CHECK(rc.membership);
  CHECK(rc.top_derivative_norm <= 1.0 + 1e-9);
}
