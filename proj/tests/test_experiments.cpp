#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <stdexcept>

#include "coqm/experiments.hpp"

using namespace coqm;

TEST_CASE("cell seeds are distinct and deterministic") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(cell_seed(42, i));
  CHECK(seen.size() == 1000);
  CHECK(cell_seed(42, 7) == cell_seed(42, 7));
  CHECK(cell_seed(42, 7) != cell_seed(43, 7));
}

TEST_CASE("parallel_for runs every index once and propagates exceptions") {
  for (int jobs : {1, 3}) {
    std::vector<std::atomic<int>> hits(50);
    parallel_for(50, jobs, [&](int i) { hits[i].fetch_add(1); });
    for (const auto& h : hits) CHECK(h.load() == 1);
    CHECK_THROWS_AS(parallel_for(10, jobs,
                                 [](int i) {
                                   if (i == 6) throw NumericalError("boom");
                                 }),
                    NumericalError);
  }
}

TEST_CASE("ratio oracles") {
  // T = sin nt on b = pi: b ||T'||_{[-pi/2, pi/2]} / (n ||T||) = pi.
  for (int n : {1, 3, 6}) {
    std::vector<double> beta(n, 0.0);
    beta[n - 1] = 1.0;
    CHECK(bernstein_ratio(beta, kPi) == doctest::Approx(kPi).epsilon(1e-10));
  }
  // F_{q-1}: b^{q-2} ||F_1||_{[-b,b]} / ||F_{q-1}||_{[-2b,2b]} = (q-1)! / 2^{q-1}.
  for (int q : {3, 4, 5}) {
    const double b = 0.7;
    const double ratio = lemma_3111_ratio([q](double x) { return f_r(q - 1, x); },
                                          [](double x) { return std::abs(x); }, q, b, std::vector{0.0});
    CHECK(ratio == doctest::Approx(std::tgamma(q) / std::pow(2.0, q - 1)).epsilon(1e-10));
  }
  // The truncated-power family is homogeneous of degree one in its weights.
  const TruncatedPowerFamily f(1, 0.5, {0.2, 0.9}, {1.0, 0.3});
  const TruncatedPowerFamily g(1, 1.0, {0.2, 0.9}, {2.0, 0.6});
  for (double x : {-1.3, 0.1, 1.7}) CHECK(g(x) == doctest::Approx(2 * f(x)));
  // k = 1: f is even and f' = sign(x) h(|x|) with h(t) = 0.5 t + (t - 0.2)_+ + 0.3 (t - 0.9)_+.
  CHECK(f(-0.4) == doctest::Approx(f(0.4)));
  CHECK(f.derivative(0.5, 1) == doctest::Approx(0.55));
  CHECK(f.derivative(-1.0, 1) == doctest::Approx(-1.33));
}

TEST_CASE("report tables") {
  std::vector<Json> cells;
  cells.push_back({{"n", 4}, {"label", "a,b"}});
  cells.push_back({{"n", 8}, {"err", 0.1}});
  CHECK(cells_csv(cells) == "err,label,n\n,\"a,b\",4\n0.10000000000000001,,8\n");
  CHECK(plot_data({"err", {{4, 0.5}, {8, 0.25}}}) == "# err\n4 0.5\n8 0.25\n");
  ExperimentReport rep;
  rep.id = "x";
  rep.assert_that("ok", true, "");
  CHECK(rep.passed());
  rep.assert_that("bad", false, "why", "n=4");
  CHECK_FALSE(rep.passed());
  REQUIRE(rep.failures().size() == 1);
  CHECK(rep.failures()[0].cell == "n=4");
  CHECK_THROWS_AS((void)rep.constant("c0"), ValidationError);
}

TEST_CASE("lemma-22 minimum for q = 3 is one eighth") {
  const ExperimentReport rep = exp_lemma_22(3);
  CHECK(rep.passed());
  for (const Json& c : rep.cells) CHECK(c.at("estimate").get<double>() == doctest::Approx(0.125).epsilon(1e-8));
}

TEST_CASE("experiments are deterministic for a fixed seed") {
  ExperimentOptions o1;
  o1.restarts = 30;
  ExperimentOptions o2 = o1;
  o2.jobs = 2;
  const Json a = to_json(exp_bernstein_interval(kPi / 2, {4, 8}, o1));
  const Json b = to_json(exp_bernstein_interval(kPi / 2, {4, 8}, o2));
  CHECK(a.dump() == b.dump());
  CHECK(a.at("passed").get<bool>());
  ExperimentOptions o3 = o1;
  o3.seed = 1;
  CHECK(to_json(exp_bernstein_interval(kPi / 2, {4, 8}, o3)).dump() != a.dump());

  const Json c = to_json(exp_lemma_3111(3, kPi / 4, o1));
  const Json d = to_json(exp_lemma_3111(3, kPi / 4, o2));
  CHECK(c.dump() == d.dump());
  CHECK(c.at("passed").get<bool>());
}

TEST_CASE("lemma-mod on a small grid") {
  const ExperimentReport rep = exp_lemma_mod({kPi / 2}, {4, 8});
  CHECK(rep.passed());
  CHECK(rep.constant("c1") > 0.0);
  CHECK(rep.constant("c1") < 1.0);
}

TEST_CASE("experiment names") {
  const auto& names = experiment_names();
  CHECK(names.size() == 8);
  CHECK(std::find(names.begin(), names.end(), "calibrate") != names.end());
}
