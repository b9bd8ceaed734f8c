/// Acceptance checks A1..A10: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "coqm/bigrational.hpp"
#include "coqm/counterexample.hpp"
#include "coqm/experiments.hpp"
#include "coqm/minimax.hpp"
#include "coqm/serialize.hpp"
#include "coqm/splines.hpp"

using namespace coqm;

namespace {

/// Outcome of one criterion; failures carry the first violated check.
struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "FAILED " << what << "; ";
    pass = pass && ok;
  }
  template <typename T>
  void note(const std::string& key, const T& value) {
    detail << key << "=" << value << " ";
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

const std::vector<double> kB = {kPi / 4, kPi / 2, kPi};

// A1: period mean, C^{r-1} matching at the breakpoints, sup|E^(r)| = 1 + gamma_b in [1, 2).
void a1(Outcome& o) {
  double worst_mean = 0.0, worst_match = 0.0, worst_top = 0.0;
  for (int r : {1, 2, 3})
    for (double b : kB) {
      const IdealSpline E = build_ideal_spline(r, b);
      const PiecewisePolyd& s = E.spline();
      worst_mean = std::max(worst_mean, std::abs(s.integral()) / kTwoPi);
      for (int j = 0; j < r; ++j) {
        const PiecewisePolyd& dj = E.derivative_pp(j);
        for (std::size_t i = 0; i + 1 < dj.breakpoints().size(); ++i) {
          const double lhs = dj.left_limit(i, 0), rhs = dj.right_limit(i, 0);
          worst_match = std::max(worst_match, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
        }
      }
      const PiecewisePolyd& top = E.derivative_pp(r);
      double sup = 0.0;
      for (std::size_t i = 0; i < top.size(); ++i) {
        const Polynomiald& piece = top.pieces()[i];
        sup = std::max({sup, std::abs(piece(top.breakpoints()[i])), std::abs(piece(top.breakpoints()[i + 1]))});
      }
      const double expect = 1.0 + gamma_b(b);
      o.require(expect >= 1.0 && expect < 2.0, "1 + gamma_b in [1, 2)");
      worst_top = std::max(worst_top, std::abs(sup - expect));
    }
  o.require(worst_mean <= 1e-8, "period mean <= 1e-8");
  o.require(worst_match <= 1e-10, "C^{r-1} matching <= 1e-10");
  o.require(worst_top <= 4 * std::numeric_limits<double>::epsilon(), "sup|E^(r)| = 1 + gamma_b");
  o.note("mean", g(worst_mean));
  o.note("match", g(worst_match));
  o.note("top", g(worst_top));
}

// A2: E - F_r is a degree-r polynomial on the window with leading coefficient -gamma_b / r!.
void a2(Outcome& o) {
  double worst_res = 0.0, worst_lead = 0.0;
  for (int r : {1, 2, 3})
    for (double b : kB) {
      const IdealSpline E = build_ideal_spline(r, b);
      const auto xs = chebyshev_gauss(-b, kTwoPi - b, 2000);
      Eigen::MatrixXd A(static_cast<Eigen::Index>(xs.size()), r + 1);
      Eigen::VectorXd y(A.rows());
      for (Eigen::Index i = 0; i < A.rows(); ++i) {
        const double x = xs[static_cast<std::size_t>(i)];
        for (int j = 0; j <= r; ++j) A(i, j) = std::pow(x, j);
        y(i) = E(x) - f_r(r, x);
      }
      const Eigen::VectorXd c = A.colPivHouseholderQr().solve(y);
      worst_res = std::max(worst_res, (A * c - y).cwiseAbs().maxCoeff());
      worst_lead = std::max(worst_lead, std::abs(c(r) + gamma_b(b) / std::tgamma(r + 1.0)));
    }
  o.require(worst_res <= 1e-8, "fit residual <= 1e-8");
  o.require(worst_lead <= 1e-8, "leading coefficient within 1e-8");
  o.note("residual", g(worst_res));
  o.note("lead", g(worst_lead));
}

// A3: norm ratios, support of the (r+j)-th derivatives, distance to the ideal spline.
void a3(Outcome& o) {
  auto M = build_mollifier();
  double lo_ratio = HUGE_VAL, hi_ratio = 0.0, worst_ratio_dist = 0.0;
  double dist_lo = HUGE_VAL, dist_hi = 0.0;
  long outside = 0, nonzero_outside = 0;
  for (int r : {1, 2, 3})
    for (double d : {kPi / 2, kPi}) {
      const IdealSpline E = build_ideal_spline(r, d);
      std::vector<double> dist;
      for (double lambda : {d / 3, d / 6, d / 12, d / 24}) {
        const SmoothSpline S = build_smooth_spline(r, d, lambda, M);
        const auto br = S.zone_boundaries();
        if (lambda == d / 3 || lambda == d / 12)
          for (int j = 1; j <= 2; ++j) {
            const double v = sup_norm([&](double x) { return S.derivative(x, r + j); }, S.window(), {}, 0, br);
            const double ratio = v * std::pow(lambda, j) / M->s_norm(j);
            lo_ratio = std::min(lo_ratio, ratio);
            hi_ratio = std::max(hi_ratio, ratio);
          }
        const int samples = 20000;
        for (int i = 0; i < samples; ++i) {
          const double x = -d + kTwoPi * (i + 0.5) / samples;
          const bool in_zone = (x >= -d + lambda && x <= -d + 3 * lambda) || (x >= lambda && x <= 3 * lambda);
          if (in_zone) continue;
          ++outside;
          for (int j = 1; j <= 2; ++j)
            if (S.derivative(x, r + j) != 0.0) ++nonzero_outside;
        }
        const double dd = sup_norm([&](double x) { return S(x) - E(x); }, S.window(), {}, 0, br);
        worst_ratio_dist = std::max(worst_ratio_dist, dd / (smoothing_distance_constant(r) * lambda));
        dist.push_back(dd);
      }
      for (std::size_t i = 1; i < dist.size(); ++i) {
        dist_lo = std::min(dist_lo, dist[i] / dist[i - 1]);
        dist_hi = std::max(dist_hi, dist[i] / dist[i - 1]);
      }
    }
  o.require(lo_ratio >= 0.99 && hi_ratio <= 1.01, "norm ratios in [0.99, 1.01]");
  o.require(nonzero_outside == 0, "derivatives vanish outside the zones");
  o.require(worst_ratio_dist <= 1.0, "distance <= 8 pi^{r-1} lambda");
  o.require(dist_lo >= 0.3 && dist_hi <= 0.7, "distance halving ratios in [0.3, 0.7]");
  o.note("ratios", "[" + g(lo_ratio) + ", " + g(hi_ratio) + "]");
  o.note("outside_samples", outside);
  o.note("dist/bound", g(worst_ratio_dist));
  o.note("halving", "[" + g(dist_lo) + ", " + g(dist_hi) + "]");
}

/// Random analytic function: trigonometric series with geometrically decaying coefficients.
RealFunction random_smooth(std::mt19937_64& rng, double rho) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> a(41), s(41);
  for (int k = 0; k <= 40; ++k) {
    a[k] = normal(rng) * std::pow(rho, k);
    s[k] = k == 0 ? 0.0 : normal(rng) * std::pow(rho, k);
  }
  return [a, s](double t) {
    double v = 0.0;
    for (int k = 0; k <= 40; ++k) v += a[k] * std::cos(k * t) + s[k] * std::sin(k * t);
    return v;
  };
}

// A4: alternation, constrained >= unconstrained, degree monotonicity.
void a4(Outcome& o) {
  std::mt19937_64 rng(20240601);
  int min_excess = 1 << 20;
  for (int t = 0; t < 20; ++t) {
    const auto gfun = random_smooth(rng, 0.8);
    const int n = 1 + (t * 5) % 16;
    const ApproxResult res = best_approx(gfun, n);
    const int alt = residual_alternations(gfun, res, Interval(-kPi, kPi), 1e-6, true);
    min_excess = std::min(min_excess, alt - (2 * n + 2));
  }
  o.require(min_excess >= 0, "alternations >= 2n + 2 for 20 targets");
  o.note("min(alt-(2n+2))", min_excess);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int dominated = 0, monotone = 0, feasible = 0;
  const int runs = 200;
  for (int t = 0; t < runs; ++t) {
    const auto gfun = random_smooth(rng, 0.7);
    const int count = t % 2 == 0 ? 2 : 4;
    std::vector<double> pts;
    while (true) {
      pts.clear();
      for (int i = 0; i < count; ++i) pts.push_back(-kPi + kTwoPi * unit(rng));
      std::sort(pts.begin(), pts.end());
      bool ok = true;
      for (int i = 0; i < count; ++i) {
        const double gap = i + 1 < count ? pts[i + 1] - pts[i] : pts[0] + kTwoPi - pts[i];
        ok = ok && gap >= 0.3;
      }
      if (ok) break;
    }
    const SignChangeSet Y(pts);
    const int q = 1 + t % 3, n = 1 + (t / 3) % 6;
    const ApproxResult unc = best_approx(gfun, n), unc1 = best_approx(gfun, n + 1);
    const ApproxResult con = best_co_q_monotone(gfun, n, q, Y), con1 = best_co_q_monotone(gfun, n + 1, q, Y);
    const double tol = 1e-9 * std::max(1.0, unc.error);
    if (con.error >= unc.error - tol && con1.error >= unc1.error - tol) ++dominated;
    if (unc1.error <= unc.error + tol && con1.error <= con.error * (1 + 1e-7) + tol) ++monotone;
    if (con.constraint_ok && con1.constraint_ok) ++feasible;
  }
  o.require(dominated == runs, "constrained >= unconstrained in all runs");
  o.require(monotone == runs, "degree monotonicity in all runs");
  o.require(feasible == runs, "constraint post-check in all runs");
  o.note("dominated", std::to_string(dominated) + "/" + std::to_string(runs));
  o.note("monotone", std::to_string(monotone) + "/" + std::to_string(runs));
  o.note("feasible", std::to_string(feasible) + "/" + std::to_string(runs));
}

void report_outcome(Outcome& o, const ExperimentReport& rep) {
  for (const ReportAssertion& a : rep.failures()) o.require(false, a.name + (a.cell.empty() ? "" : " [" + a.cell + "]"));
  o.require(rep.passed(), rep.id + " passed");
}

// A5: lemma-mod contrast.
void a5(Outcome& o) {
  const ExperimentReport rep = exp_lemma_mod({kPi / 2, kPi}, {4, 8, 16, 32});
  report_outcome(o, rep);
  double lo = HUGE_VAL, hi = 0.0, linear = 0.0;
  for (const Json& c : rep.cells) {
    const double k = c.at("kappa").get<double>();
    lo = std::min(lo, k);
    hi = std::max(hi, k);
    linear = std::max(linear, c.at("linear_term_change").get<double>());
  }
  o.require(lo > 0.0 && hi / lo <= 2.0, "kappa positive, max/min <= 2");
  o.require(linear <= 1e-7, "change under an added linear term <= 1e-7");
  o.note("kappa", "[" + g(lo) + ", " + g(hi) + "]");
  o.note("linear_change", g(linear));
}

double cell_value(const Json& c, const char* key) { return c.at(key).get<double>(); }

// A6: constrained error does not decay, unconstrained error does.
void a6(Outcome& o) {
  const ExperimentReport rep = exp_theorem_12(3, SignChangeSet({-kPi / 2, 0.0}), {4, 8, 16, 32});
  report_outcome(o, rep);
  const double first = cell_value(rep.cells.front(), "constrained_error");
  double mn = HUGE_VAL;
  for (const Json& c : rep.cells) mn = std::min(mn, cell_value(c, "constrained_error"));
  const double drop = cell_value(rep.cells.front(), "unconstrained_error") / cell_value(rep.cells.back(), "unconstrained_error");
  o.require(mn / first >= 0.3, "min / first >= 0.3");
  o.require(drop >= 3.0, "unconstrained drop >= 3x");
  o.note("min/first", g(mn / first));
  o.note("drop", g(drop));
}

// A7: n E_n^(3) stays bounded away from zero, unconstrained error drops fast.
void a7(Outcome& o) {
  const ExperimentReport rep = exp_theorem_13(3, SignChangeSet({-kPi / 2, 0.0}), {4, 8, 16, 32});
  report_outcome(o, rep);
  double lo = HUGE_VAL, hi = 0.0;
  for (const Json& c : rep.cells) {
    const double v = c.at("n").get<double>() * cell_value(c, "constrained_error");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double drop = cell_value(rep.cells.front(), "unconstrained_error") / cell_value(rep.cells.back(), "unconstrained_error");
  o.require(lo > 0.0 && hi / lo <= 3.0, "n E positive, max/min <= 3");
  o.require(drop >= 8.0, "unconstrained drop >= 8x");
  o.note("nE", "[" + g(lo) + ", " + g(hi) + "]");
  o.note("drop", g(drop));
}

// A8: counterexample machinery with the calibrated (empirical) ledger.
void a8(Outcome& o) {
  auto M = build_mollifier();
  const Calibration cal = calibrate_constants(3, 4, kPi, M);
  const ConstantsLedger& L = cal.ledger;
  report_outcome(o, cal.report);
  o.require(L.mode == LedgerMode::empirical && L.check().empty(), "ledger identities");
  const SignChangeSet canon({-L.d, 0.0});

  double worst_top = 0.0;
  for (double n : {16.0, 64.0, 256.0}) {
    const ScaledSpline f = build_f_nb(n, L.b_max, L.d, L, M);
    const RealizationCheck rc = check_f_nb(f, canon, L.q, L.m);
    o.require(rc.membership, "f_{n,b} membership");
    worst_top = std::max(worst_top, rc.top_derivative_norm);
  }
  o.require(worst_top <= 1.0 + 1e-6, "||f_{n,b}^(r+m)|| <= 1 + 1e-6");

  const RecursionPlan plan = plan_recursion(canon, 3, 4, EpsRule::exp, 3, L);
  const auto items = verify_plan(plan);
  bool exact = true;
  for (const PlanCheckItem& it : items) exact = exact && it.exact;
  o.require(plan_ok(items) && exact, "K = 3 plan verifies exactly");

  const PartialSum f2 = build_partial_sum(plan, 2, L, M);
  const RealizationCheck rc2 = check_partial_sum(f2, canon, 3, 4);
  o.require(rc2.membership, "f_2 membership");
  o.require(rc2.top_derivative_norm <= 1.0 + 1e-6, "||f_2^(p)|| <= 1 + 1e-6");

  const ExperimentReport aux = exp_lemma_aux({8, 16}, L.b_max, 3, 4, L, M);
  report_outcome(o, aux);
  const double measured = aux.constant("c10_measured");
  o.require(measured >= 0.3 * L.c10, "measured floor >= 0.3 c10");
  o.note("top_fnb", g(worst_top));
  o.note("top_f2", g(rc2.top_derivative_norm));
  o.note("c10", g(L.c10));
  o.note("measured", g(measured));
}

// A9: proven-constants plan in exact arithmetic.
void a9(Outcome& o) {
  auto M = build_mollifier();
  const ConstantsLedger L = proven_ledger(3, 3, *M);
  const RecursionPlan plan = plan_recursion(SignChangeSet({-kPi, 0.0}), 3, 3, EpsRule::linear, 2, L);
  const auto items = verify_plan(plan);
  bool exact = true;
  for (const PlanCheckItem& it : items) exact = exact && it.exact;
  o.require(plan.entries.size() == 3, "three levels");
  o.require(plan_ok(items) && exact, "plan verifies exactly");
  std::string digits;
  for (const PlanEntry& e : plan.entries) digits += (digits.empty() ? "" : ",") + std::to_string(decimal_digits(e.n));
  o.note("n_digits", digits);
}

// A10: same seed, same numbers (also across thread counts).
void a10(Outcome& o) {
  ExperimentOptions one;
  one.restarts = 50;
  ExperimentOptions two = one;
  two.jobs = 2;
  const std::vector<std::pair<std::string, std::function<ExperimentReport(const ExperimentOptions&)>>> runs = {
      {"bernstein", [](const ExperimentOptions& op) { return exp_bernstein_interval(kPi / 2, {4, 8}, op); }},
      {"lemma-mod", [](const ExperimentOptions& op) { return exp_lemma_mod({kPi / 2}, {4, 8}, op); }},
      {"lemma-3111", [](const ExperimentOptions& op) { return exp_lemma_3111(3, kPi / 4, op); }},
      {"lemma-22", [](const ExperimentOptions& op) { return exp_lemma_22(4, {16, 32}, op); }},
      {"thm-12", [](const ExperimentOptions& op) {
         return exp_theorem_12(3, SignChangeSet({-kPi / 2, 0.0}), {4, 8}, op);
       }}};
  for (const auto& [name, fn] : runs) {
    const std::string a = to_json(fn(one)).dump();
    const std::string b = to_json(fn(one)).dump();
    const std::string c = to_json(fn(two)).dump();
    o.require(a == b, name + " reproducible");
    o.require(a == c, name + " independent of jobs");
    o.note(name, fnv1a_hex(a));
  }
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    const char* title;
    void (*fn)(Outcome&);
    double budget_seconds;  // 0: no runtime bound
  };
  const std::vector<Criterion> criteria = {
      {"A1", "ideal spline exactness", a1, 1.0},
      {"A2", "residual polynomial of the ideal spline", a2, 0.0},
      {"A3", "mollified spline norms, support, distance", a3, 10.0},
      {"A4", "solver alternation, domination, monotonicity", a4, 0.0},
      {"A5", "modulus contrast on [-b, b]", a5, 60.0},
      {"A6", "constrained non-decay for E_{1,pi/2}", a6, 120.0},
      {"A7", "constrained 1/n rate for E_{2,pi/2}", a7, 120.0},
      {"A8", "counterexample machinery, empirical ledger", a8, 300.0},
      {"A9", "proven-constants plan", a9, 10.0},
      {"A10", "determinism", a10, 0.0},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      c.fn(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = seconds_since(t0);
    if (c.budget_seconds > 0) o.require(secs < c.budget_seconds, "runtime < " + g(c.budget_seconds) + " s");
    failures += o.pass ? 0 : 1;
    std::printf("%-4s %s  %s (%.2f s)  %s\n", c.id, o.pass ? "PASS" : "FAIL", c.title, secs, o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
