#include "coqm/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "coqm/lp.hpp"
#include "coqm/minimax.hpp"

namespace coqm {

std::uint64_t cell_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

void parallel_for(int count, int jobs, const std::function<void(int)>& body) {
  require(jobs >= 1, "jobs must be >= 1");
  const int workers = std::min(jobs, count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(run);
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fixed(double v, int digits = 6) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

std::string cell_name(const char* key, double v) { return std::string(key) + "=" + fixed(v); }

void validate_common(const ExperimentOptions& o) {
  require(o.jobs >= 1, "jobs must be >= 1");
  require(o.restarts >= 1, "restarts must be >= 1");
}

void validate_n_list(const std::vector<int>& n_list) {
  require(!n_list.empty(), "n list must not be empty");
  for (int n : n_list) require(n >= 1, "every n must be >= 1");
  require(std::is_sorted(n_list.begin(), n_list.end()), "n list must be ascending");
}

/// Coordinate hill climbing on a maximization; steps halve from `step` down to
/// 1e-4 * step. `project` maps a trial point back into the admissible set.
double hill_climb(const std::function<double(const std::vector<double>&)>& objective, std::vector<double>& x,
                  double step, const std::function<void(std::vector<double>&)>& project) {
  double best = objective(x);
  for (double s = step; s >= 1e-4 * step; s *= 0.5) {
    for (int sweep = 0; sweep < 20; ++sweep) {
      bool improved = false;
      for (std::size_t i = 0; i < x.size(); ++i)
        for (double dir : {1.0, -1.0}) {
          std::vector<double> y = x;
          y[i] += dir * s;
          project(y);
          const double v = objective(y);
          if (v > best) {
            best = v;
            x = std::move(y);
            improved = true;
            break;
          }
        }
      if (!improved) break;
    }
  }
  return best;
}

void normalize_max(std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  if (m > 0.0)
    for (double& v : x) v /= m;
}

PlotSeries series(std::string name, const std::vector<Json>& cells, const char* x, const char* y) {
  PlotSeries s{std::move(name), {}};
  for (const Json& c : cells) s.points.emplace_back(c.at(x).get<double>(), c.at(y).get<double>());
  return s;
}

double max_of(const std::vector<Json>& cells, const char* key) {
  double m = -std::numeric_limits<double>::infinity();
  for (const Json& c : cells) m = std::max(m, c.at(key).get<double>());
  return m;
}

double min_of(const std::vector<Json>& cells, const char* key) {
  double m = std::numeric_limits<double>::infinity();
  for (const Json& c : cells) m = std::min(m, c.at(key).get<double>());
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// Bernstein inequality on an interval

double bernstein_ratio(const std::vector<double>& sin_coeffs, double b) {
  const int n = static_cast<int>(sin_coeffs.size());
  require(n >= 1, "bernstein_ratio: need at least one coefficient");
  auto T = [&](double t) {
    double s = 0.0;
    for (int k = 1; k <= n; ++k) s += sin_coeffs[k - 1] * std::sin(k * t);
    return s;
  };
  auto dT = [&](double t) {
    double s = 0.0;
    for (int k = 1; k <= n; ++k) s += k * sin_coeffs[k - 1] * std::cos(k * t);
    return s;
  };
  // |T| and |T'| are even, so half intervals suffice.
  const double den = sup_norm(T, Interval(0.0, b), {}, n);
  if (!(den > 0.0)) return 0.0;
  const double num = sup_norm(dT, Interval(0.0, b / 2), {}, n);
  return b * num / (n * den);
}

ExperimentReport exp_bernstein_interval(double b, const std::vector<int>& n_list, const ExperimentOptions& options) {
  const auto t0 = Clock::now();
  require(b > 0.0 && b < kPi, "bernstein: b must lie in (0, pi)");
  validate_n_list(n_list);
  validate_common(options);
  ExperimentReport rep;
  rep.id = "bernstein";
  rep.seed = options.seed;
  rep.parameters = {{"b", b}, {"n", n_list}, {"restarts", options.restarts}};
  rep.cells.resize(n_list.size());
  parallel_for(static_cast<int>(n_list.size()), options.jobs, [&](int i) {
    const int n = n_list[i];
    std::mt19937_64 rng(cell_seed(options.seed, static_cast<std::uint64_t>(i)));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> best(n, 0.0);
    double best_random = -1.0;
    for (int t = 0; t < options.restarts; ++t) {
      std::vector<double> c(n);
      for (double& v : c) v = normal(rng);
      const double rho = bernstein_ratio(c, b);
      if (rho > best_random) {
        best_random = rho;
        best = c;
      }
    }
    normalize_max(best);
    const double climbed = hill_climb([&](const std::vector<double>& c) { return bernstein_ratio(c, b); }, best,
                                      0.25, [](std::vector<double>&) {});
    std::vector<double> single(n, 0.0);
    single[n - 1] = 1.0;
    const double sin_nt = bernstein_ratio(single, b);
    rep.cells[i] = {{"n", n},
                    {"rho_random_max", best_random},
                    {"rho_hill_climb", climbed},
                    {"rho_sin_nt", sin_nt},
                    {"rho_max", std::max({best_random, climbed, sin_nt})}};
  });
  for (const Json& c : rep.cells) {
    const double rho = c.at("rho_max").get<double>();
    const std::string cell = cell_name("n", c.at("n").get<double>());
    rep.assert_that("rho < 10", rho < 10.0, "rho = " + fixed(rho), cell);
    rep.assert_that("rho > 0", rho > 0.0, "rho = " + fixed(rho), cell);
  }
  rep.add_constant("c0", max_of(rep.cells, "rho_max"), LedgerMode::empirical,
                   "||T'||_[-b/2,b/2] <= (c0/b) n ||T||_[-b,b] for odd T of degree n");
  rep.plots.push_back(series("rho_max", rep.cells, "n", "rho_max"));
  rep.runtime_seconds = seconds_since(t0);
  return rep;
}

// ---------------------------------------------------------------------------
// Approximation of |x| on [-b, b]

ExperimentReport exp_lemma_mod(const std::vector<double>& b_list, const std::vector<int>& n_list,
                               const ExperimentOptions& options) {
  const auto t0 = Clock::now();
  require(!b_list.empty(), "lemma-mod: b list must not be empty");
  for (double b : b_list) require(b > 0.0 && b <= kPi, "lemma-mod: b must lie in (0, pi]");
  validate_n_list(n_list);
  validate_common(options);
  ExperimentReport rep;
  rep.id = "lemma-mod";
  rep.seed = options.seed;
  rep.parameters = {{"b", b_list}, {"n", n_list}, {"linear_term", {{"a", 0.3}, {"slope", 0.7}}}};
  const int nb = static_cast<int>(b_list.size()), nn = static_cast<int>(n_list.size());
  rep.cells.resize(static_cast<std::size_t>(nb * nn));
  const RealFunction F1 = [](double x) { return std::abs(x); };
  const RealFunction F1l = [](double x) { return std::abs(x) + 0.3 + 0.7 * x; };
  parallel_for(nb * nn, options.jobs, [&](int idx) {
    const double b = b_list[idx / nn];
    const int n = n_list[idx % nn];
    const Interval I(-b, b);
    const ApproxResult plain = best_approx(F1, n, I, {}, {0.0});
    MinimaxProblem pb;
    pb.degree = n;
    pb.domain = I;
    pb.breakpoints = {0.0};
    pb.free_poly_degree = 1;
    pb.target = F1;
    const ApproxResult free = solve_minimax(pb);
    pb.target = F1l;
    const ApproxResult free_l = solve_minimax(pb);
    const ApproxResult plain_l = best_approx(F1l, n, I, {}, {0.0});
    rep.cells[idx] = {{"b", b},
                      {"n", n},
                      {"error", plain.error},
                      {"post_check_error", plain.post_check_error},
                      {"kappa", n * plain.error / b},
                      {"error_free_linear", free.error},
                      {"error_free_linear_plus_l", free_l.error},
                      {"linear_term_change", std::abs(free_l.error - free.error)},
                      {"kappa_plus_l", n * plain_l.error / b}};
  });
  const double kmin = min_of(rep.cells, "kappa"), kmax = max_of(rep.cells, "kappa");
  rep.assert_that("kappa > 0", kmin > 0.0, "min kappa = " + fixed(kmin));
  rep.assert_that("kappa max/min <= 2", kmax <= 2.0 * kmin, "ratio = " + fixed(kmax / kmin));
  for (int ib = 0; ib < nb; ++ib)
    for (int in = 0; in + 1 < nn; ++in) {
      if (n_list[in + 1] != 2 * n_list[in]) continue;
      const double e0 = rep.cells[ib * nn + in].at("error").get<double>();
      const double e1 = rep.cells[ib * nn + in + 1].at("error").get<double>();
      const double ratio = e1 / e0;
      rep.assert_that("doubling n scales the error by [0.4, 0.6]", ratio >= 0.4 && ratio <= 0.6,
                      "E_2n/E_n = " + fixed(ratio),
                      cell_name("b", b_list[ib]) + " " + cell_name("n", n_list[in]));
    }
  for (const Json& c : rep.cells) {
    const double change = c.at("linear_term_change").get<double>();
    rep.assert_that("linear term invariance <= 1e-7", change <= 1e-7, "change = " + fixed(change),
                    cell_name("b", c.at("b").get<double>()) + " " + cell_name("n", c.at("n").get<double>()));
  }
  rep.add_constant("c1", kmin, LedgerMode::empirical, "||F_1 - T_n||_[-b,b] >= c1 b / n");
  for (double b : b_list) {
    PlotSeries s{"kappa_b" + fixed(b, 4), {}};
    for (const Json& c : rep.cells)
      if (c.at("b").get<double>() == b) s.points.emplace_back(c.at("n").get<double>(), c.at("kappa").get<double>());
    rep.plots.push_back(std::move(s));
  }
  rep.runtime_seconds = seconds_since(t0);
  return rep;
}

// ---------------------------------------------------------------------------
// Derivative bound for functions with convex/concave (q-2)-nd derivative

TruncatedPowerFamily::TruncatedPowerFamily(int k, double slope, std::vector<double> knots,
                                           std::vector<double> weights)
    : k_(k), slope_(slope), knots_(std::move(knots)), weights_(std::move(weights)) {
  require(k >= 1, "TruncatedPowerFamily: k must be >= 1");
  require(knots_.size() == weights_.size(), "TruncatedPowerFamily: knots and weights differ in length");
  for (double t : knots_) require(t >= 0.0, "TruncatedPowerFamily: knots must be >= 0");
  for (double w : weights_) require(w >= 0.0, "TruncatedPowerFamily: weights must be >= 0");
}

double TruncatedPowerFamily::derivative(double x, int order) const {
  require(order >= 0 && order <= k_, "TruncatedPowerFamily: derivative order must lie in [0, k]");
  const double t = std::abs(x);
  const int e = k_ + 1 - order;
  const double fact = std::tgamma(e + 1.0);
  double h = slope_ * std::pow(t, e);
  for (std::size_t i = 0; i < knots_.size(); ++i)
    if (t > knots_[i]) h += weights_[i] * std::pow(t - knots_[i], e);
  h /= fact;
  // f^{(j)}(x) = sign(x)^{k+1+j} H^{(j)}(|x|).
  return (x < 0.0 && (k_ + 1 + order) % 2 == 1) ? -h : h;
}

double lemma_3111_ratio(const RealFunction& f, const RealFunction& dk, int q, double b,
                        std::span<const double> breakpoints) {
  require(q >= 3, "lemma-3111: q must be >= 3");
  require(b > 0.0 && 2 * b <= kPi, "lemma-3111: need 0 < 2b <= pi");
  std::vector<double> cuts(breakpoints.begin(), breakpoints.end());
  for (double t : breakpoints) cuts.push_back(-t);
  cuts.push_back(0.0);
  const double den = sup_norm(f, Interval(-2 * b, 2 * b), {}, 4, cuts);
  if (!(den > 0.0)) return 0.0;
  return std::pow(b, q - 2) * sup_norm(dk, Interval(-b, b), {}, 4, cuts) / den;
}

ExperimentReport exp_lemma_3111(int q, double b, const ExperimentOptions& options) {
  const auto t0 = Clock::now();
  require(q >= 3, "lemma-3111: q must be >= 3");
  require(b > 0.0 && 2 * b <= kPi, "lemma-3111: need 0 < 2b <= pi");
  validate_common(options);
  const int k = q - 2;
  constexpr int kKnots = 6;
  ExperimentReport rep;
  rep.id = "lemma-3111";
  rep.seed = options.seed;
  rep.parameters = {{"q", q}, {"b", b}, {"restarts", options.restarts}, {"knots", kKnots}};
  // Parameters: slope, weights (>= 0), knot positions as fractions of 2b.
  auto make = [&](const std::vector<double>& x) {
    std::vector<double> w(x.begin() + 1, x.begin() + 1 + kKnots), t(x.begin() + 1 + kKnots, x.end());
    for (double& v : t) v *= 2 * b;
    return TruncatedPowerFamily(k, x[0], t, w);
  };
  auto ratio_of = [&](const TruncatedPowerFamily& f, double scale, bool flip) {
    auto g = [&](double x) { return scale * f.derivative(flip ? -x : x, 0); };
    auto gk = [&](double x) { return scale * ((flip && k % 2 == 1) ? -1.0 : 1.0) * f.derivative(flip ? -x : x, k); };
    return lemma_3111_ratio(g, gk, q, b, f.knots());
  };
  auto objective = [&](const std::vector<double>& x) { return ratio_of(make(x), 1.0, false); };
  auto project = [&](std::vector<double>& x) {
    for (int i = 1; i <= kKnots; ++i) x[i] = std::max(0.0, x[i]);
    for (int i = 1 + kKnots; i < 1 + 2 * kKnots; ++i) x[i] = std::clamp(x[i], 0.0, 1.0);
  };
  std::mt19937_64 rng(cell_seed(options.seed, 0));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> best;
  double best_random = -1.0;
  for (int t = 0; t < options.restarts; ++t) {
    std::vector<double> x(1 + 2 * kKnots);
    x[0] = normal(rng);
    for (int i = 1; i <= kKnots; ++i) x[i] = std::abs(normal(rng));
    for (int i = 1 + kKnots; i < 1 + 2 * kKnots; ++i) x[i] = unit(rng);
    const double v = objective(x);
    if (v > best_random) {
      best_random = v;
      best = x;
    }
  }
  // Normalize the homogeneous part (slope and weights) before climbing.
  double m = std::abs(best[0]);
  for (int i = 1; i <= kKnots; ++i) m = std::max(m, best[i]);
  for (int i = 0; i <= kKnots; ++i) best[i] /= m;
  const double climbed = hill_climb(objective, best, 0.25, project);
  const TruncatedPowerFamily fbest = make(best);
  const double base = ratio_of(fbest, 1.0, false);
  const double scaled = ratio_of(fbest, 7.0, false);
  const double flipped = ratio_of(fbest, 1.0, true);
  auto Fq1 = [&](double x) { return f_r(q - 1, x); };
  auto Fq1k = [&](double x) { return f_r(1, x); };
  const double power_ratio = lemma_3111_ratio(Fq1, Fq1k, q, b);
  rep.cells.push_back({{"q", q},
                       {"b", b},
                       {"ratio_random_max", best_random},
                       {"ratio_hill_climb", climbed},
                       {"ratio_max", std::max(best_random, climbed)},
                       {"ratio_scaled_by_7", scaled},
                       {"ratio_flipped", flipped},
                       {"ratio_F_q_minus_1", power_ratio},
                       {"best_slope", best[0]},
                       {"best_weights", std::vector<double>(best.begin() + 1, best.begin() + 1 + kKnots)},
                       {"best_knots", fbest.knots()}});
  const double rmax = std::max(best_random, climbed);
  rep.assert_that("ratio finite and positive", std::isfinite(rmax) && rmax > 0.0, "max ratio = " + fixed(rmax));
  rep.assert_that("homogeneity", std::abs(scaled - base) <= 1e-12 * base, "scaled ratio = " + fixed(scaled, 17));
  rep.assert_that("flip invariance", std::abs(flipped - base) <= 1e-12 * base, "flipped ratio = " + fixed(flipped, 17));
  rep.assert_that("F_{q-1} ratio finite and positive", std::isfinite(power_ratio) && power_ratio > 0.0,
                  "ratio = " + fixed(power_ratio));
  rep.add_constant("c2", rmax, LedgerMode::empirical,
                   "b^(q-2) ||f^(q-2)||_[-b,b] <= c2 ||f||_[-2b,2b], f^(q-2) convex on [0,2b], concave on [-2b,0]");
  rep.runtime_seconds = seconds_since(t0);
  return rep;
}

// ---------------------------------------------------------------------------
// Distance from F_{q-2} to functions with convex/concave (q-2)-nd derivative

ExperimentReport exp_lemma_22(int q, const std::vector<int>& knot_counts, const ExperimentOptions& options) {
  const auto t0 = Clock::now();
  require(q >= 3, "lemma-22: q must be >= 3");
  require(!knot_counts.empty(), "lemma-22: knot counts must not be empty");
  for (int N : knot_counts) require(N >= 2 && N % 2 == 0, "lemma-22: knot counts must be even and >= 2");
  validate_common(options);
  const int k = q - 2;
  ExperimentReport rep;
  rep.id = "lemma-22";
  rep.seed = options.seed;
  rep.parameters = {{"q", q}, {"knot_intervals", knot_counts}};
  rep.cells.resize(knot_counts.size());
  auto F = [&](double x) { return f_r(k, x); };
  parallel_for(static_cast<int>(knot_counts.size()), options.jobs, [&](int idx) {
    const int N = knot_counts[idx];
    std::vector<double> knots;  // interior knots, 0 included
    for (int i = 1; i < N; ++i) knots.push_back(-1.0 + 2.0 * i / N);
    const int npoly = k + 2, dim = npoly + static_cast<int>(knots.size());
    const double fact = std::tgamma(k + 2.0);
    // g = sum_j c_j x^j / j! (j <= k+1) + sum_i w_i (x - t_i)_+^{k+1} / (k+1)!.
    auto row = [&](double x) {
      Eigen::RowVectorXd r(dim);
      double xp = 1.0, jf = 1.0;
      for (int j = 0; j < npoly; ++j) {
        r(j) = xp / jf;
        xp *= x;
        jf *= j + 1;
      }
      for (std::size_t i = 0; i < knots.size(); ++i)
        r(npoly + static_cast<Eigen::Index>(i)) = x > knots[i] ? std::pow(x - knots[i], k + 1) / fact : 0.0;
      return r;
    };
    std::vector<double> xs;
    for (int c = 0; c < N; ++c) {
      const std::vector<double> pts = chebyshev_lobatto(-1.0 + 2.0 * c / N, -1.0 + 2.0 * (c + 1) / N, 16);
      xs.insert(xs.end(), pts.begin() + (c == 0 ? 0 : 1), pts.end());
    }
    Eigen::MatrixXd A(static_cast<Eigen::Index>(xs.size()), dim);
    for (std::size_t i = 0; i < xs.size(); ++i) A.row(static_cast<Eigen::Index>(i)) = row(xs[i]);
    DiscreteChebyshevLp lp(A, 1.0);
    for (std::size_t i = 0; i < xs.size(); ++i) lp.add_objective(A.row(static_cast<Eigen::Index>(i)), F(xs[i]));
    for (std::size_t i = 0; i < knots.size(); ++i) {
      if (knots[i] == 0.0) continue;  // the kink at 0 is free
      Eigen::RowVectorXd psi = Eigen::RowVectorXd::Zero(dim);
      psi(npoly + static_cast<Eigen::Index>(i)) = knots[i] > 0.0 ? 1.0 : -1.0;
      lp.add_constraint(psi);
    }
    const DiscreteChebyshevLp::Solution sol = lp.solve();
    double discrete = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
      discrete = std::max(discrete, std::abs(F(xs[i]) - row(xs[i]).dot(sol.coeffs)));
    std::vector<double> cuts = knots;
    const double post = sup_norm([&](double x) { return F(x) - row(x).dot(sol.coeffs); }, Interval(-1.0, 1.0), {},
                                 4, cuts);
    double worst_sign = 0.0;  // most negative signed kink (should be >= 0)
    for (std::size_t i = 0; i < knots.size(); ++i) {
      if (knots[i] == 0.0) continue;
      const double w = sol.coeffs(npoly + static_cast<Eigen::Index>(i));
      worst_sign = std::min(worst_sign, knots[i] > 0.0 ? w : -w);
    }
    rep.cells[idx] = {{"knot_intervals", N},
                      {"unknowns", dim},
                      {"grid_points", xs.size()},
                      {"discrete_error", discrete},
                      {"estimate", post},
                      {"lp_iterations", sol.iterations},
                      {"min_signed_kink", worst_sign}};
  });
  for (const Json& c : rep.cells) {
    const double e = c.at("estimate").get<double>();
    rep.assert_that("minimum > 0", e > 0.0, "estimate = " + fixed(e),
                    cell_name("knots", c.at("knot_intervals").get<double>()));
  }
  const double first = rep.cells.front().at("estimate").get<double>();
  const double last = rep.cells.back().at("estimate").get<double>();
  const double change = std::abs(last - first) / std::max(first, last);
  rep.assert_that("stable under knot refinement (<= 10%)", change <= 0.1, "relative change = " + fixed(change));
  rep.add_constant("c_lemma22", last, LedgerMode::empirical,
                   "||F_(q-2) - g||_[-1,1] >= c, g^(q-2) convex on [0,1], concave on [-1,0]");
  rep.plots.push_back(series("estimate", rep.cells, "knot_intervals", "estimate"));
  rep.runtime_seconds = seconds_since(t0);
  return rep;
}

// ---------------------------------------------------------------------------
// Non-decay theorems

namespace {

struct TheoremSetup {
  CanonicalShift cs;
  double b = 0.0;
  IdealSpline E;
  RealFunction f;
  std::vector<double> breakpoints;  // original coordinates
};

TheoremSetup theorem_setup(int r, const SignChangeSet& Y) {
  const CanonicalShift cs = shift_to_canonical(Y);
  const double b = min_gap(Y);
  TheoremSetup s{cs, b, build_ideal_spline(r, b), {}, {}};
  const IdealSpline& E = s.E;
  const double shift = cs.shift;
  const int o = cs.orientation;
  s.f = [E, shift, o](double x) { return o * E(x + shift); };
  s.breakpoints = {Y.to_window(-b - shift), Y.to_window(-shift)};
  return s;
}

ExperimentReport theorem_report(const char* id, int q, int r, const SignChangeSet& Y, const std::vector<int>& n_list,
                                const ExperimentOptions& options, bool local_check) {
  validate_n_list(n_list);
  validate_common(options);
  TheoremSetup S = theorem_setup(r, Y);
  ExperimentReport rep;
  rep.id = id;
  rep.seed = options.seed;
  rep.parameters = {{"q", q}, {"r", r}, {"Y", Y.points()}, {"n", n_list}, {"b", S.b},
                    {"shift", S.cs.shift}, {"orientation", S.cs.orientation}};
  rep.cells.resize(n_list.size());
  // Canonical [-b, b] in original coordinates.
  const Interval local(-S.b - S.cs.shift, S.b - S.cs.shift);
  parallel_for(static_cast<int>(n_list.size()), options.jobs, [&](int i) {
    const int n = n_list[i];
    const ApproxResult con = best_co_q_monotone(S.f, n, q, Y, {}, {}, S.breakpoints);
    const ApproxResult unc = best_approx(S.f, n, std::nullopt, {}, S.breakpoints);
    Json c = {{"n", n},
              {"constrained_error", con.error},
              {"constrained_post_check", con.post_check_error},
              {"constraint_ok", con.constraint_ok},
              {"constraint_violation", con.constraint_violation},
              {"constrained_lp_iterations", con.lp_iterations},
              {"densifications", con.densifications},
              {"unconstrained_error", unc.error},
              {"unconstrained_post_check", unc.post_check_error},
              {"n_constrained", n * con.error},
              {"n2_unconstrained", static_cast<double>(n) * n * unc.error}};
    if (local_check) {
      std::vector<double> cuts = {-S.cs.shift};
      const double dist = sup_norm([&](double x) { return S.f(x) - con(x); }, local, {}, n, cuts);
      c["local_distance"] = dist;
      c["local_c3"] = n * dist / std::pow(S.b, r);
    }
    rep.cells[i] = std::move(c);
  });
  // Membership in W^r and Delta^(q)(Y).
  const double top = sup_norm([&](double x) { return S.E.derivative(x, r); }, S.E.window(), {}, 0, S.E.breakpoints());
  MembershipOptions mo;
  const MembershipReport mem = membership_report(
      [&](double x) { return S.cs.orientation * S.E.derivative(x + S.cs.shift, q); }, Y, mo, nullptr, S.breakpoints);
  rep.cells.front()["f_top_derivative_norm"] = top;
  rep.assert_that("1 <= ||f^(r)|| < 2", top >= 1.0 && top < 2.0, "norm = " + fixed(top, 12));
  rep.assert_that("f in Delta^(q)(Y)", mem.member, "worst = " + fixed(mem.worst));
  for (const Json& c : rep.cells) {
    const std::string cell = cell_name("n", c.at("n").get<double>());
    rep.assert_that("constraint post-check", c.at("constraint_ok").get<bool>(),
                    "violation = " + fixed(c.at("constraint_violation").get<double>()), cell);
    rep.assert_that("constrained >= unconstrained",
                    c.at("constrained_error").get<double>() >= c.at("unconstrained_error").get<double>() * (1 - 1e-9),
                    "", cell);
  }
  rep.plots.push_back(series("constrained", rep.cells, "n", "constrained_error"));
  rep.plots.push_back(series("unconstrained", rep.cells, "n", "unconstrained_error"));
  return rep;
}

}  // namespace

ExperimentReport exp_theorem_12(int q, const SignChangeSet& Y, const std::vector<int>& n_list,
                                const ExperimentOptions& options) {
  const auto t0 = Clock::now();
  require(q >= 3, "thm-12: q must be >= 3");
  ExperimentReport rep = theorem_report("thm-12", q, q - 2, Y, n_list, options, false);
  const double first = rep.cells.front().at("constrained_error").get<double>();
  const double lowest = min_of(rep.cells, "constrained_error");
  const double u0 = rep.cells.front().at("unconstrained_error").get<double>();
  const double u1 = rep.cells.back().at("unconstrained_error").get<double>();
  rep.assert_that("constrained non-decay: min >= 0.3 * first", lowest >= 0.3 * first,
                  "min/first = " + fixed(lowest / first));
  rep.assert_that("unconstrained decay >= 3x", u0 >= 3.0 * u1, "first/last = " + fixed(u0 / u1));
  rep.add_constant("C_thm12", lowest, LedgerMode::empirical, "E_n^(q)(f, Y) >= C(q, Y), f = E_{q-2,b}");
  rep.runtime_seconds = seconds_since(t0);
  return rep;
}

ExperimentReport exp_theorem_13(int q, const SignChangeSet& Y, const std::vector<int>& n_list,
                                const ExperimentOptions& options) {
  const auto t0 = Clock::now();
  require(q >= 3, "thm-13: q must be >= 3");
  const int r = q - 1;
  ExperimentReport rep = theorem_report("thm-13", q, r, Y, n_list, options, true);
  const double lo = min_of(rep.cells, "n_constrained"), hi = max_of(rep.cells, "n_constrained");
  const double u0 = rep.cells.front().at("unconstrained_error").get<double>();
  const double u1 = rep.cells.back().at("unconstrained_error").get<double>();
  const double c3 = min_of(rep.cells, "local_c3");
  rep.assert_that("n E_n^(q) > 0", lo > 0.0, "min = " + fixed(lo));
  rep.assert_that("n E_n^(q) max/min <= 3", hi <= 3.0 * lo, "ratio = " + fixed(hi / lo));
  rep.assert_that("unconstrained decay >= 8x", u0 >= 8.0 * u1, "first/last = " + fixed(u0 / u1));
  rep.assert_that("local bound constant c3 > 0", c3 > 0.0, "c3 = " + fixed(c3));
  rep.add_constant("C_thm13", lo, LedgerMode::empirical, "n E_n^(q)(f, Y) >= C(q, Y), f = E_{q-1,b}");
  rep.add_constant("c3", c3, LedgerMode::empirical, "n ||F_r + p_{r,b} - T_n||_[-b,b] >= c3 b^r, T_n constrained");
  rep.plots.push_back(series("n_constrained", rep.cells, "n", "n_constrained"));
  rep.plots.push_back(series("n2_unconstrained", rep.cells, "n", "n2_unconstrained"));
  rep.runtime_seconds = seconds_since(t0);
  return rep;
}

// ---------------------------------------------------------------------------
// Lower bound for the scaled smooth splines

ExperimentReport exp_lemma_aux(const std::vector<int>& n_list, double b, int q, int p, const ConstantsLedger& L,
                               std::shared_ptr<const MollifierTable> M, const ExperimentOptions& options) {
  const auto t0 = Clock::now();
  validate_n_list(n_list);
  validate_common(options);
  require(L.q == q && L.p == p, "lemma-aux: ledger (q, p) does not match");
  const int r = L.r, m = L.m;
  ExperimentReport rep;
  rep.id = "lemma-aux";
  rep.seed = options.seed;
  rep.ledger_hash = L.hash();
  rep.parameters = {{"q", q}, {"p", p}, {"b", b}, {"n", n_list}, {"d", L.d}, {"mode", to_string(L.mode)}};
  const SignChangeSet canonical(std::vector<double>{-L.d, 0.0});
  rep.cells.resize(n_list.size());
  parallel_for(static_cast<int>(n_list.size()), options.jobs, [&](int i) {
    const int n = n_list[i];
    const ScaledSpline f = build_f_nb(n, b, L.d, L, M);
    MinimaxProblem pb;
    pb.target = [&f](double x) { return f(x); };
    pb.degree = n;
    pb.domain = Interval(-b, b);
    pb.constraint = CoQConstraint{q, canonical};
    pb.constraint_on_domain = true;
    pb.breakpoints = f.zone_boundaries();
    pb.breakpoints.push_back(0.0);
    pb.free_poly_degree = r;
    const ApproxResult with_p = solve_minimax(pb);
    pb.free_poly_degree = -1;
    const ApproxResult without_p = solve_minimax(pb);
    const double scale = std::pow(static_cast<double>(n), m + 1) / std::pow(b, r * (m + 1));
    rep.cells[i] = {{"n", n},
                    {"lambda", f.lambda()},
                    {"error_with_P", with_p.error},
                    {"error_without_P", without_p.error},
                    {"post_check_with_P", with_p.post_check_error},
                    {"constraint_ok", with_p.constraint_ok},
                    {"measured_constant", scale * with_p.error}};
  });
  for (const Json& c : rep.cells) {
    const std::string cell = cell_name("n", c.at("n").get<double>());
    const double mc = c.at("measured_constant").get<double>();
    rep.assert_that("n^(m+1) err / b^(r(m+1)) >= 0.3 c10", mc >= 0.3 * L.c10,
                    "measured = " + fixed(mc) + ", c10 = " + fixed(L.c10), cell);
    const double w = c.at("error_with_P").get<double>(), wo = c.at("error_without_P").get<double>();
    rep.assert_that("error with P_r <= without", w <= wo * (1 + 1e-9) + 1e-15,
                    fixed(w) + " vs " + fixed(wo), cell);
  }
  rep.add_constant("c10", L.c10, L.mode, "c10 = c7 c3 / 2");
  rep.add_constant("c10_measured", min_of(rep.cells, "measured_constant"), LedgerMode::empirical,
                   "n^(m+1) ||f_{n,b} + P_r - T_n||_[-b,b] >= c10 b^(r(m+1))");
  rep.plots.push_back(series("measured_constant", rep.cells, "n", "measured_constant"));
  rep.runtime_seconds = seconds_since(t0);
  return rep;
}

// ---------------------------------------------------------------------------
// Calibration

Calibration calibrate_constants(int q, int p, double d, std::shared_ptr<const MollifierTable> M,
                                const ExperimentOptions& options) {
  const auto t0 = Clock::now();
  require(q >= 2, "calibrate: q must be >= 2");
  require(p > q - 1, "calibrate: p must exceed r = q - 1");
  require(d > 0.0 && d <= kPi, "calibrate: d must lie in (0, pi]");
  validate_common(options);
  const int r = q - 1;
  ExperimentReport rep;
  rep.id = "calibrate";
  rep.seed = options.seed;
  rep.parameters = {{"q", q}, {"p", p}, {"d", d}, {"restarts", options.restarts}};

  ExperimentOptions sub = options;
  const ExperimentReport bern = exp_bernstein_interval(kPi / 2, {4, 8}, sub);
  sub.seed = cell_seed(options.seed, 1);
  const ExperimentReport mod = exp_lemma_mod({kPi / 2, kPi}, {4, 8, 16}, sub);
  sub.seed = cell_seed(options.seed, 2);
  const ExperimentReport deriv = exp_lemma_3111(std::max(q, 3), d / 4, sub);

  // c3: n ||E_{r,d} + P_r - T_n||_[-b,b] / b^r over constrained T_n, b = d/4.
  const IdealSpline E = build_ideal_spline(r, d);
  const double b = d / 4;
  const std::vector<int> c3_n = {8, 16, 32};
  std::vector<double> c3_cells(c3_n.size());
  parallel_for(static_cast<int>(c3_n.size()), options.jobs, [&](int i) {
    MinimaxProblem pb;
    pb.target = [&E](double x) { return E(x); };
    pb.degree = c3_n[i];
    pb.domain = Interval(-b, b);
    pb.constraint = CoQConstraint{q, SignChangeSet(std::vector<double>{-d, 0.0})};
    pb.constraint_on_domain = true;
    pb.free_poly_degree = r;
    pb.breakpoints = {0.0};
    c3_cells[i] = c3_n[i] * solve_minimax(pb).error / std::pow(b, r);
  });

  // c4, c5: smoothing norms and distance over lambda in {d/3, d/12, d/48}.
  double c4 = 0.0, c5 = 0.0;
  for (double lam : {d / 3, d / 12, d / 48}) {
    const SmoothSpline S = build_smooth_spline(r, d, lam, M);
    const std::vector<double> br = S.zone_boundaries();
    const double dist = sup_norm([&](double x) { return S(x) - E(x); }, S.window(), {}, 0, br);
    double norms = 0.0;
    for (int j = 0; j <= r; ++j)
      norms = std::max(norms, sup_norm([&](double x) { return S.derivative(x, j); }, S.window(), {}, 0, br));
    rep.cells.push_back({{"lambda", lam}, {"distance_over_lambda", dist / lam}, {"max_low_derivative_norm", norms}});
    c5 = std::max(c5, dist / lam);
    c4 = std::max(c4, norms);
  }
  for (std::size_t i = 0; i < c3_n.size(); ++i) rep.cells.push_back({{"n", c3_n[i]}, {"c3_cell", c3_cells[i]}});

  MeasuredConstants mc;
  mc.c0 = bern.constant("c0");
  mc.c1 = mod.constant("c1");
  mc.c2 = deriv.constant("c2");
  mc.c3 = *std::min_element(c3_cells.begin(), c3_cells.end());
  mc.c4 = c4;
  mc.c5 = c5;
  mc.provenance = {
      {"c0", "max rho over random and hill-climbed odd T, b = pi/2, n in {4, 8}"},
      {"c1", "min n E_n(|x|, [-b,b]) / b, b in {pi/2, pi}, n in {4, 8, 16}"},
      {"c2", "max derivative ratio over the truncated-power family, b = d/4"},
      {"c3", "min n ||E_{r,d} + P_r - T_n||_[-b,b] / b^r, b = d/4, n in {8, 16, 32}, constraint on [-b, b]"},
      {"c4", "max_{j <= r} ||E_{r,d,lambda}^(j)||, lambda in {d/3, d/12, d/48}"},
      {"c5", "max sup|E_{r,d,lambda} - E_{r,d}| / lambda, lambda in {d/3, d/12, d/48}"},
      {"c6..c10", "ledger identities"}};
  const ConstantsLedger L = empirical_ledger(q, p, d, mc, *M);

  const std::vector<std::string> bad = L.check();
  rep.assert_that("ledger identities", bad.empty(), bad.empty() ? "" : bad.front());
  rep.assert_that("c0 < 10", L.c0 < 10.0, "c0 = " + fixed(L.c0));
  rep.assert_that("c6 = c3 / (2 c5)", std::abs(L.c6 - L.c3 / (2 * L.c5)) <= 1e-15 * L.c6, fixed(L.c6, 17));
  rep.assert_that("mode empirical", L.mode == LedgerMode::empirical, to_string(L.mode));
  for (const ExperimentReport* sr : {&bern, &mod, &deriv})
    for (const ReportAssertion& a : sr->assertions)
      rep.assert_that(sr->id + ": " + a.name, a.pass, a.detail, a.cell);
  for (const char* name : {"c0", "c1", "c2", "c3", "c4", "c5"}) {
    const double v = Json(to_json(L)).at(name).get<double>();
    rep.add_constant(name, v, LedgerMode::empirical, L.provenance.at(name));
  }
  rep.add_constant("c6", L.c6, LedgerMode::empirical, "c6 = c3 / (2 c5)");
  rep.add_constant("c7", L.c7, LedgerMode::empirical, "c7 = c6^m / s_m");
  rep.add_constant("c9", L.c9, LedgerMode::empirical, "c9 = c7 c4 D^(rm), D = d/4");
  rep.add_constant("c10", L.c10, LedgerMode::empirical, "c10 = c7 c3 / 2");
  rep.ledger_hash = L.hash();
  rep.artifacts["ledger"] = to_json(L);
  rep.artifacts["sub_reports"] = {to_json(bern), to_json(mod), to_json(deriv)};
  rep.runtime_seconds = seconds_since(t0);
  return {L, rep};
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"bernstein", "lemma-mod",  "lemma-3111", "lemma-22",
                                                 "thm-12",    "thm-13",     "lemma-aux",  "calibrate"};
  return names;
}

}  // namespace coqm
