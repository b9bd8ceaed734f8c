#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "coqm/core.hpp"
#include "coqm/counterexample.hpp"
#include "coqm/report.hpp"
#include "coqm/splines.hpp"

namespace coqm {

struct ExperimentOptions {
  /// Base seed; cell i draws from its own mt19937_64 seeded by cell_seed(seed, i).
  std::uint64_t seed = 20240601;
  /// Worker threads for independent grid cells (>= 1).
  int jobs = 1;
  /// Random restarts of the constant searches.
  int restarts = 200;
};

/// Seed of grid cell `index` (splitmix64 of the base seed and the index).
[[nodiscard]] std::uint64_t cell_seed(std::uint64_t base, std::uint64_t index);

/// Runs body(i) for i < count on up to `jobs` threads. Each index runs exactly once; the
/// first exception is rethrown after all workers stop.
void parallel_for(int count, int jobs, const std::function<void(int)>& body);

/// rho = b ||T'||_{[-b/2,b/2]} / (n ||T||_{[-b,b]}) for the odd T = sum_k beta_k sin kt.
[[nodiscard]] double bernstein_ratio(const std::vector<double>& sin_coeffs, double b);

/// Odd-interval Bernstein inequality: random odd T with standard normal coefficients,
/// then hill climbing from the best start. Reports max rho as c_0; asserts 0 < rho < 10.
[[nodiscard]] ExperimentReport exp_bernstein_interval(double b, const std::vector<int>& n_list,
                                                      const ExperimentOptions& options = {});

/// kappa(b, n) = n E_n(|x|, [-b, b]) / b; asserts kappa > 0, max/min <= 2, error ratios in
/// [0.4, 0.6] under doubling, and invariance (<= 1e-7) of the error under adding the linear
/// l(x) = 0.3 + 0.7 x when the linear part is fitted (free degree-1 polynomial).
[[nodiscard]] ExperimentReport exp_lemma_mod(const std::vector<double>& b_list, const std::vector<int>& n_list,
                                             const ExperimentOptions& options = {});

/// Test function f(x) = sign(x)^{k+1} H(|x|), k = q - 2, where H^{(k)} = h and
/// h(t) = a t + sum_i w_i (t - t_i)_+ is convex (w_i >= 0) with h(0) = 0, so f^{(k)} is
/// odd, convex on [0, 2b] and concave on [-2b, 0].
class TruncatedPowerFamily {
 public:
  TruncatedPowerFamily(int k, double slope, std::vector<double> knots, std::vector<double> weights);

  [[nodiscard]] int k() const { return k_; }
  [[nodiscard]] const std::vector<double>& knots() const { return knots_; }
  /// f^{(j)}(x) for 0 <= j <= k.
  [[nodiscard]] double derivative(double x, int order) const;
  double operator()(double x) const { return derivative(x, 0); }

 private:
  int k_;
  double slope_;
  std::vector<double> knots_, weights_;
};

/// b^{q-2} ||f^{(q-2)}||_{[-b,b]} / ||f||_{[-2b,2b]}.
[[nodiscard]] double lemma_3111_ratio(const RealFunction& f, const RealFunction& dk, int q, double b,
                                      std::span<const double> breakpoints = {});

/// Maximizes the ratio over the family (random knots and weights, then hill climbing);
/// reports the max as c_2 and checks homogeneity and flip invariance on the maximizer.
[[nodiscard]] ExperimentReport exp_lemma_3111(int q, double b, const ExperimentOptions& options = {});

/// min ||F_{q-2} - g||_{[-1,1]} with g^{(q-2)} continuous piecewise linear (uniform knots),
/// convex on [0,1] and concave on [-1,0]; one LP per knot count. Asserts the minimum is
/// positive and changes by <= 10% from the first to the last knot count.
[[nodiscard]] ExperimentReport exp_lemma_22(int q, const std::vector<int>& knot_counts = {32, 64},
                                            const ExperimentOptions& options = {});

/// f = orientation * E_{q-2,b}(x + shift) with b = min_gap(Y); constrained E_n^{(q)} and
/// unconstrained E_n on the same grids. Asserts min E^{(q)} >= 0.3 E^{(q)}_{n_min} and
/// E_{n_min} >= 3 E_{n_max}.
[[nodiscard]] ExperimentReport exp_theorem_12(int q, const SignChangeSet& Y, const std::vector<int>& n_list,
                                              const ExperimentOptions& options = {});

/// f = orientation * E_{q-1,b}(x + shift). Asserts n E^{(q)}_n > 0 with max/min <= 3,
/// E_{n_min} >= 8 E_{n_max}, and the direct local bound n ||E - T_n||_{[-b,b]} >= c_3 b^r > 0.
[[nodiscard]] ExperimentReport exp_theorem_13(int q, const SignChangeSet& Y, const std::vector<int>& n_list,
                                              const ExperimentOptions& options = {});

/// For each n: f_{n,b} from the ledger, degree-n approximation on [-b, b] with the
/// constraint imposed there, with and without a free degree-r polynomial. Asserts
/// n^{m+1} err / b^{r(m+1)} >= 0.3 c_10 and err(with P_r) <= err(without).
[[nodiscard]] ExperimentReport exp_lemma_aux(const std::vector<int>& n_list, double b, int q, int p,
                                             const ConstantsLedger& L, std::shared_ptr<const MollifierTable> M,
                                             const ExperimentOptions& options = {});

struct Calibration {
  ConstantsLedger ledger;
  ExperimentReport report;
};

/// Measures c_0 (odd-interval Bernstein), c_1 (|x| bound), c_2 (derivative bound),
/// c_3 (local constrained bound for E_{r,d}), c_4 and c_5 (smoothing norms and distance)
/// for r = q - 1 and the gap d, and assembles the empirical ledger.
[[nodiscard]] Calibration calibrate_constants(int q, int p, double d, std::shared_ptr<const MollifierTable> M,
                                              const ExperimentOptions& options = {});

/// Experiment names accepted by the CLI.
[[nodiscard]] const std::vector<std::string>& experiment_names();

}  // namespace coqm
