#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "coqm/core.hpp"
#include "coqm/splines.hpp"

namespace coqm {

enum class LedgerMode { proven, empirical };

[[nodiscard]] const char* to_string(LedgerMode mode);
[[nodiscard]] LedgerMode ledger_mode_from_string(const std::string& s);

/// The constants c_0..c_10 scaling the counterexample, with r = q - 1 and m = p - r.
/// c_0..c_5 are inputs; c_6..c_10 and c_star follow from the identities
///   c_star = 1/(40 c_0), c_6 = c_3/(2 c_5), c_7 = c_6^m / s_m, c_10 = c_7 c_3 / 2,
///   c_8 = max_j c_6^{m-j} D^{r(m-j)} s_j / s_m, c_9 = c_7 c_4 D^{rm},
/// where D = b_max = d/4 bounds the half-widths b the ledger is used with (every b_k <= b_1 = d/4).
struct ConstantsLedger {
  LedgerMode mode = LedgerMode::proven;
  int q = 3, p = 3, r = 2, m = 1;
  /// The minimal gap d the constants are valid for, and the bound D on b (d/4).
  double d = kPi;
  double b_max = kPi / 4;
  double c0 = 0, c1 = 0, c2 = 0, c3 = 0, c4 = 0, c5 = 0;
  double c6 = 0, c7 = 0, c8 = 0, c9 = 0, c10 = 0, c_star = 0;
  /// c_8 per j = 0..m (the value for j, see c8 above).
  std::vector<double> c8_j;
  /// s_j = sup|S^(j)|, j = 0..max(m, 1).
  std::vector<double> s_norms;
  /// Formula or measurement behind each constant.
  std::map<std::string, std::string> provenance;

  /// Recomputes c_6..c_10, c_star and c8_j from c_0..c_5 and s_norms.
  void derive();
  /// Violated identities / proven-mode inequalities, as messages (empty when consistent).
  [[nodiscard]] std::vector<std::string> check() const;
  /// Stable FNV-1a hash of the ledger's numeric content.
  [[nodiscard]] std::string hash() const;
};

/// Proven-mode ledger: c_0 = 9 < 10, c_1 = 1/(80 c_0), c_2 = 100 (no value is given for it;
/// recorded as an assumption), c_3 = 2^{-r} c_1/c_2, c_4 = 2 pi^r, c_5 = 8 pi^{r-1}, d = pi, D = pi/4.
[[nodiscard]] ConstantsLedger proven_ledger(int q, int p, const MollifierTable& M);

/// Measured inputs of an empirical ledger.
struct MeasuredConstants {
  double c0 = 0, c1 = 0, c2 = 0, c3 = 0, c4 = 0, c5 = 0;
  std::map<std::string, std::string> provenance;
};

/// Empirical-mode ledger for the gap d from measured c_0..c_5 (identities enforced).
[[nodiscard]] ConstantsLedger empirical_ledger(int q, int p, double d, const MeasuredConstants& measured,
                                               const MollifierTable& M);

/// lambda_{n,b} = c_6 b^r / n.
[[nodiscard]] double lambda_n_b(double n, double b, const ConstantsLedger& L);

/// Smallest lambda a smooth spline is realized with (zone cells must stay resolvable).
inline constexpr double kMinRealizableLambda = 1e-12;

/// f_{n,b} = c_7 (b^{rm}/n^m) E_{r,d,lambda_{n,b}} on the canonical window [-d, 2 pi - d].
class ScaledSpline {
 public:
  ScaledSpline(double n, double b, double d, const ConstantsLedger& L, std::shared_ptr<const MollifierTable> M);

  [[nodiscard]] double n() const { return n_; }
  [[nodiscard]] double b() const { return b_; }
  [[nodiscard]] double lambda() const { return spline_.lambda(); }
  [[nodiscard]] double amplitude() const { return amp_; }
  [[nodiscard]] const SmoothSpline& spline() const { return spline_; }
  [[nodiscard]] int r() const { return spline_.r(); }

  double operator()(double x) const { return derivative(x, 0); }
  [[nodiscard]] double derivative(double x, int order) const { return amp_ * spline_.derivative(x, order); }
  /// Zone boundaries of the underlying spline (grid cuts for sampling).
  [[nodiscard]] std::vector<double> zone_boundaries() const { return spline_.zone_boundaries(); }

 private:
  double n_, b_, amp_;
  SmoothSpline spline_;
};

/// Builds f_{n,b}. Requires 0 < b <= L.b_max, n >= 3 c_6 b^r, lambda_{n,b} <= d/3, and
/// lambda_{n,b} >= kMinRealizableLambda.
[[nodiscard]] ScaledSpline build_f_nb(double n, double b, double d, const ConstantsLedger& L,
                                      std::shared_ptr<const MollifierTable> M);

/// Rule n -> eps_n > 0, eps_n -> infinity: log(n + 2), n, or e_lo^n with the rational
/// e_lo = 2.718281828 <= e (so the exp rule is checked exactly and implies it for e^n).
enum class EpsRule { log, linear, exp };
[[nodiscard]] const char* to_string(EpsRule rule);
[[nodiscard]] EpsRule eps_rule_from_string(const std::string& s);

struct PlanEntry {
  int k;
  mpz_class n;
  mpq_class b;
};

/// Levels (n_k, b_k), k = 1..K+1, of the recursion; summand k (1 <= k <= K) is
/// f_{n_{k+1}, b_k}, whose lambda is b_{k+1}.
struct RecursionPlan {
  int q = 3, p = 3, r = 2, m = 1;
  int K = 0;
  EpsRule eps = EpsRule::log;
  /// Canonical gap d (as a double and exactly) and the rotation to canonical position.
  double d = 0.0;
  mpq_class d_exact;
  double shift = 0.0;
  int orientation = 1;
  std::vector<double> canonical_points;
  /// The ledger constants as exact rationals, and the ledger hash.
  mpq_class c6, c9, c10;
  std::string ledger_hash;
  LedgerMode mode = LedgerMode::proven;
  std::vector<PlanEntry> entries;

  [[nodiscard]] const PlanEntry& level(int k) const { return entries.at(static_cast<std::size_t>(k - 1)); }
};

struct PlanOptions {
  /// Upper limit on the bit length of any n_k searched for.
  unsigned max_bits = 1u << 20;
};

/// n_1 = ceil(3 c_6 d^r), b_1 = d/4; for k >= 1, n_{k+1} is the smallest integer >= 2 n_k with
///   (a) 3 lambda_{n_{k+1},b_k} < b_k,  (b) eps(n_{k+1}) c_10 b_k^{r(m+1)} >= k,
///   (c) c_9 / n_{k+1}^m <= c_10 b_{k-1}^{r(m+1)} / (10 n_k^{m+1})   (k >= 2; b_0 is undefined),
/// and b_{k+1} = lambda_{n_{k+1},b_k}; found by doubling then bisection in exact arithmetic.
/// Throws NumericalError when (b) needs more than `max_bits` bits (eps grows too slowly).
[[nodiscard]] RecursionPlan plan_recursion(const SignChangeSet& Y, int q, int p, EpsRule eps, int K,
                                           const ConstantsLedger& L, const PlanOptions& options = {});

/// One verified inequality of a plan.
struct PlanCheckItem {
  int k;
  std::string condition;  // "init", "n>=2n", "lambda-bound", "eps-growth", "tail-decay", "b-recursion", "support-disjoint", "minimal"
  bool ok;
  bool exact;             // false for conditions on the log rule (log-domain check)
  std::string detail;
};

/// Independent re-verification of every condition of the plan (exact rationals).
[[nodiscard]] std::vector<PlanCheckItem> verify_plan(const RecursionPlan& plan);
[[nodiscard]] bool plan_ok(const std::vector<PlanCheckItem>& items);

/// f_K = sum_{k=1}^K f_{n_{k+1}, b_k}, evaluated in the original (non-canonical) coordinates.
class PartialSum {
 public:
  PartialSum() = default;
  PartialSum(std::vector<ScaledSpline> summands, double shift, int orientation, double tail_bound,
             bool tail_from_next_level);

  [[nodiscard]] int K() const { return static_cast<int>(summands_.size()); }
  [[nodiscard]] const std::vector<ScaledSpline>& summands() const { return summands_; }
  [[nodiscard]] double shift() const { return shift_; }
  [[nodiscard]] int orientation() const { return orientation_; }
  /// Analytic bound on sum_{j > K} ||f_{n_{j+1}, b_j}||.
  [[nodiscard]] double tail_bound() const { return tail_bound_; }
  /// True when the bound is 2 c_9 / n_{K+2}^m; otherwise c_9 / ((2^m - 1) n_{K+1}^m).
  [[nodiscard]] bool tail_from_next_level() const { return tail_from_next_level_; }

  double operator()(double x) const { return derivative(x, 0); }
  [[nodiscard]] double derivative(double x, int order) const;
  /// Sum of the first `count` summands only (canonical coordinates).
  [[nodiscard]] double canonical_partial(double x, int order, int count) const;
  /// All zone boundaries, in the original coordinates.
  [[nodiscard]] std::vector<double> breakpoints() const;

 private:
  std::vector<ScaledSpline> summands_;
  double shift_ = 0.0;
  int orientation_ = 1;
  double tail_bound_ = 0.0;
  bool tail_from_next_level_ = false;
};

/// Realizes the first K summands of the plan. Levels whose lambda falls below
/// kMinRealizableLambda are "plan-only" and raise NumericalError.
[[nodiscard]] PartialSum build_partial_sum(const RecursionPlan& plan, int K, const ConstantsLedger& L,
                                           std::shared_ptr<const MollifierTable> M);

/// Measured norms and membership of a realized construction.
struct RealizationCheck {
  bool membership = false;
  double membership_worst = 0.0;
  double top_derivative_norm = 0.0;  ///< ||f^{(r+m)}|| (resp. ||f_K^{(p)}||)
  std::vector<double> derivative_norms;  ///< ||f^{(j)}||, j = 0..r+m
};

/// Membership of f^{(q)} in Delta^(q)(canonical) and the norms ||f^{(j)}||, j <= r + m.
[[nodiscard]] RealizationCheck check_f_nb(const ScaledSpline& f, const SignChangeSet& canonical, int q, int m);

/// Membership and ||f_K^{(p)}|| for a partial sum, in original coordinates.
[[nodiscard]] RealizationCheck check_partial_sum(const PartialSum& f, const SignChangeSet& Y, int q, int p);

/// Residual of the best degree-r polynomial fit to the sum of the first K-1 summands on
/// [-b_K, b_K] (canonical coordinates), relative to the sup of that sum there.
[[nodiscard]] double polynomial_fit_residual(const PartialSum& f, double b_K, int r);

}  // namespace coqm
