#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include "coqm/errors.hpp"

namespace coqm {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

using RealFunction = std::function<double(double)>;

/// Closed interval [lo, hi] with 0 < hi - lo <= 2*pi.
class Interval {
 public:
  Interval(double lo, double hi);
  static Interval full_period() { return {-kPi, kPi}; }

  [[nodiscard]] double lo() const { return lo_; }
  [[nodiscard]] double hi() const { return hi_; }
  [[nodiscard]] double length() const { return hi_ - lo_; }
  [[nodiscard]] bool contains(double x) const { return x >= lo_ && x <= hi_; }
  [[nodiscard]] bool contains(const Interval& other) const { return other.lo_ >= lo_ && other.hi_ <= hi_; }

 private:
  double lo_;
  double hi_;
};

/// Points y_{2s} < ... < y_1 < y_{2s} + 2*pi =: y_0 at which q-monotonicity flips.
/// Stored ascending; `y(i)` uses the descending 1-based labelling.
class SignChangeSet {
 public:
  explicit SignChangeSet(std::vector<double> ascending_points);

  [[nodiscard]] int s() const { return static_cast<int>(points_.size() / 2); }
  [[nodiscard]] std::size_t size() const { return points_.size(); }
  [[nodiscard]] const std::vector<double>& points() const { return points_; }

  /// y_i for 0 <= i <= 2s, with y_0 = y_{2s} + 2*pi.
  [[nodiscard]] double y(int i) const;
  [[nodiscard]] double window_lo() const { return points_.front(); }
  [[nodiscard]] double window_hi() const { return points_.front() + kTwoPi; }

  /// Maps t into the window [y_{2s}, y_0).
  [[nodiscard]] double to_window(double t) const;
  /// prod_{i=1}^{2s} (t - y_i), with t taken in the window.
  [[nodiscard]] double product(double t) const;
  /// The sign sigma_i = (-1)^{i-1} required of f^{(q)} on (y_i, y_{i-1}); 0 at the points.
  [[nodiscard]] int required_sign(double t) const;

  [[nodiscard]] SignChangeSet shifted(double theta) const;

 private:
  std::vector<double> points_;
};

/// Sampling controls for sup-norms and grid construction.
struct GridSpec {
  int points_per_degree = 20;
  double refinement_tolerance = 1e-10;
  int max_refinements = 30;

  void validate() const;
};

/// Largest |f| on I, from Chebyshev-Lobatto samples on every sub-interval cut by
/// `breakpoints`, refined by golden-section search around discrete maxima. Every value
/// returned is an actual evaluation, so the result never exceeds the true sup-norm.
[[nodiscard]] double sup_norm(const RealFunction& f, const Interval& I, const GridSpec& grid = {},
                              int degree = 0, std::span<const double> breakpoints = {});

/// Location and value of the maximum of |f| (same algorithm as sup_norm).
struct Extremum {
  double x;
  double value;  // signed f(x)
};
[[nodiscard]] Extremum arg_sup_norm(const RealFunction& f, const Interval& I, const GridSpec& grid = {},
                                    int degree = 0, std::span<const double> breakpoints = {});

/// Minimal circular gap y_{j-1} - y_j over j = 1..2s (includes the wrap gap).
[[nodiscard]] double min_gap(const SignChangeSet& Y);

struct MembershipOptions {
  double rel_tol = 1e-9;
  int points_per_cell = 64;
  /// Lower bound on the dq scale, so rounding noise on an almost-zero dq passes.
  double scale_floor = 0.0;
};

struct MembershipReport {
  bool member = true;
  /// min of dq(t) * prod(t) / (max|dq| * max|prod|); negative means the sign is wrong.
  double worst = 0.0;
  double dq_scale = 0.0;
  double at = 0.0;
};

/// Checks dq(t) * prod_i (t - y_i) >= -tol on a dense grid over [y_{2s}, y_0]
/// (restricted to `restrict_to` when given). `breakpoints` add grid cuts so narrow
/// features are sampled.
[[nodiscard]] MembershipReport membership_report(const RealFunction& dq, const SignChangeSet& Y,
                                                 const MembershipOptions& options = {},
                                                 const Interval* restrict_to = nullptr,
                                                 std::span<const double> breakpoints = {});

[[nodiscard]] inline bool delta_q_membership(const RealFunction& dq, const SignChangeSet& Y,
                                             const MembershipOptions& options = {},
                                             const Interval* restrict_to = nullptr,
                                             std::span<const double> breakpoints = {}) {
  return membership_report(dq, Y, options, restrict_to, breakpoints).member;
}

/// Rotation placing the minimal-gap pair at {-b, 0}.
struct CanonicalShift {
  SignChangeSet canonical;
  /// canonical point = original point + shift (mod 2*pi).
  double shift;
  /// +1 when the relabelled window keeps the sign pattern, -1 when it flips it. A
  /// function g is in Delta^(q)(Y) iff orientation * g(. - shift) is in Delta^(q)(canonical).
  int orientation;
};
[[nodiscard]] CanonicalShift shift_to_canonical(const SignChangeSet& Y);

// Grid helpers shared by the solvers and experiments.

/// `count` Chebyshev-Lobatto nodes on [a, b], ascending, endpoints included.
[[nodiscard]] std::vector<double> chebyshev_lobatto(double a, double b, int count);
/// `count` Chebyshev-Gauss nodes on (a, b), ascending, endpoints excluded.
[[nodiscard]] std::vector<double> chebyshev_gauss(double a, double b, int count);
/// Sorted cut points: [lo, interior breakpoints within (lo, hi), hi].
[[nodiscard]] std::vector<double> cut_points(double lo, double hi, std::span<const double> breakpoints);

/// Golden-section search maximizing |f| on [a, b]; returns the best point seen.
[[nodiscard]] Extremum golden_max_abs(const RealFunction& f, double a, double b, double x_tol);

}  // namespace coqm
