#pragma once

#include <memory>
#include <vector>

#include "coqm/core.hpp"
#include "coqm/piecewise_poly.hpp"
#include "coqm/polynomial.hpp"

namespace coqm {

/// |x| x^{r-1} / r!
[[nodiscard]] double f_r(int r, double x);

/// 1 - b/pi for b in (0, pi].
[[nodiscard]] double gamma_b(double b);

/// The 2*pi-periodic C^{r-1} zero-mean spline whose r-th derivative is sign(x) - gamma_b(b)
/// on (-b, 2*pi - b) \ {0}. Lives on the window [-b, 2*pi - b] with breakpoints {-b, 0}.
class IdealSpline {
 public:
  IdealSpline(int r, double b);

  [[nodiscard]] int r() const { return r_; }
  [[nodiscard]] double b() const { return b_; }
  [[nodiscard]] Interval window() const { return {-b_, kTwoPi - b_}; }

  double operator()(double x) const { return derivs_[0](x); }

  /// j-th derivative for j <= r; 0 for j > r away from the breakpoints.
  [[nodiscard]] double derivative(double x, int order) const;

  /// The j-th derivative as a piecewise polynomial, j = 0..r.
  [[nodiscard]] const PiecewisePolyd& derivative_pp(int order) const;
  [[nodiscard]] const PiecewisePolyd& spline() const { return derivs_[0]; }

  /// {-b, 0, 2*pi - b}.
  [[nodiscard]] std::vector<double> breakpoints() const { return derivs_[0].breakpoints(); }

 private:
  int r_;
  double b_;
  std::vector<PiecewisePolyd> derivs_;  // derivs_[j] = j-th derivative
};

[[nodiscard]] IdealSpline build_ideal_spline(int r, double b);

/// p_{r,b} = E_{r,b} - F_r as one polynomial (centered at 0) valid on [-b, 2*pi - b].
[[nodiscard]] Polynomiald residual_polynomial(int r, double b);

/// The transition S(x) = -1 + 2 int_{-1}^x psi / int_{-1}^1 psi, psi(t) = exp(-1/(1-t^2)).
/// S is tabulated as a cell-wise polynomial interpolant (exactly integrable); derivatives
/// S^(j), j >= 1, are evaluated in closed form by Taylor-mode differentiation of psi.
class MollifierTable {
 public:
  MollifierTable(int grid_size, int j_max);

  [[nodiscard]] int grid_size() const { return grid_size_; }
  [[nodiscard]] int j_max() const { return j_max_; }
  [[nodiscard]] static constexpr int cell_degree() { return 10; }

  /// S(u); equals sign(u) for |u| >= 1.
  [[nodiscard]] double S(double u) const;
  /// S^(j)(u), j >= 0.
  [[nodiscard]] double derivative(double u, int j) const;
  /// s_j = sup |S^(j)|, 0 <= j <= j_max.
  [[nodiscard]] double s_norm(int j) const;
  [[nodiscard]] const std::vector<double>& s_norms() const { return s_norms_; }

  /// Interpolant of S' on [-1, 1] (one piece per grid cell).
  [[nodiscard]] const PiecewisePolyd& slope() const { return slope_; }
  [[nodiscard]] const PiecewisePolyd& transition() const { return transition_; }
  [[nodiscard]] double bump_integral() const { return bump_integral_; }

 private:
  int grid_size_;
  int j_max_;
  double bump_integral_ = 0.0;
  PiecewisePolyd slope_;
  PiecewisePolyd transition_;
  std::vector<double> s_norms_;
};

[[nodiscard]] std::shared_ptr<const MollifierTable> build_mollifier(int grid_size = 1024, int j_max = 8);

/// Taylor coefficients psi^(k)(t)/k!, k = 0..order, of psi(t) = exp(-1/(1-t^2)) (0 outside (-1,1)).
[[nodiscard]] std::vector<double> bump_taylor(double t, int order);

/// S_{lambda,d}: the mollified periodic step minus gamma_b(d), on [-d, 2*pi - d].
class ScaledStep {
 public:
  ScaledStep(double lambda, double d, std::shared_ptr<const MollifierTable> M);
  double operator()(double x) const { return derivative(x, 0); }
  [[nodiscard]] double derivative(double x, int order) const;
  [[nodiscard]] double lambda() const { return lambda_; }
  [[nodiscard]] double d() const { return d_; }
  [[nodiscard]] Interval window() const { return {-d_, kTwoPi - d_}; }
  /// {-d, -d+lambda, -d+3 lambda, lambda, 3 lambda, 2 pi - d}.
  [[nodiscard]] std::vector<double> zone_boundaries() const;

 private:
  double lambda_;
  double d_;
  std::shared_ptr<const MollifierTable> M_;
};

[[nodiscard]] ScaledStep build_scaled_step(double lambda, double d, std::shared_ptr<const MollifierTable> M);

/// E_{r,d,lambda}: zero-mean, 2*pi-periodic, r-th derivative equal to S_{lambda,d}.
/// Derivatives of order <= r come from r exact antiderivatives of the piecewise form of
/// S_{lambda,d}; higher orders are evaluated from the closed-form derivatives of S.
class SmoothSpline {
 public:
  SmoothSpline(int r, double d, double lambda, std::shared_ptr<const MollifierTable> M);

  [[nodiscard]] int r() const { return r_; }
  [[nodiscard]] double d() const { return step_.d(); }
  [[nodiscard]] double lambda() const { return step_.lambda(); }
  [[nodiscard]] Interval window() const { return step_.window(); }
  [[nodiscard]] const MollifierTable& mollifier() const { return *M_; }
  [[nodiscard]] std::shared_ptr<const MollifierTable> mollifier_ptr() const { return M_; }

  double operator()(double x) const { return derivs_[0](x); }
  [[nodiscard]] double derivative(double x, int order) const;
  [[nodiscard]] const PiecewisePolyd& derivative_pp(int order) const;
  [[nodiscard]] const PiecewisePolyd& spline() const { return derivs_[0]; }

  /// Zone boundaries (coarse) and every piece breakpoint (fine).
  [[nodiscard]] std::vector<double> zone_boundaries() const { return step_.zone_boundaries(); }
  [[nodiscard]] const std::vector<double>& breakpoints() const { return derivs_[0].breakpoints(); }

 private:
  int r_;
  std::shared_ptr<const MollifierTable> M_;
  ScaledStep step_;
  std::vector<PiecewisePolyd> derivs_;
};

[[nodiscard]] SmoothSpline build_smooth_spline(int r, double d, double lambda,
                                               std::shared_ptr<const MollifierTable> M);

/// Derived bound 8 * pi^{r-1} on sup|E_{r,d,lambda} - E_{r,d}| / lambda.
[[nodiscard]] double smoothing_distance_constant(int r);

}  // namespace coqm
