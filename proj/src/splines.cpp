#include "coqm/splines.hpp"

#include <cmath>
#include <string>

namespace coqm {

namespace {

double factorial(int r) {
  double f = 1.0;
  for (int i = 2; i <= r; ++i) f *= i;
  return f;
}

void check_b(double b, const char* name) {
  require(std::isfinite(b) && b > 0.0 && b <= kPi * (1.0 + 1e-15),
          std::string(name) + " must lie in (0, pi], got " + std::to_string(b));
}

/// r successive antiderivatives, each shifted to zero period-mean.
std::vector<PiecewisePolyd> integrate_mean_zero(PiecewisePolyd top, int r) {
  std::vector<PiecewisePolyd> levels(static_cast<std::size_t>(r) + 1);
  levels[static_cast<std::size_t>(r)] = std::move(top);
  for (int j = r - 1; j >= 0; --j) {
    PiecewisePolyd a = levels[static_cast<std::size_t>(j) + 1].antiderivative(0.0);
    a = a.plus_constant(-a.integral() / a.period());
    levels[static_cast<std::size_t>(j)] = std::move(a);
  }
  return levels;
}

}  // namespace

double f_r(int r, double x) {
  require(r >= 1, "f_r: r must be positive");
  return std::abs(x) * std::pow(x, r - 1) / factorial(r);
}

double gamma_b(double b) {
  check_b(b, "gamma_b: b");
  return 1.0 - b / kPi;
}

IdealSpline::IdealSpline(int r, double b) : r_(r), b_(b) {
  require(r >= 1, "build_ideal_spline: r must be positive");
  check_b(b, "build_ideal_spline: b");
  const double g = gamma_b(b);
  std::vector<double> breaks{-b, 0.0, kTwoPi - b};
  std::vector<Polynomiald> pieces{Polynomiald::constant(-1.0 - g, -0.5 * b),
                                  Polynomiald::constant(1.0 - g, 0.5 * (kTwoPi - b))};
  std::vector<PiecewisePolyd> levels = integrate_mean_zero(PiecewisePolyd(breaks, pieces, true), r);
  derivs_ = std::move(levels);
}

double IdealSpline::derivative(double x, int order) const {
  require(order >= 0, "IdealSpline::derivative: negative order");
  if (order > r_) return 0.0;
  return derivs_[static_cast<std::size_t>(order)](x);
}

const PiecewisePolyd& IdealSpline::derivative_pp(int order) const {
  require(order >= 0 && order <= r_, "IdealSpline::derivative_pp: order must be in [0, r]");
  return derivs_[static_cast<std::size_t>(order)];
}

IdealSpline build_ideal_spline(int r, double b) { return IdealSpline(r, b); }

Polynomiald residual_polynomial(int r, double b) {
  const IdealSpline E(r, b);
  // On [0, 2*pi - b], F_r(x) = x^r / r!.
  Polynomiald p = E.spline().pieces()[1].recentered(0.0);
  Polynomiald::Vector c = p.coeffs();
  if (c.size() < r + 1) c.conservativeResizeLike(Polynomiald::Vector::Zero(r + 1));
  c(r) -= 1.0 / factorial(r);
  return Polynomiald(0.0, std::move(c));
}

ScaledStep::ScaledStep(double lambda, double d, std::shared_ptr<const MollifierTable> M)
    : lambda_(lambda), d_(d), M_(std::move(M)) {
  require(M_ != nullptr, "build_scaled_step: missing mollifier table");
  check_b(d, "build_scaled_step: d");
  require(std::isfinite(lambda) && lambda > 0.0, "build_scaled_step: lambda must be positive");
  require(lambda <= d / 3.0 * (1.0 + 1e-12),
          "build_scaled_step: lambda = " + std::to_string(lambda) + " exceeds d/3 = " + std::to_string(d / 3.0));
}

double ScaledStep::derivative(double x, int order) const {
  require(order >= 0, "ScaledStep::derivative: negative order");
  const double lo = -d_;
  if (x < lo || x >= lo + kTwoPi) x -= kTwoPi * std::floor((x - lo) / kTwoPi);
  const double scale = (order == 0) ? 1.0 : std::pow(lambda_, -order);
  const double offset = (order == 0) ? -gamma_b(d_) : 0.0;
  if (x < 0.0) return -scale * M_->derivative((x - (2.0 * lambda_ - d_)) / lambda_, order) + offset;
  return scale * M_->derivative((x - 2.0 * lambda_) / lambda_, order) + offset;
}

std::vector<double> ScaledStep::zone_boundaries() const {
  return {-d_, -d_ + lambda_, -d_ + 3.0 * lambda_, lambda_, 3.0 * lambda_, kTwoPi - d_};
}

ScaledStep build_scaled_step(double lambda, double d, std::shared_ptr<const MollifierTable> M) {
  return ScaledStep(lambda, d, std::move(M));
}

SmoothSpline::SmoothSpline(int r, double d, double lambda, std::shared_ptr<const MollifierTable> M)
    : r_(r), M_(M), step_(lambda, d, M) {
  require(r >= 1, "build_smooth_spline: r must be positive");
  const double g = gamma_b(d);
  const PiecewisePolyd& transition = M_->transition();
  const std::vector<double>& ucells = transition.breakpoints();

  std::vector<double> breaks;
  std::vector<Polynomiald> pieces;
  auto constant_piece = [&](double a, double b, double v) {
    if (!(b > a)) return;  // empty when lambda = d/3 and d = pi
    breaks.push_back(a);
    pieces.push_back(Polynomiald::constant(v, 0.5 * (a + b)));
  };
  // One piece per mollifier cell; sign = -1 for the descending zone.
  auto zone = [&](double center, double sign) {
    for (std::size_t i = 0; i + 1 < ucells.size(); ++i) {
      const double a = center + lambda * ucells[i];
      const double b = center + lambda * ucells[i + 1];
      require(b > a, "build_smooth_spline: lambda below the double resolution of the zone grid");
      const double xc = 0.5 * (a + b);
      const Polynomiald pu = transition.pieces()[i].recentered((xc - center) / lambda);
      Polynomiald::Vector c = sign * pu.coeffs();
      double f = 1.0;
      for (Eigen::Index k = 1; k < c.size(); ++k) {
        f /= lambda;
        c(k) *= f;
      }
      c(0) -= g;
      breaks.push_back(a);
      pieces.emplace_back(xc, std::move(c));
    }
  };
  const double zA = -d + 2.0 * lambda, zB = 2.0 * lambda;
  constant_piece(-d, zA - lambda, 1.0 - g);
  zone(zA, -1.0);
  constant_piece(zA + lambda, zB - lambda, -1.0 - g);
  zone(zB, 1.0);
  constant_piece(zB + lambda, kTwoPi - d, 1.0 - g);
  breaks.push_back(kTwoPi - d);
  derivs_ = integrate_mean_zero(PiecewisePolyd(std::move(breaks), std::move(pieces), true), r);
}

double SmoothSpline::derivative(double x, int order) const {
  require(order >= 0, "SmoothSpline::derivative: negative order");
  if (order <= r_) return derivs_[static_cast<std::size_t>(order)](x);
  return step_.derivative(x, order - r_);
}

const PiecewisePolyd& SmoothSpline::derivative_pp(int order) const {
  require(order >= 0 && order <= r_, "SmoothSpline::derivative_pp: order must be in [0, r]");
  return derivs_[static_cast<std::size_t>(order)];
}

SmoothSpline build_smooth_spline(int r, double d, double lambda, std::shared_ptr<const MollifierTable> M) {
  return SmoothSpline(r, d, lambda, std::move(M));
}

double smoothing_distance_constant(int r) { return 8.0 * std::pow(kPi, r - 1); }

}  // namespace coqm
