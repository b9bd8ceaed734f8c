#include <Eigen/Dense>

#include <cmath>

#include "coqm/splines.hpp"

namespace coqm {

std::vector<double> bump_taylor(double t, int order) {
  require(order >= 0, "bump_taylor: negative order");
  std::vector<double> e(static_cast<std::size_t>(order) + 1, 0.0);
  if (!(std::abs(t) < 1.0)) return e;
  // w = 1 - t^2 expanded about t: w0 + w1 h + w2 h^2.
  const double w0 = (1.0 - t) * (1.0 + t), w1 = -2.0 * t, w2 = -1.0;
  // u = -1/w as a Taylor series, then psi = exp(u).
  std::vector<double> v(e.size(), 0.0);
  v[0] = 1.0 / w0;
  for (std::size_t k = 1; k < v.size(); ++k) {
    double acc = w1 * v[k - 1];
    if (k >= 2) acc += w2 * v[k - 2];
    v[k] = -acc / w0;
  }
  e[0] = std::exp(-v[0]);
  for (std::size_t k = 1; k < e.size(); ++k) {
    double acc = 0.0;
    for (std::size_t i = 1; i <= k; ++i) acc += static_cast<double>(i) * (-v[i]) * e[k - i];
    e[k] = acc / static_cast<double>(k);
  }
  return e;
}

namespace {

double bump_derivative(double t, int k) {
  double v = bump_taylor(t, k)[static_cast<std::size_t>(k)];
  for (int i = 2; i <= k; ++i) v *= i;
  return v;
}

}  // namespace

MollifierTable::MollifierTable(int grid_size, int j_max) : grid_size_(grid_size), j_max_(j_max) {
  require(grid_size >= 1024, "build_mollifier: grid_size must be >= 1024");
  require(j_max >= 1, "build_mollifier: j_max must be >= 1");

  // Cell-wise polynomial interpolation of psi at Chebyshev-Lobatto nodes.
  constexpr int D = cell_degree();
  Eigen::VectorXd s(D + 1);
  Eigen::MatrixXd V(D + 1, D + 1);
  for (int k = 0; k <= D; ++k) {
    s(k) = -std::cos(kPi * k / D);
    for (int j = 0; j <= D; ++j) V(k, j) = std::pow(s(k), j);
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(V);

  std::vector<double> breaks(static_cast<std::size_t>(grid_size) + 1);
  for (int i = 0; i <= grid_size; ++i) breaks[static_cast<std::size_t>(i)] = -1.0 + 2.0 * i / grid_size;
  std::vector<Polynomiald> pieces;
  pieces.reserve(static_cast<std::size_t>(grid_size));
  const double half = 1.0 / grid_size;
  Eigen::VectorXd f(D + 1);
  for (int i = 0; i < grid_size; ++i) {
    const double mid = 0.5 * (breaks[static_cast<std::size_t>(i)] + breaks[static_cast<std::size_t>(i) + 1]);
    for (int k = 0; k <= D; ++k) f(k) = bump_taylor(mid + half * s(k), 0)[0];
    Eigen::VectorXd a = lu.solve(f);
    double scale = 1.0;
    for (int j = 1; j <= D; ++j) {
      scale /= half;
      a(j) *= scale;
    }
    pieces.emplace_back(mid, std::move(a));
  }
  const PiecewisePolyd psi(std::move(breaks), std::move(pieces), false);
  bump_integral_ = psi.integral();
  slope_ = psi.scaled(2.0 / bump_integral_);
  transition_ = slope_.antiderivative(-1.0);

  s_norms_.assign(static_cast<std::size_t>(j_max) + 1, 0.0);
  s_norms_[0] = 1.0;
  const Interval unit(-1.0, 1.0);
  for (int j = 1; j <= j_max; ++j)
    s_norms_[static_cast<std::size_t>(j)] =
        sup_norm([this, j](double u) { return derivative(u, j); }, unit, GridSpec{}, 4096);
}

double MollifierTable::S(double u) const {
  if (u <= -1.0) return -1.0;
  if (u >= 1.0) return 1.0;
  return transition_(u);
}

double MollifierTable::derivative(double u, int j) const {
  require(j >= 0, "MollifierTable::derivative: negative order");
  if (j == 0) return S(u);
  if (!(std::abs(u) < 1.0)) return 0.0;
  return 2.0 / bump_integral_ * bump_derivative(u, j - 1);
}

double MollifierTable::s_norm(int j) const {
  require(j >= 0 && j <= j_max_, "MollifierTable::s_norm: order outside the table");
  return s_norms_[static_cast<std::size_t>(j)];
}

std::shared_ptr<const MollifierTable> build_mollifier(int grid_size, int j_max) {
  return std::make_shared<const MollifierTable>(grid_size, j_max);
}

}  // namespace coqm
