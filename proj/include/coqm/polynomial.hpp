#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <utility>

#include "coqm/errors.hpp"

namespace coqm {

/// Algebraic polynomial sum_j c_j (x - center)^j.
template <typename Scalar>
class Polynomial {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Polynomial() : center_(0), coeffs_(Vector::Zero(1)) {}
  Polynomial(Scalar center, Vector coeffs) : center_(center), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() == 0) coeffs_ = Vector::Zero(1);
  }

  static Polynomial constant(Scalar value, Scalar center = Scalar(0)) {
    Vector c(1);
    c(0) = value;
    return Polynomial(center, std::move(c));
  }

  [[nodiscard]] int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  [[nodiscard]] Scalar center() const { return center_; }
  [[nodiscard]] const Vector& coeffs() const { return coeffs_; }

  Scalar operator()(Scalar x) const {
    const Scalar u = x - center_;
    Scalar v = coeffs_(coeffs_.size() - 1);
    for (Eigen::Index j = coeffs_.size() - 2; j >= 0; --j) v = v * u + coeffs_(j);
    return v;
  }

  [[nodiscard]] Polynomial derivative(int order = 1) const {
    Vector c = coeffs_;
    for (int o = 0; o < order; ++o) {
      if (c.size() <= 1) return constant(Scalar(0), center_);
      Vector d(c.size() - 1);
      for (Eigen::Index j = 1; j < c.size(); ++j) d(j - 1) = Scalar(j) * c(j);
      c = std::move(d);
    }
    return Polynomial(center_, std::move(c));
  }

  /// Antiderivative vanishing at the center.
  [[nodiscard]] Polynomial antiderivative() const {
    Vector c(coeffs_.size() + 1);
    c(0) = Scalar(0);
    for (Eigen::Index j = 0; j < coeffs_.size(); ++j) c(j + 1) = coeffs_(j) / Scalar(j + 1);
    return Polynomial(center_, std::move(c));
  }

  /// Definite integral over [a, b].
  [[nodiscard]] Scalar integral(Scalar a, Scalar b) const {
    const Polynomial p = antiderivative();
    return p(b) - p(a);
  }

  /// Same polynomial expanded about a new center (Taylor shift).
  [[nodiscard]] Polynomial recentered(Scalar new_center) const {
    const Scalar h = new_center - center_;
    Vector c = coeffs_;
    const Eigen::Index n = c.size();
    for (Eigen::Index i = 0; i < n - 1; ++i)
      for (Eigen::Index j = n - 2; j >= i; --j) c(j) += h * c(j + 1);
    return Polynomial(new_center, std::move(c));
  }

  [[nodiscard]] Polynomial plus_constant(Scalar v) const {
    Vector c = coeffs_;
    c(0) += v;
    return Polynomial(center_, std::move(c));
  }

  friend Polynomial operator*(Scalar f, const Polynomial& p) { return Polynomial(p.center_, f * p.coeffs_); }

  /// Sum of two polynomials, expressed about the center of `x`.
  friend Polynomial operator+(const Polynomial& x, const Polynomial& y) {
    const Polynomial yc = y.recentered(x.center_);
    const Eigen::Index n = std::max(x.coeffs_.size(), yc.coeffs_.size());
    Vector c = Vector::Zero(n);
    c.head(x.coeffs_.size()) += x.coeffs_;
    c.head(yc.coeffs_.size()) += yc.coeffs_;
    return Polynomial(x.center_, std::move(c));
  }

 private:
  Scalar center_;
  Vector coeffs_;
};

using Polynomiald = Polynomial<double>;

}  // namespace coqm
