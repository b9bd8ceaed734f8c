#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <utility>

#include "coqm/errors.hpp"

namespace coqm {

/// Trigonometric polynomial a0 + sum_{k=1}^{n} (cos_k cos kt + sin_k sin kt).
template <typename Scalar>
class TrigPoly {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

  TrigPoly() : a0_(0), cos_(Vector::Zero(0)), sin_(Vector::Zero(0)) {}

  TrigPoly(Scalar a0, Vector cos_coeffs, Vector sin_coeffs)
      : a0_(a0), cos_(std::move(cos_coeffs)), sin_(std::move(sin_coeffs)) {
    require(cos_.size() == sin_.size(), "TrigPoly: cosine and sine coefficient counts differ");
  }

  static TrigPoly zero(int degree) {
    return TrigPoly(Scalar(0), Vector::Zero(degree), Vector::Zero(degree));
  }
  static TrigPoly constant(Scalar value) { return TrigPoly(value, Vector::Zero(0), Vector::Zero(0)); }
  static TrigPoly cosine(int k, Scalar amplitude = Scalar(1)) {
    TrigPoly t = zero(k);
    t.cos_(k - 1) = amplitude;
    return t;
  }
  static TrigPoly sine(int k, Scalar amplitude = Scalar(1)) {
    TrigPoly t = zero(k);
    t.sin_(k - 1) = amplitude;
    return t;
  }

  /// Unpacks the packed layout (a0, cos_1..cos_n, sin_1..sin_n) used by the LP code.
  static TrigPoly from_packed(const Eigen::Ref<const Vector>& packed) {
    const Eigen::Index n = (packed.size() - 1) / 2;
    require(packed.size() == 2 * n + 1, "TrigPoly: packed vector must have odd length");
    return TrigPoly(packed(0), packed.segment(1, n), packed.segment(1 + n, n));
  }

  [[nodiscard]] Vector packed() const {
    Vector p(1 + 2 * degree());
    p(0) = a0_;
    p.segment(1, degree()) = cos_;
    p.segment(1 + degree(), degree()) = sin_;
    return p;
  }

  [[nodiscard]] int degree() const { return static_cast<int>(cos_.size()); }
  [[nodiscard]] Scalar a0() const { return a0_; }
  [[nodiscard]] const Vector& cos_coeffs() const { return cos_; }
  [[nodiscard]] const Vector& sin_coeffs() const { return sin_; }

  Scalar operator()(Scalar t) const {
    using std::cos;
    using std::sin;
    const Scalar c1 = cos(t), s1 = sin(t);
    Scalar ck = c1, sk = s1, value = a0_;
    for (int k = 0; k < degree(); ++k) {
      value += cos_(k) * ck + sin_(k) * sk;
      const Scalar next_c = ck * c1 - sk * s1;
      sk = sk * c1 + ck * s1;
      ck = next_c;
    }
    return value;
  }

  /// Exact coefficient-level derivative of order `order`.
  [[nodiscard]] TrigPoly derivative(int order = 1) const {
    require(order >= 0, "TrigPoly::derivative: negative order");
    if (order == 0) return *this;
    Vector c(degree()), s(degree());
    for (int k = 1; k <= degree(); ++k) {
      const Scalar scale = pow_int(Scalar(k), order);
      // d^j/dt^j rotates (cos, sin) by j quarter turns.
      Scalar a = cos_(k - 1), b = sin_(k - 1);
      for (int r = 0; r < order % 4; ++r) {
        const Scalar na = b, nb = -a;
        a = na;
        b = nb;
      }
      c(k - 1) = scale * a;
      s(k - 1) = scale * b;
    }
    return TrigPoly(Scalar(0), std::move(c), std::move(s));
  }

  /// (even part, odd part).
  [[nodiscard]] std::pair<TrigPoly, TrigPoly> even_odd_split() const {
    return {TrigPoly(a0_, cos_, Vector::Zero(degree())),
            TrigPoly(Scalar(0), Vector::Zero(degree()), sin_)};
  }

  [[nodiscard]] TrigPoly padded(int degree_at_least) const {
    if (degree_at_least <= degree()) return *this;
    Vector c = Vector::Zero(degree_at_least), s = Vector::Zero(degree_at_least);
    c.head(degree()) = cos_;
    s.head(degree()) = sin_;
    return TrigPoly(a0_, std::move(c), std::move(s));
  }

  friend TrigPoly operator+(const TrigPoly& x, const TrigPoly& y) {
    const int n = std::max(x.degree(), y.degree());
    const TrigPoly a = x.padded(n), b = y.padded(n);
    return TrigPoly(a.a0_ + b.a0_, a.cos_ + b.cos_, a.sin_ + b.sin_);
  }
  friend TrigPoly operator-(const TrigPoly& x, const TrigPoly& y) { return x + (Scalar(-1) * y); }
  friend TrigPoly operator*(Scalar f, const TrigPoly& x) {
    return TrigPoly(f * x.a0_, f * x.cos_, f * x.sin_);
  }
  friend bool operator==(const TrigPoly& x, const TrigPoly& y) {
    return x.a0_ == y.a0_ && x.cos_ == y.cos_ && x.sin_ == y.sin_;
  }

  /// Values of the basis (1, cos kt, sin kt) differentiated `order` times, packed layout.
  static RowVector basis_row(int degree, Scalar t, int order = 0) {
    using std::cos;
    using std::sin;
    RowVector row(1 + 2 * degree);
    row(0) = order == 0 ? Scalar(1) : Scalar(0);
    for (int k = 1; k <= degree; ++k) {
      const Scalar kt = Scalar(k) * t;
      const Scalar scale = pow_int(Scalar(k), order);
      Scalar c = cos(kt), s = sin(kt);
      // value of d^order/dt^order cos kt = k^order cos(kt + order*pi/2)
      for (int r = 0; r < order % 4; ++r) {
        const Scalar nc = -s, ns = c;
        c = nc;
        s = ns;
      }
      row(k) = scale * c;
      row(degree + k) = scale * s;
    }
    return row;
  }

 private:
  static Scalar pow_int(Scalar x, int e) {
    Scalar r(1);
    for (int i = 0; i < e; ++i) r *= x;
    return r;
  }

  Scalar a0_;
  Vector cos_;
  Vector sin_;
};

using TrigPolyd = TrigPoly<double>;

}  // namespace coqm
