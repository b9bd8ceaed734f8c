#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "coqm/errors.hpp"
#include "coqm/polynomial.hpp"

namespace coqm {

/// Piecewise polynomial on [breakpoints.front(), breakpoints.back()], one piece per
/// cell, each piece expanded about its cell midpoint. A periodic object extends with
/// period (back - front).
template <typename Scalar>
class PiecewisePoly {
 public:
  using Piece = Polynomial<Scalar>;

  PiecewisePoly() = default;
  PiecewisePoly(std::vector<Scalar> breakpoints, std::vector<Piece> pieces, bool periodic)
      : breaks_(std::move(breakpoints)), pieces_(std::move(pieces)), periodic_(periodic) {
    require(breaks_.size() >= 2 && pieces_.size() + 1 == breaks_.size(),
            "PiecewisePoly: need one piece per cell");
    require(std::is_sorted(breaks_.begin(), breaks_.end()) &&
                std::adjacent_find(breaks_.begin(), breaks_.end()) == breaks_.end(),
            "PiecewisePoly: breakpoints must be strictly increasing");
  }

  [[nodiscard]] const std::vector<Scalar>& breakpoints() const { return breaks_; }
  [[nodiscard]] const std::vector<Piece>& pieces() const { return pieces_; }
  [[nodiscard]] bool periodic() const { return periodic_; }
  [[nodiscard]] Scalar lo() const { return breaks_.front(); }
  [[nodiscard]] Scalar hi() const { return breaks_.back(); }
  [[nodiscard]] Scalar period() const { return hi() - lo(); }
  [[nodiscard]] std::size_t size() const { return pieces_.size(); }

  [[nodiscard]] int max_degree() const {
    int d = 0;
    for (const auto& p : pieces_) d = std::max(d, p.degree());
    return d;
  }

  /// Maps x into the half-open window [lo, hi) for periodic objects.
  [[nodiscard]] Scalar wrap(Scalar x) const {
    if (!periodic_ || (x >= lo() && x < hi())) return x;
    using std::floor;
    const Scalar w = x - period() * floor((x - lo()) / period());
    return (w >= hi()) ? lo() : w;
  }

  /// Index of the cell containing x (x wrapped); cells are half-open on the right.
  [[nodiscard]] std::size_t locate(Scalar x) const {
    x = wrap(x);
    if (x <= breaks_.front()) return 0;
    if (x >= breaks_.back()) return pieces_.size() - 1;
    const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    return static_cast<std::size_t>(it - breaks_.begin()) - 1;
  }

  Scalar operator()(Scalar x) const {
    x = wrap(x);
    return pieces_[locate(x)](x);
  }

  /// One-sided limits at breakpoint index i (left limit uses piece i-1).
  [[nodiscard]] Scalar left_limit(std::size_t i, int order = 0) const {
    if (i == 0) {
      require(periodic_, "left_limit at the window start of a nonperiodic object");
      return pieces_.back().derivative(order)(hi());
    }
    return pieces_[i - 1].derivative(order)(breaks_[i]);
  }
  [[nodiscard]] Scalar right_limit(std::size_t i, int order = 0) const {
    if (i + 1 == breaks_.size()) {
      require(periodic_, "right_limit at the window end of a nonperiodic object");
      return pieces_.front().derivative(order)(lo());
    }
    return pieces_[i].derivative(order)(breaks_[i]);
  }

  [[nodiscard]] PiecewisePoly derivative(int order = 1) const {
    std::vector<Piece> d;
    d.reserve(pieces_.size());
    for (const auto& p : pieces_) d.push_back(p.derivative(order));
    return PiecewisePoly(breaks_, std::move(d), periodic_);
  }

  /// Continuous antiderivative taking the value `start` at lo().
  [[nodiscard]] PiecewisePoly antiderivative(Scalar start = Scalar(0)) const {
    std::vector<Piece> a;
    a.reserve(pieces_.size());
    Scalar running = start;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      Piece p = pieces_[i].antiderivative();
      p = p.plus_constant(running - p(breaks_[i]));
      running = p(breaks_[i + 1]);
      a.push_back(std::move(p));
    }
    return PiecewisePoly(breaks_, std::move(a), periodic_);
  }

  [[nodiscard]] Scalar integral() const {
    Scalar total(0);
    for (std::size_t i = 0; i < pieces_.size(); ++i) total += pieces_[i].integral(breaks_[i], breaks_[i + 1]);
    return total;
  }

  [[nodiscard]] PiecewisePoly plus_constant(Scalar v) const {
    std::vector<Piece> p;
    p.reserve(pieces_.size());
    for (const auto& q : pieces_) p.push_back(q.plus_constant(v));
    return PiecewisePoly(breaks_, std::move(p), periodic_);
  }

  [[nodiscard]] PiecewisePoly scaled(Scalar f) const {
    std::vector<Piece> p;
    p.reserve(pieces_.size());
    for (const auto& q : pieces_) p.push_back(f * q);
    return PiecewisePoly(breaks_, std::move(p), periodic_);
  }

 private:
  std::vector<Scalar> breaks_;
  std::vector<Piece> pieces_;
  bool periodic_ = false;
};

using PiecewisePolyd = PiecewisePoly<double>;

}  // namespace coqm
