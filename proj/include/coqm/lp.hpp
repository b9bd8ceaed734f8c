#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "coqm/errors.hpp"

namespace coqm {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration-limit";
  }
  return "unknown";
}

struct LpOptions {
  int max_iterations = 200000;
  double optimality_tol = 1e-11;
  double feasibility_tol = 1e-11;
  double pivot_tol = 1e-9;
  int refactor_interval = 50;
  /// Consecutive degenerate pivots tolerated before falling back to Bland's rule.
  int degenerate_switch = 30;
  bool bland_only = false;
};

template <typename Scalar>
struct LpResult {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  LpStatus status = LpStatus::IterationLimit;
  Vector x;  ///< primal solution, x >= 0
  Vector y;  ///< equality multipliers; A^T y <= c at optimality
  Scalar objective = Scalar(0);
  Scalar duality_gap = Scalar(0);
  Scalar dual_infeasibility = Scalar(0);
  Scalar primal_infeasibility = Scalar(0);
  int iterations = 0;
  int bland_pivots = 0;
  /// Times the pricing tolerance was relaxed to escape a stall.
  int tolerance_relaxations = 0;
  std::vector<int> basis;
  /// For infeasible problems: y with A^T y <= 0 and b^T y > 0.
  Vector farkas;
};

/// Raised by callers that require an optimal answer.
class LpError : public NumericalError {
 public:
  LpError(LpStatus status, const std::string& what) : NumericalError(what), status_(status) {}
  [[nodiscard]] LpStatus status() const { return status_; }

 private:
  LpStatus status_;
};

namespace detail {

/// Dense revised simplex for min c^T x, A x = b, x >= 0 with an explicit basis inverse.
template <typename Scalar>
class RevisedSimplex {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  RevisedSimplex(const Matrix& A, const Vector& b, const Vector& c, const LpOptions& opt)
      : m_(A.rows()), n_(A.cols()), A_(A), b_(b), c_(c), opt_(opt), flip_(Vector::Ones(A.rows())) {
    require(b.size() == m_ && c.size() == n_, "solve_lp: dimension mismatch");
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (b_(i) < Scalar(0)) {
        flip_(i) = Scalar(-1);
        A_.row(i) *= Scalar(-1);
        b_(i) = -b_(i);
      }
    }
    col_norm_ = A_.colwise().norm().transpose();
    for (Eigen::Index j = 0; j < n_; ++j)
      if (col_norm_(j) == Scalar(0)) col_norm_(j) = Scalar(1);
    const Scalar bmax = b_.size() ? b_.cwiseAbs().maxCoeff() : Scalar(0);
    feas_tol_ = Scalar(opt_.feasibility_tol) * (Scalar(1) + bmax);
  }

  LpResult<Scalar> run(const std::vector<int>* warm) {
    LpResult<Scalar> res;
    bool have_basis = warm != nullptr && try_basis(*warm);
    if (!have_basis) {
      basis_.resize(static_cast<std::size_t>(m_));
      for (Eigen::Index i = 0; i < m_; ++i) basis_[static_cast<std::size_t>(i)] = static_cast<int>(n_ + i);
      Binv_ = Matrix::Identity(m_, m_);
      xB_ = b_;
      Vector cost1 = Vector::Zero(n_ + m_);
      cost1.tail(m_).setOnes();
      const LpStatus s1 = iterate(cost1, false, res);
      if (s1 == LpStatus::IterationLimit) return finish(res, s1);
      Scalar infeas(0);
      for (Eigen::Index i = 0; i < m_; ++i)
        if (basis_[static_cast<std::size_t>(i)] >= n_) infeas += std::max(xB_(i), Scalar(0));
      if (infeas > feas_tol_ * Scalar(10)) {
        res.farkas = flip_.asDiagonal() * dual(cost1);
        res.primal_infeasibility = infeas;
        return finish(res, LpStatus::Infeasible);
      }
      drive_out_artificials();
    }
    Vector cost2 = Vector::Zero(n_ + m_);
    cost2.head(n_) = c_;
    const LpStatus s2 = iterate(cost2, true, res);
    return finish(res, s2);
  }

 private:
  [[nodiscard]] Vector column(int j) const {
    if (j < n_) return A_.col(j);
    Vector e = Vector::Zero(m_);
    e(j - n_) = Scalar(1);
    return e;
  }

  void refactor() {
    Matrix B(m_, m_);
    for (Eigen::Index i = 0; i < m_; ++i) B.col(i) = column(basis_[static_cast<std::size_t>(i)]);
    Eigen::PartialPivLU<Matrix> lu(B);
    Binv_ = lu.inverse();
    xB_ = Binv_ * b_;
  }

  bool try_basis(const std::vector<int>& warm) {
    if (static_cast<Eigen::Index>(warm.size()) != m_) return false;
    for (int j : warm)
      if (j < 0 || j >= n_ + m_) return false;
    basis_ = warm;
    Matrix B(m_, m_);
    for (Eigen::Index i = 0; i < m_; ++i) B.col(i) = column(basis_[static_cast<std::size_t>(i)]);
    Eigen::FullPivLU<Matrix> lu(B);
    if (lu.rank() < m_) return false;
    Binv_ = lu.inverse();
    xB_ = Binv_ * b_;
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (xB_(i) < -feas_tol_ * Scalar(100)) return false;
      if (basis_[static_cast<std::size_t>(i)] >= n_ && std::abs(xB_(i)) > feas_tol_ * Scalar(100)) return false;
    }
    return true;
  }

  [[nodiscard]] Vector dual(const Vector& cost) const {
    Vector cB(m_);
    for (Eigen::Index i = 0; i < m_; ++i) cB(i) = cost(basis_[static_cast<std::size_t>(i)]);
    return Binv_.transpose() * cB;
  }

  void pivot(Eigen::Index r, int entering, const Vector& u) {
    const Scalar ur = u(r);
    Binv_.row(r) /= ur;
    for (Eigen::Index i = 0; i < m_; ++i)
      if (i != r && u(i) != Scalar(0)) Binv_.row(i) -= u(i) * Binv_.row(r);
    basis_[static_cast<std::size_t>(r)] = entering;
  }

  void drive_out_artificials() {
    std::vector<char> in_basis(static_cast<std::size_t>(n_ + m_), 0);
    for (int j : basis_) in_basis[static_cast<std::size_t>(j)] = 1;
    for (Eigen::Index r = 0; r < m_; ++r) {
      if (basis_[static_cast<std::size_t>(r)] < n_) continue;
      // row r of B^{-1} A: pick the nonbasic column with largest magnitude
      const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> row = Binv_.row(r) * A_;
      Eigen::Index best = -1;
      Scalar best_val(0);
      for (Eigen::Index j = 0; j < n_; ++j) {
        if (in_basis[static_cast<std::size_t>(j)]) continue;
        const Scalar v = std::abs(row(j)) / col_norm_(j);
        if (v > best_val) {
          best_val = v;
          best = j;
        }
      }
      if (best < 0 || best_val <= Scalar(opt_.pivot_tol)) continue;  // redundant row
      const Vector u = Binv_ * column(static_cast<int>(best));
      in_basis[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])] = 0;
      pivot(r, static_cast<int>(best), u);
      in_basis[static_cast<std::size_t>(best)] = 1;
      xB_ = Binv_ * b_;
    }
  }

  /// Ratio test for entering direction u; returns the leaving row (or -1) and the step.
  std::pair<Eigen::Index, Scalar> ratio_test(const Vector& u, bool bland) const {
    // Every decreasing row bounds the step (rows below the pivot tolerance included, or
    // they drift infeasible when the step is long); Harris then prefers large pivots.
    const Scalar piv = Scalar(1e-13) * std::max(Scalar(1), u.cwiseAbs().maxCoeff());
    Eigen::Index leave = -1;
    Scalar theta_max = std::numeric_limits<Scalar>::infinity();
    for (Eigen::Index i = 0; i < m_; ++i)
      if (u(i) > piv) theta_max = std::min(theta_max, (std::max(xB_(i), Scalar(0)) + feas_tol_) / u(i));
    if (!std::isfinite(static_cast<double>(theta_max))) return {-1, Scalar(0)};
    if (bland) {
      // Plain minimum ratio, ties broken by the smallest basic index.
      Scalar tmin = std::numeric_limits<Scalar>::infinity();
      for (Eigen::Index i = 0; i < m_; ++i)
        if (u(i) > piv) tmin = std::min(tmin, std::max(xB_(i), Scalar(0)) / u(i));
      const Scalar tie = tmin + Scalar(1e-14) * (Scalar(1) + tmin);
      for (Eigen::Index i = 0; i < m_; ++i) {
        if (u(i) <= piv || std::max(xB_(i), Scalar(0)) / u(i) > tie) continue;
        if (leave < 0 || basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)]) leave = i;
      }
      return {leave, tmin};
    }
    // Harris: among rows within the relaxed bound, take the largest pivot.
    Scalar best_u(0);
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (u(i) <= piv) continue;
      const Scalar t = std::max(xB_(i), Scalar(0)) / u(i);
      if (t <= theta_max && u(i) > best_u) {
        best_u = u(i);
        leave = i;
      }
    }
    return {leave, leave >= 0 ? std::max(xB_(leave), Scalar(0)) / u(leave) : Scalar(0)};
  }

  LpStatus iterate(const Vector& cost, bool phase2, LpResult<Scalar>& res) {
    const Scalar cmax = cost.head(n_).size() ? cost.head(n_).cwiseAbs().maxCoeff() : Scalar(0);
    Scalar opt_tol = Scalar(opt_.optimality_tol) * (Scalar(1) + cmax);
    // A ray whose reduced cost is this close to zero (per unit column norm) is rounding noise.
    const Scalar noise_tol = Scalar(1e-8) * (Scalar(1) + cmax);
    int degenerate = 0;
    int stalled = 0;
    Scalar best_obj = std::numeric_limits<Scalar>::infinity();
    int since_refactor = 0;
    std::vector<char> in_basis(static_cast<std::size_t>(n_ + m_), 0);
    for (int j : basis_) in_basis[static_cast<std::size_t>(j)] = 1;
    struct Candidate {
      Scalar score;
      Eigen::Index j;
      Scalar d;
    };
    Eigen::Index price_start = 0;
    std::vector<Candidate> cands;
    while (true) {
      if (res.iterations >= opt_.max_iterations) return LpStatus::IterationLimit;
      if (since_refactor >= opt_.refactor_interval) {
        refactor();
        since_refactor = 0;
      }
      const bool bland = opt_.bland_only || degenerate >= opt_.degenerate_switch;
      const Vector pi = dual(cost);

      // Partial pricing: scan column blocks (cyclically; from 0 under Bland) until a few
      // improving columns are found. Optimality is only declared after a full scan.
      cands.clear();
      const Eigen::Index block = std::max<Eigen::Index>(2048, n_ / 8);
      Eigen::Index pos = bland ? 0 : price_start;
      for (Eigen::Index scanned = 0; scanned < n_;) {
        const Eigen::Index len = std::min(block, n_ - pos);
        const Vector d = cost.segment(pos, len) - A_.middleCols(pos, len).transpose() * pi;
        for (Eigen::Index k = 0; k < len; ++k) {
          const Eigen::Index j = pos + k;
          if (in_basis[static_cast<std::size_t>(j)] || d(k) >= -opt_tol) continue;
          cands.push_back({bland ? Scalar(j) : d(k) / col_norm_(j), j, d(k)});
        }
        scanned += len;
        pos = (pos + len) % n_;
        if (cands.size() >= (bland ? 1u : 16u)) break;
      }
      if (!bland) price_start = pos;
      std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return a.score < b.score; });
      if (cands.size() > 64) cands.resize(64);

      int entering = -1;
      bool unbounded = false;
      Eigen::Index leave = -1;
      Scalar theta(0);
      Vector u;
      for (const Candidate& cand : cands) {
        u = Binv_ * column(static_cast<int>(cand.j));
        std::tie(leave, theta) = ratio_test(u, bland);
        if (leave >= 0) {
          entering = static_cast<int>(cand.j);
          break;
        }
        if (cand.d < -noise_tol * col_norm_(cand.j)) {
          unbounded = true;
          break;
        }
      }
      if (unbounded) {
        // A ray seen through an aged inverse is confirmed with a fresh factorization.
        if (since_refactor == 0) return LpStatus::Unbounded;
        refactor();
        since_refactor = 0;
        continue;
      }

      if (entering < 0) {
        if (!phase2) return LpStatus::Optimal;
        // Verify against a fresh factorization before declaring optimality.
        if (since_refactor > 0) {
          refactor();
          since_refactor = 0;
          continue;
        }
        return LpStatus::Optimal;
      }

      xB_ -= theta * u;
      xB_(leave) = theta;
      in_basis[static_cast<std::size_t>(basis_[static_cast<std::size_t>(leave)])] = 0;
      pivot(leave, entering, u);
      in_basis[static_cast<std::size_t>(entering)] = 1;
      ++res.iterations;
      ++since_refactor;
      if (bland) ++res.bland_pivots;
      degenerate = (theta <= Scalar(1e-13) * (Scalar(1) + xB_.cwiseAbs().maxCoeff())) ? degenerate + 1 : 0;
      // Pivots on reduced costs at rounding level can cycle without changing the objective;
      // after a long run of them, relax the pricing tolerance tenfold (bounded).
      Scalar obj(0);
      for (Eigen::Index i = 0; i < m_; ++i) obj += cost(basis_[static_cast<std::size_t>(i)]) * xB_(i);
      if (!std::isfinite(best_obj) || obj < best_obj - Scalar(1e-14) * (Scalar(1) + std::abs(best_obj))) {
        best_obj = obj;
        stalled = 0;
      } else {
        ++stalled;
      }
      if (stalled >= 3 * static_cast<int>(m_) + 50 && opt_tol < Scalar(1e-10) * (Scalar(1) + cmax)) {
        opt_tol *= Scalar(10);
        ++res.tolerance_relaxations;
        stalled = 0;
      }
    }
  }

  LpResult<Scalar>& finish(LpResult<Scalar>& res, LpStatus status) {
    res.status = status;
    res.basis = basis_;
    if (status != LpStatus::Optimal) return res;
    refactor();
    res.x = Vector::Zero(n_);
    for (Eigen::Index i = 0; i < m_; ++i) {
      const int j = basis_[static_cast<std::size_t>(i)];
      if (j < n_) res.x(j) = std::max(xB_(i), Scalar(0));
    }
    Vector cost = Vector::Zero(n_ + m_);
    cost.head(n_) = c_;
    res.y = flip_.asDiagonal() * dual(cost);
    res.objective = c_.dot(res.x);
    // b and A here are the caller's originals (undo the row flips).
    const Vector b_orig = flip_.asDiagonal() * b_;
    res.duality_gap = std::abs(res.objective - b_orig.dot(res.y));
    const Vector slack = c_ - (flip_.asDiagonal() * A_).transpose() * res.y;
    res.dual_infeasibility = std::max(Scalar(0), -slack.minCoeff());
    res.primal_infeasibility = (A_ * res.x - b_).cwiseAbs().maxCoeff();
    return res;
  }

  Eigen::Index m_, n_;
  Matrix A_;
  Vector b_, c_;
  LpOptions opt_;
  Vector flip_;
  Vector col_norm_;
  Scalar feas_tol_;
  std::vector<int> basis_;
  Matrix Binv_;
  Vector xB_;
};

}  // namespace detail

/// Solves min c^T x subject to A x = b, x >= 0 by the two-phase revised simplex method.
/// Pricing is Dantzig's (column-scaled) rule over partial column blocks, switching to Bland's rule after a run of
/// degenerate pivots. A warm basis (column indices; indices >= A.cols() denote the
/// artificial column of row index - A.cols()) skips phase 1 when it is primal feasible.
template <typename Scalar>
LpResult<Scalar> solve_lp(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& A,
                          const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& b,
                          const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& c, const LpOptions& options = {},
                          const std::vector<int>* warm_basis = nullptr) {
  detail::RevisedSimplex<Scalar> solver(A, b, c, options);
  return solver.run(warm_basis);
}

}  // namespace coqm
