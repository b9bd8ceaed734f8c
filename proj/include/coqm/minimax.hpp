#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "coqm/core.hpp"
#include "coqm/lp.hpp"
#include "coqm/polynomial.hpp"
#include "coqm/trig_poly.hpp"

namespace coqm {

/// Discrete linear Chebyshev problem
///   min_a max_i |g_i - phi_i . a|  subject to  psi_j . a >= 0,
/// solved through its LP dual (few rows, one column per grid row). The unknowns are
/// expressed in an orthonormalized basis fixed from the initial rows, and grid rows may be
/// appended between solves; the previous optimal basis warm-starts the next solve.
class DiscreteChebyshevLp {
 public:
  using RowVector = Eigen::RowVectorXd;

  /// `initial_rows` fixes the internal basis transform; `target_scale` normalizes g.
  /// Rows of `equalities` impose e . a = 0 exactly (eliminated from the unknowns).
  DiscreteChebyshevLp(const Eigen::MatrixXd& initial_rows, double target_scale, LpOptions options = {},
                      const Eigen::MatrixXd& equalities = {});

  [[nodiscard]] Eigen::Index unknowns() const { return dim_; }
  void add_objective(const RowVector& phi, double g);
  void add_constraint(const RowVector& psi);
  [[nodiscard]] std::size_t objective_rows() const { return g_.size(); }
  [[nodiscard]] std::size_t constraint_rows() const { return psi_.size(); }

  struct Solution {
    Eigen::VectorXd coeffs;
    double error = 0.0;
    double duality_gap = 0.0;
    int iterations = 0;
    int bland_pivots = 0;
  };
  /// Throws LpError when the LP does not reach optimality.
  Solution solve();

 private:
  Eigen::Index dim_;
  Eigen::Index red_ = 0;  // unknowns left after eliminating the equalities
  double scale_;
  LpOptions options_;
  Eigen::MatrixXd transform_;  // a = transform_ * z, z of size red_
  std::vector<RowVector> phi_;
  std::vector<double> g_;
  std::vector<RowVector> psi_;
  std::vector<int> basis_;
  Eigen::Index basis_cols_ = 0;
  Eigen::Index basis_obj_ = 0;
};

/// A basis of the degree-n trigonometric space. The Fourier basis is (1, cos kt, sin kt).
/// The local basis for [c - h, c + h] is T_j(u), j <= n, and sin(t - c) T_j(u), j < n, with
/// u = 1 - 2 sin^2((t - c)/2) / sin^2(h/2); it stays well conditioned on short intervals,
/// where trigonometric coefficients are not.
class TrigBasis {
 public:
  TrigBasis() = default;
  static TrigBasis fourier(int n) { return TrigBasis(n, false, 0.0, kPi); }
  static TrigBasis local(int n, double center, double half);

  [[nodiscard]] int degree() const { return n_; }
  [[nodiscard]] Eigen::Index size() const { return 2 * n_ + 1; }
  [[nodiscard]] bool is_local() const { return local_; }
  [[nodiscard]] double center() const { return center_; }
  [[nodiscard]] double half() const { return half_; }

  /// The basis functions differentiated `order` times at t.
  [[nodiscard]] Eigen::RowVectorXd row(double t, int order = 0) const;
  [[nodiscard]] double eval(const Eigen::VectorXd& coeffs, double t, int order = 0) const {
    return row(t, order).dot(coeffs);
  }
  /// Trigonometric coefficients of sum_k coeffs_k b_k (exact up to rounding).
  [[nodiscard]] TrigPolyd to_trig(const Eigen::VectorXd& coeffs) const;

 private:
  TrigBasis(int n, bool local, double center, double half) : n_(n), local_(local), center_(center), half_(half) {}
  int n_ = 0;
  bool local_ = false;
  double center_ = 0.0;
  double half_ = kPi;
};

/// Co-q-monotonicity requirement T^(q)(t) prod_i (t - y_i) >= 0.
struct CoQConstraint {
  int q;
  SignChangeSet Y;
};

struct MinimaxProblem {
  RealFunction target;
  int degree = 0;
  /// Approximation domain; empty means one full period.
  std::optional<Interval> domain;
  std::optional<CoQConstraint> constraint;
  GridSpec objective_grid{};
  GridSpec constraint_grid{};
  /// Known nonsmooth points or narrow features of the target (grid cut points).
  std::vector<double> breakpoints;
  /// >= 0: also fit a free algebraic polynomial of this degree (objective only).
  int free_poly_degree = -1;
  /// Impose the constraint only on the approximation domain (a relaxation). With a free
  /// polynomial on a short domain the fully constrained optimum has coefficients that grow
  /// rapidly with the degree, while this problem stays well conditioned.
  bool constraint_on_domain = false;
  LpOptions lp{};
};

struct ApproxResult {
  /// The trigonometric part in trigonometric coefficients (see `basis` for evaluation).
  TrigPolyd approximant;
  /// Basis and coefficients the solver worked in; evaluation goes through these.
  TrigBasis basis;
  Eigen::VectorXd basis_coeffs;
  /// The free polynomial part (zero unless free_poly_degree >= 0); approximation = T + P.
  Polynomiald polynomial;
  double error = 0.0;
  double post_check_error = 0.0;
  /// min over the fine grid of T^(q) prod (t - y_i), normalized by max|T^(q)| max|prod|.
  double constraint_violation = 0.0;
  bool constraint_ok = true;
  int lp_iterations = 0;
  double optimality_gap = 0.0;
  int refinements = 0;
  int densifications = 0;
  std::size_t objective_points = 0;
  std::size_t constraint_points = 0;
  /// Objective grid used by the final LP.
  std::vector<double> grid;

  double operator()(double x) const { return trig(x) + polynomial(x); }
  /// The trigonometric part T and its derivatives.
  [[nodiscard]] double trig(double x, int order = 0) const {
    return basis_coeffs.size() ? basis.eval(basis_coeffs, x, order) : approximant.derivative(order)(x);
  }
};

/// Solves the problem with exchange-style grid refinement.
[[nodiscard]] ApproxResult solve_minimax(const MinimaxProblem& problem);

/// E_n(g) on `domain` (full period when empty).
[[nodiscard]] ApproxResult best_approx(const RealFunction& g, int n, std::optional<Interval> domain = std::nullopt,
                                       const GridSpec& grid = {}, std::vector<double> breakpoints = {});

/// E_n^(q)(g, Y) over one full period.
[[nodiscard]] ApproxResult best_co_q_monotone(const RealFunction& g, int n, int q, const SignChangeSet& Y,
                                              const GridSpec& objective_grid = {},
                                              const GridSpec& constraint_grid = {},
                                              std::vector<double> breakpoints = {});

/// Number of sign alternations (largest alternating subsequence) among the points where
/// |residual| >= level, counted circularly when `periodic`.
[[nodiscard]] int count_alternations(std::span<const double> xs, std::span<const double> residuals, double level,
                                     bool periodic);

/// Alternations of g - result over its final grid plus a fine uniform grid.
[[nodiscard]] int residual_alternations(const RealFunction& g, const ApproxResult& result, const Interval& domain,
                                        double rel_level, bool periodic);

}  // namespace coqm
