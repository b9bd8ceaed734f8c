#include "coqm/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace coqm {

DiscreteChebyshevLp::DiscreteChebyshevLp(const Eigen::MatrixXd& initial_rows, double target_scale,
                                         LpOptions options, const Eigen::MatrixXd& equalities)
    : dim_(initial_rows.cols()), scale_(target_scale > 0.0 ? target_scale : 1.0), options_(options) {
  require(dim_ >= 1 && initial_rows.rows() >= 1, "DiscreteChebyshevLp: empty initial rows");
  // Homogeneous equalities E a = 0 are eliminated: a = N w with N an orthonormal null basis.
  Eigen::MatrixXd N = Eigen::MatrixXd::Identity(dim_, dim_);
  if (equalities.rows() > 0) {
    require(equalities.cols() == dim_, "DiscreteChebyshevLp: equality row length mismatch");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> eq(equalities.transpose());
    const Eigen::Index k = eq.rank();
    require(k < dim_, "DiscreteChebyshevLp: equalities leave no freedom");
    const Eigen::MatrixXd Q = eq.householderQ() * Eigen::MatrixXd::Identity(dim_, dim_);
    N = Q.rightCols(dim_ - k);
  }
  red_ = N.cols();
  const Eigen::MatrixXd reduced = initial_rows * N;
  const double rows = static_cast<double>(initial_rows.rows());
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(reduced);
  if (qr.rank() == red_) {
    const Eigen::MatrixXd R = qr.matrixR().topLeftCorner(red_, red_).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd Rinv =
        R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(red_, red_));
    transform_ = std::sqrt(rows) * (N * (qr.colsPermutation() * Rinv));
  } else {
    // Rank-deficient start: fall back to column equilibration.
    Eigen::VectorXd norms = reduced.colwise().norm().transpose();
    for (Eigen::Index j = 0; j < red_; ++j)
      if (norms(j) == 0.0) norms(j) = 1.0;
    transform_ = N * (std::sqrt(rows) * norms.cwiseInverse()).asDiagonal();
  }
}

void DiscreteChebyshevLp::add_objective(const RowVector& phi, double g) {
  require(phi.size() == dim_, "DiscreteChebyshevLp: row length mismatch");
  phi_.push_back(phi * transform_);
  g_.push_back(g / scale_);
}

void DiscreteChebyshevLp::add_constraint(const RowVector& psi) {
  require(psi.size() == dim_, "DiscreteChebyshevLp: row length mismatch");
  // Rows stay unnormalized: the LP's reduced-cost tolerance then bounds the violation
  // in units of the (normalized) target rather than of the row norm.
  RowVector t = psi * transform_;
  if (t.norm() == 0.0) return;  // vacuous
  psi_.push_back(std::move(t));
}

DiscreteChebyshevLp::Solution DiscreteChebyshevLp::solve() {
  // Column layout: objective pairs first (in insertion order), then constraints. Warm
  // basis indices are remapped when rows were appended since the last solve.
  const Eigen::Index nobj = static_cast<Eigen::Index>(g_.size());
  const Eigen::Index ncon = static_cast<Eigen::Index>(psi_.size());
  require(nobj >= 1, "DiscreteChebyshevLp: no objective rows");
  const Eigen::Index m = red_ + 1, ncols = 2 * nobj + ncon;
  // Extended precision keeps reduced costs well above rounding noise on these highly
  // degenerate problems, where double pivoting can stall on noise-level prices.
  using Real = long double;
  using MatrixR = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  using VectorR = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
  MatrixR A(m, ncols);
  VectorR c(ncols), b = VectorR::Zero(m);
  b(0) = -1.0;
  for (Eigen::Index i = 0; i < nobj; ++i) {
    const auto& row = phi_[static_cast<std::size_t>(i)];
    A(0, 2 * i) = -1.0;
    A.col(2 * i).tail(red_) = row.transpose().cast<Real>();
    c(2 * i) = g_[static_cast<std::size_t>(i)];
    A(0, 2 * i + 1) = -1.0;
    A.col(2 * i + 1).tail(red_) = -row.transpose().cast<Real>();
    c(2 * i + 1) = -g_[static_cast<std::size_t>(i)];
  }
  for (Eigen::Index j = 0; j < ncon; ++j) {
    A(0, 2 * nobj + j) = 0.0;
    A.col(2 * nobj + j).tail(red_) = -psi_[static_cast<std::size_t>(j)].transpose().cast<Real>();
    c(2 * nobj + j) = 0.0;
  }

  std::vector<int> warm;
  const std::vector<int>* warm_ptr = nullptr;
  if (!basis_.empty()) {
    // Old layout: [2*nobj_old objective | ncon_old constraint | artificials].
    const Eigen::Index old_obj = 2 * basis_obj_, old_cols = basis_cols_;
    warm.reserve(basis_.size());
    for (int j : basis_) {
      if (j < old_obj) warm.push_back(j);
      else if (j < old_cols) warm.push_back(static_cast<int>(j + 2 * (nobj - basis_obj_)));
      else warm.push_back(static_cast<int>(j - old_cols + ncols));
    }
    warm_ptr = &warm;
  }
  LpResult<Real> res = solve_lp<Real>(A, b, c, options_, warm_ptr);
  if (res.status != LpStatus::Optimal && warm_ptr != nullptr) res = solve_lp<Real>(A, b, c, options_, nullptr);
  if (res.status != LpStatus::Optimal)
    throw LpError(res.status, std::string("minimax LP failed: ") + to_string(res.status));

  // Remember the basis and its layout for the next warm start.
  basis_ = res.basis;
  basis_cols_ = ncols;
  basis_obj_ = nobj;
  Solution sol;
  const Eigen::VectorXd y = res.y.cast<double>();
  sol.error = y(0) * scale_;
  sol.coeffs = scale_ * (transform_ * y.tail(red_));
  sol.duality_gap = static_cast<double>(res.duality_gap) * scale_;
  sol.iterations = res.iterations;
  sol.bland_pivots = res.bland_pivots;
  return sol;
}

TrigBasis TrigBasis::local(int n, double center, double half) {
  require(half > 0.0 && half <= kPi, "TrigBasis::local: half-width must lie in (0, pi]");
  return TrigBasis(n, true, center, half);
}

Eigen::RowVectorXd TrigBasis::row(double t, int order) const {
  require(order >= 0, "TrigBasis::row: negative order");
  if (!local_) return TrigPolyd::basis_row(n_, t, order);
  // Truncated Taylor series in the offset from t, carried through the Chebyshev recurrence.
  const int q = order;
  const double s = t - center_;
  const double K = std::pow(std::sin(0.5 * half_), 2);
  std::vector<double> u(q + 1), sn(q + 1);
  double fact = 1.0;
  for (int k = 0; k <= q; ++k) {
    if (k > 0) fact *= k;
    sn[k] = std::sin(s + k * kPi / 2) / fact;
    u[k] = (k == 0) ? 1.0 - 2.0 * std::pow(std::sin(0.5 * s), 2) / K : -std::sin(s + (k - 1) * kPi / 2) / (K * fact);
  }
  auto mul = [q](const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> c(q + 1, 0.0);
    for (int i = 0; i <= q; ++i)
      for (int j = 0; i + j <= q; ++j) c[i + j] += a[i] * b[j];
    return c;
  };
  double fq = 1.0;
  for (int k = 2; k <= q; ++k) fq *= k;
  Eigen::RowVectorXd row(size());
  std::vector<double> prev(q + 1, 0.0), cur(q + 1, 0.0);
  cur[0] = 1.0;  // T_0
  for (int j = 0; j <= n_; ++j) {
    row(j) = cur[q] * fq;
    if (j < n_) row(n_ + 1 + j) = mul(sn, cur)[q] * fq;
    std::vector<double> next = mul(u, cur);
    for (int k = 0; k <= q; ++k) next[k] = (j == 0 ? 1.0 : 2.0) * next[k] - prev[k];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return row;
}

TrigPolyd TrigBasis::to_trig(const Eigen::VectorXd& coeffs) const {
  require(coeffs.size() == size(), "TrigBasis::to_trig: coefficient count mismatch");
  if (!local_) return TrigPolyd::from_packed(coeffs);
  const int N = 4 * n_ + 4;
  Eigen::VectorXd packed = Eigen::VectorXd::Zero(size());
  for (int i = 0; i < N; ++i) {
    const double t = kTwoPi * i / N;
    const double v = eval(coeffs, t);
    packed(0) += v / N;
    for (int k = 1; k <= n_; ++k) {
      packed(k) += 2.0 * v * std::cos(k * t) / N;
      packed(n_ + k) += 2.0 * v * std::sin(k * t) / N;
    }
  }
  return TrigPolyd::from_packed(packed);
}

namespace {

/// Lobatto nodes over the cut sub-intervals; `count` total, at least `min_per` each.
std::vector<double> cut_grid(const std::vector<double>& cuts, int count, int min_per, bool drop_last) {
  const double total = cuts.back() - cuts.front();
  std::vector<double> xs;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double len = cuts[c + 1] - cuts[c];
    const int k = std::max(min_per, static_cast<int>(std::ceil(count * len / total)));
    const std::vector<double> nodes = chebyshev_lobatto(cuts[c], cuts[c + 1], k);
    xs.insert(xs.end(), nodes.begin() + (c == 0 ? 0 : 1), nodes.end());
  }
  if (drop_last) xs.pop_back();
  return xs;
}

/// Whether a and b lie strictly inside the same arc between sign-change points.
bool Y_sign_equal(const SignChangeSet& Y, double a, double b) {
  return Y.required_sign(a) == Y.required_sign(b) && Y.product(a) * Y.product(b) > 0.0;
}

struct Arc {
  double lo, hi;
};

std::vector<Arc> arcs_of(const SignChangeSet& Y) {
  const auto& p = Y.points();
  std::vector<Arc> arcs;
  for (std::size_t j = 0; j + 1 < p.size(); ++j) arcs.push_back({p[j], p[j + 1]});
  arcs.push_back({p.back(), p.front() + kTwoPi});
  return arcs;
}

/// The parts of the arcs (and their 2 pi translates) inside [lo, hi].
std::vector<Arc> clip_arcs(const std::vector<Arc>& arcs, double lo, double hi) {
  std::vector<Arc> out;
  for (const Arc& a : arcs)
    for (int k = -2; k <= 2; ++k) {
      const double l = std::max(lo, a.lo + k * kTwoPi), h = std::min(hi, a.hi + k * kTwoPi);
      if (h > l) out.push_back({l, h});
    }
  std::sort(out.begin(), out.end(), [](const Arc& x, const Arc& y) { return x.lo < y.lo; });
  return out;
}

class Assembler {
 public:
  Assembler(TrigBasis basis, int poly_degree, double center, double half)
      : basis_(basis), n_(basis.degree()), pd_(poly_degree), c_(center), h_(half) {}
  [[nodiscard]] Eigen::Index dim() const { return 2 * n_ + 1 + (pd_ + 1); }
  [[nodiscard]] Eigen::RowVectorXd objective_row(double x) const {
    Eigen::RowVectorXd row(dim());
    row.head(2 * n_ + 1) = basis_.row(x, 0);
    double u = 1.0;
    const double s = (x - c_) / h_;
    for (int k = 0; k <= pd_; ++k) {
      row(2 * n_ + 1 + k) = u;
      u *= s;
    }
    return row;
  }
  [[nodiscard]] Eigen::RowVectorXd constraint_row(double t, int q, int sigma) const {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(dim());
    row.head(2 * n_ + 1) = static_cast<double>(sigma) * basis_.row(t, q);
    return row;
  }
  void unpack(const Eigen::VectorXd& a, ApproxResult& out) const {
    out.basis = basis_;
    out.basis_coeffs = a.head(2 * n_ + 1);
    out.approximant = basis_.to_trig(out.basis_coeffs);
    if (pd_ < 0) {
      out.polynomial = Polynomiald();
      return;
    }
    Eigen::VectorXd pc = a.tail(pd_ + 1);
    double f = 1.0;
    for (int k = 1; k <= pd_; ++k) {
      f /= h_;
      pc(k) *= f;
    }
    out.polynomial = Polynomiald(c_, std::move(pc));
  }

 private:
  TrigBasis basis_;
  int n_, pd_;
  double c_, h_;
};

}  // namespace

ApproxResult solve_minimax(const MinimaxProblem& pb) {
  require(static_cast<bool>(pb.target), "solve_minimax: missing target");
  require(pb.degree >= 0, "solve_minimax: degree must be nonnegative");
  pb.objective_grid.validate();
  pb.constraint_grid.validate();
  if (pb.constraint) require(pb.constraint->q >= 1, "solve_minimax: q must be >= 1");

  const bool full = !pb.domain.has_value();
  double lo = pb.domain ? pb.domain->lo() : (pb.constraint ? pb.constraint->Y.window_lo() : -kPi);
  double hi = pb.domain ? pb.domain->hi() : lo + kTwoPi;
  const bool periodic = full || (hi - lo) >= kTwoPi * (1.0 - 1e-14);

  std::vector<double> extra;
  for (double bp : pb.breakpoints) {
    double v = bp;
    if (periodic) v -= kTwoPi * std::floor((v - lo) / kTwoPi);
    extra.push_back(v);
  }
  if (pb.constraint)
    for (double y : pb.constraint->Y.points()) {
      double v = y;
      if (periodic) v -= kTwoPi * std::floor((v - lo) / kTwoPi);
      extra.push_back(v);
    }
  const std::vector<double> cuts = cut_points(lo, hi, extra);

  const int n = pb.degree;
  const int base = std::max(40 * n, 512);
  std::vector<double> xs = cut_grid(cuts, base, 16, periodic);
  const bool local_constraint = pb.constraint && pb.constraint_on_domain && !periodic;
  const TrigBasis basis = (periodic || (pb.constraint && !local_constraint))
                              ? TrigBasis::fourier(n)
                              : TrigBasis::local(n, 0.5 * (lo + hi), 0.5 * (hi - lo));
  const Assembler as(basis, pb.free_poly_degree, 0.5 * (lo + hi), 0.5 * (hi - lo));

  Eigen::MatrixXd rows(static_cast<Eigen::Index>(xs.size()), as.dim());
  std::vector<double> gs(xs.size());
  double gscale = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    rows.row(static_cast<Eigen::Index>(i)) = as.objective_row(xs[i]);
    gs[i] = pb.target(xs[i]);
    require(std::isfinite(gs[i]), "solve_minimax: target is not finite at x = " + std::to_string(xs[i]));
    gscale = std::max(gscale, std::abs(gs[i]));
  }
  // A global constraint on a local objective: orthonormalize against full-period rows too.
  Eigen::MatrixXd qr_rows = rows;
  if (pb.constraint && !periodic && !local_constraint) {
    const int extra_rows = 8 * n + 8;
    qr_rows.conservativeResize(rows.rows() + extra_rows, Eigen::NoChange);
    for (int i = 0; i < extra_rows; ++i) {
      // Only the trigonometric part is seen outside the domain.
      Eigen::RowVectorXd row = as.objective_row(kTwoPi * i / extra_rows - kPi);
      row.tail(as.dim() - basis.size()).setZero();
      qr_rows.row(rows.rows() + i) = row;
    }
  }
  // T^(q) flips sign at every y_i, so it vanishes there; these equalities are eliminated.
  // With a free polynomial part, T's constant term duplicates P's and is pinned to zero.
  std::vector<Eigen::RowVectorXd> eqs;
  if (pb.constraint)
    for (double y : pb.constraint->Y.points()) {
      if (local_constraint) {
        y -= kTwoPi * std::floor((y - lo) / kTwoPi);
        if (!(y > lo && y < hi)) continue;
      }
      eqs.push_back(as.constraint_row(y, pb.constraint->q, 1));
    }
  if (pb.free_poly_degree >= 0) eqs.push_back(Eigen::RowVectorXd::Unit(as.dim(), 0));
  Eigen::MatrixXd eq_rows(static_cast<Eigen::Index>(eqs.size()), as.dim());
  for (std::size_t i = 0; i < eqs.size(); ++i) eq_rows.row(static_cast<Eigen::Index>(i)) = eqs[i];
  DiscreteChebyshevLp lp(qr_rows, gscale, pb.lp, eq_rows);
  for (std::size_t i = 0; i < xs.size(); ++i) lp.add_objective(rows.row(static_cast<Eigen::Index>(i)), gs[i]);

  std::vector<Arc> arcs;
  int con_per_arc = std::max(40 * n, 512);
  auto add_constraint_grid = [&](int per_arc) {
    for (const Arc& a : arcs)
      for (double t : chebyshev_gauss(a.lo, a.hi, per_arc))
        lp.add_constraint(as.constraint_row(t, pb.constraint->q, pb.constraint->Y.required_sign(t)));
  };
  if (pb.constraint) {
    arcs = arcs_of(pb.constraint->Y);
    if (local_constraint) arcs = clip_arcs(arcs, lo, hi);
    add_constraint_grid(con_per_arc);
  }

  const double tol = pb.objective_grid.refinement_tolerance * std::max(1.0, gscale);
  const std::vector<double> fine = cut_grid(cuts, 10 * static_cast<int>(xs.size()), 160, periodic);

  ApproxResult out;
  struct Peak {
    double x, v;
  };
  // Objective post-check on the fine grid, refined around local maxima above the LP error.
  auto objective_post_check = [&](std::vector<Peak>& peaks) {
    auto residual = [&](double x) { return pb.target(x) - out(x); };
    std::vector<double> rv(fine.size());
    for (std::size_t i = 0; i < fine.size(); ++i) rv[i] = residual(fine[i]);
    double post = 0.0;
    for (double v : rv) post = std::max(post, std::abs(v));
    for (std::size_t i = 0; i < fine.size(); ++i) {
      const double m = std::abs(rv[i]);
      if (m <= out.error + 0.5 * tol) continue;
      const bool left = (i == 0) || m >= std::abs(rv[i - 1]);
      const bool right = (i + 1 == fine.size()) || m >= std::abs(rv[i + 1]);
      if (!(left && right)) continue;
      const double a = fine[i == 0 ? 0 : i - 1], b = fine[i + 1 == fine.size() ? i : i + 1];
      const Extremum e = (b > a) ? golden_max_abs(residual, a, b, 1e-15 * (1.0 + std::abs(fine[i])))
                                 : Extremum{fine[i], rv[i]};
      peaks.push_back({e.x, std::abs(e.value)});
      post = std::max(post, std::abs(e.value));
    }
    return std::max(post, out.error);
  };
  bool derivative_at_noise = false;
  for (;;) {
    const DiscreteChebyshevLp::Solution sol = lp.solve();
    as.unpack(sol.coeffs, out);
    out.error = sol.error;
    out.optimality_gap = sol.duality_gap;
    out.lp_iterations += sol.iterations;

    std::vector<Peak> peaks;
    out.post_check_error = objective_post_check(peaks);
    // Rounding level of evaluating the approximant: large, nearly cancelling coefficients
    // (trig part against the free polynomial) make it exceed the refinement tolerance.
    const Eigen::VectorXd abs_coeffs = sol.coeffs.cwiseAbs();
    double noise = 0.0;
    for (std::size_t i = 0; i < fine.size(); i += 8)
      noise = std::max(noise, as.objective_row(fine[i]).cwiseAbs().dot(abs_coeffs));
    noise *= 64.0 * std::numeric_limits<double>::epsilon();

    // Constraint post-check on a 10x finer grid.
    std::vector<double> violators;
    if (pb.constraint) {
      const int q = pb.constraint->q;
      std::vector<double> ts, vals, prods;
      double vmax = 0.0, pmax = 0.0;
      for (const Arc& a : arcs)
        for (double t : chebyshev_gauss(a.lo, a.hi, 10 * con_per_arc)) {
          ts.push_back(t);
          vals.push_back(out.trig(t, q));
          prods.push_back(pb.constraint->Y.product(t));
          vmax = std::max(vmax, std::abs(vals.back()));
          pmax = std::max(pmax, std::abs(prods.back()));
        }
      // Derivatives at rounding level relative to the target count as zero.
      const double noise_floor = 1e-6 * gscale * std::pow(std::max(1, n), q);
      const double vscale = std::max(vmax, noise_floor);
      derivative_at_noise = vmax <= noise_floor;
      double worst = 0.0;
      out.constraint_ok = true;
      std::vector<double> sv(ts.size());
      for (std::size_t i = 0; i < ts.size(); ++i) {
        if (pmax > 0.0) worst = std::min(worst, vals[i] * prods[i] / (vscale * pmax));
        sv[i] = pb.constraint->Y.required_sign(ts[i]) * vals[i];
      }
      // Violating local minima, sharpened by golden search, become new constraint points.
      auto deficit = [&](double t) { return std::min(0.0, pb.constraint->Y.required_sign(t) * out.trig(t, q)); };
      for (std::size_t i = 0; i < ts.size(); ++i) {
        if (sv[i] >= -1e-8 * vscale) continue;
        out.constraint_ok = false;
        const bool left = i == 0 || sv[i] <= sv[i - 1];
        const bool right = i + 1 == ts.size() || sv[i] <= sv[i + 1];
        if (!(left && right)) continue;
        const double a = ts[i == 0 ? 0 : i - 1], b = ts[i + 1 == ts.size() ? i : i + 1];
        const bool same_arc = b > a && Y_sign_equal(pb.constraint->Y, a, b);
        violators.push_back(same_arc ? golden_max_abs(deficit, a, b, 1e-14 * (1.0 + std::abs(ts[i]))).x : ts[i]);
      }
      out.constraint_violation = worst;
    }

    const bool objective_done = out.post_check_error - out.error <= std::max(tol, noise);
    if ((objective_done && (out.constraint_ok || derivative_at_noise)) ||
        out.refinements >= pb.objective_grid.max_refinements)
      break;

    if (!out.constraint_ok) {
      // Up to three grid doublings; the violator points are added every round.
      if (out.densifications < 3) {
        con_per_arc *= 2;
        add_constraint_grid(con_per_arc);
        ++out.densifications;
      }
      for (double t : violators)
        lp.add_constraint(as.constraint_row(t, pb.constraint->q, pb.constraint->Y.required_sign(t)));
    }
    if (!objective_done) {
      std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.v > b.v; });
      const std::size_t cap = static_cast<std::size_t>(4 * as.dim() + 8);
      if (peaks.size() > cap) peaks.resize(cap);
      for (const Peak& p : peaks) {
        lp.add_objective(as.objective_row(p.x), pb.target(p.x));
        xs.push_back(p.x);
      }
    }
    ++out.refinements;
  }
  // T^(q) at rounding level on every arc means the optimum has T^(q) = 0, i.e. a constant
  // trigonometric part, and the LP leaves noise of either sign. Keeping only the constant term
  // satisfies the constraint exactly; the post-check measures the (tiny) objective cost.
  if (pb.constraint && !out.constraint_ok && derivative_at_noise) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(out.basis_coeffs.size());
    c(0) = out.basis_coeffs(0);
    out.basis_coeffs = c;
    out.approximant = out.basis.to_trig(c);
    std::vector<Peak> peaks;
    out.post_check_error = objective_post_check(peaks);
    out.constraint_violation = 0.0;
    out.constraint_ok = true;
  }
  std::sort(xs.begin(), xs.end());
  out.grid = std::move(xs);
  out.objective_points = lp.objective_rows();
  out.constraint_points = lp.constraint_rows();
  return out;
}

ApproxResult best_approx(const RealFunction& g, int n, std::optional<Interval> domain, const GridSpec& grid,
                         std::vector<double> breakpoints) {
  MinimaxProblem pb;
  pb.target = g;
  pb.degree = n;
  pb.domain = domain;
  pb.objective_grid = grid;
  pb.breakpoints = std::move(breakpoints);
  return solve_minimax(pb);
}

ApproxResult best_co_q_monotone(const RealFunction& g, int n, int q, const SignChangeSet& Y,
                                const GridSpec& objective_grid, const GridSpec& constraint_grid,
                                std::vector<double> breakpoints) {
  MinimaxProblem pb;
  pb.target = g;
  pb.degree = n;
  pb.constraint = CoQConstraint{q, Y};
  pb.objective_grid = objective_grid;
  pb.constraint_grid = constraint_grid;
  pb.breakpoints = std::move(breakpoints);
  return solve_minimax(pb);
}

int count_alternations(std::span<const double> xs, std::span<const double> residuals, double level, bool periodic) {
  require(xs.size() == residuals.size(), "count_alternations: size mismatch");
  std::vector<std::size_t> order(xs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<int> signs;
  for (std::size_t i : order) {
    if (std::abs(residuals[i]) < level) continue;
    const int s = residuals[i] > 0 ? 1 : -1;
    if (signs.empty() || signs.back() != s) signs.push_back(s);
  }
  int groups = static_cast<int>(signs.size());
  if (periodic && groups > 1 && signs.front() == signs.back()) --groups;
  return groups;
}

int residual_alternations(const RealFunction& g, const ApproxResult& result, const Interval& domain,
                          double rel_level, bool periodic) {
  std::vector<double> xs = result.grid;
  const int extra = 20000;
  for (int i = 0; i < extra; ++i) xs.push_back(domain.lo() + domain.length() * (i + 0.5) / extra);
  std::vector<double> rs(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) rs[i] = g(xs[i]) - result(xs[i]);
  return count_alternations(xs, rs, (1.0 - rel_level) * result.error, periodic);
}

}  // namespace coqm

