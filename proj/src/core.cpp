#include "coqm/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace coqm {

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  require(std::isfinite(lo) && std::isfinite(hi), "Interval: endpoints must be finite");
  require(lo < hi, "Interval: empty interval [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  require(hi - lo <= kTwoPi * (1.0 + 1e-12), "Interval: longer than one period");
}

SignChangeSet::SignChangeSet(std::vector<double> ascending_points) : points_(std::move(ascending_points)) {
  require(!points_.empty(), "SignChangeSet: at least two points required (s >= 1)");
  require(points_.size() % 2 == 0, "SignChangeSet: the number of points must be even, got " +
                                       std::to_string(points_.size()));
  for (std::size_t i = 1; i < points_.size(); ++i)
    require(points_[i - 1] < points_[i], "SignChangeSet: points must be strictly increasing");
  require(points_.back() < points_.front() + kTwoPi, "SignChangeSet: points must lie within one period");
}

double SignChangeSet::y(int i) const {
  const int n = static_cast<int>(points_.size());
  require(i >= 0 && i <= n, "SignChangeSet::y: index out of range");
  if (i == 0) return points_.front() + kTwoPi;
  return points_[static_cast<std::size_t>(n - i)];
}

double SignChangeSet::to_window(double t) const {
  const double lo = window_lo();
  if (t >= lo && t < lo + kTwoPi) return t;
  double w = t - kTwoPi * std::floor((t - lo) / kTwoPi);
  if (w >= lo + kTwoPi) w = lo;
  return w;
}

double SignChangeSet::product(double t) const {
  t = to_window(t);
  double p = 1.0;
  for (double y : points_) p *= (t - y);
  return p;
}

int SignChangeSet::required_sign(double t) const {
  t = to_window(t);
  int above = 0;
  for (double y : points_) {
    if (t == y) return 0;
    if (y > t) ++above;
  }
  return (above % 2 == 0) ? 1 : -1;
}

SignChangeSet SignChangeSet::shifted(double theta) const {
  std::vector<double> p = points_;
  for (double& v : p) v += theta;
  return SignChangeSet(std::move(p));
}

void GridSpec::validate() const {
  require(points_per_degree >= 4, "GridSpec: points_per_degree must be >= 4");
  require(refinement_tolerance > 0.0, "GridSpec: refinement_tolerance must be positive");
  require(max_refinements >= 1, "GridSpec: max_refinements must be >= 1");
}

std::vector<double> chebyshev_lobatto(double a, double b, int count) {
  std::vector<double> x(static_cast<std::size_t>(std::max(count, 2)));
  const int n = static_cast<int>(x.size()) - 1;
  for (int j = 0; j <= n; ++j) {
    const double t = -std::cos(kPi * j / n);
    x[static_cast<std::size_t>(j)] = 0.5 * (a + b) + 0.5 * (b - a) * t;
  }
  x.front() = a;
  x.back() = b;
  return x;
}

std::vector<double> chebyshev_gauss(double a, double b, int count) {
  std::vector<double> x(static_cast<std::size_t>(std::max(count, 1)));
  const int n = static_cast<int>(x.size());
  for (int j = 0; j < n; ++j) {
    const double t = -std::cos(kPi * (2 * j + 1) / (2.0 * n));
    x[static_cast<std::size_t>(j)] = 0.5 * (a + b) + 0.5 * (b - a) * t;
  }
  return x;
}

std::vector<double> cut_points(double lo, double hi, std::span<const double> breakpoints) {
  std::vector<double> cuts{lo, hi};
  for (double b : breakpoints)
    if (b > lo && b < hi) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

Extremum golden_max_abs(const RealFunction& f, double a, double b, double x_tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  Extremum best{a, f(a)};
  auto consider = [&](double x, double v) {
    if (std::abs(v) > std::abs(best.value)) best = {x, v};
  };
  consider(b, f(b));
  double c = b - kInvPhi * (b - a), d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  consider(c, fc);
  consider(d, fd);
  for (int it = 0; it < 200 && (b - a) > x_tol; ++it) {
    if (std::abs(fc) >= std::abs(fd)) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
      consider(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
      consider(d, fd);
    }
  }
  return best;
}

Extremum arg_sup_norm(const RealFunction& f, const Interval& I, const GridSpec& grid, int degree,
                      std::span<const double> breakpoints) {
  grid.validate();
  const double density = std::max(grid.points_per_degree * degree, 256);
  const std::vector<double> cuts = cut_points(I.lo(), I.hi(), breakpoints);

  std::vector<double> xs;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double len = cuts[c + 1] - cuts[c];
    const int count = std::max(16, static_cast<int>(std::ceil(density * len / kTwoPi)));
    const std::vector<double> nodes = chebyshev_lobatto(cuts[c], cuts[c + 1], count);
    xs.insert(xs.end(), nodes.begin() + (c == 0 ? 0 : 1), nodes.end());
  }
  std::vector<double> vs(xs.size());
  Extremum best{xs.front(), 0.0};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    vs[i] = f(xs[i]);
    if (std::abs(vs[i]) > std::abs(best.value) || i == 0) best = {xs[i], vs[i]};
  }

  // Refine discrete local maxima of |f| that could beat the current best.
  struct Candidate {
    std::size_t index;
    double magnitude;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double m = std::abs(vs[i]);
    const bool left_ok = (i == 0) || m >= std::abs(vs[i - 1]);
    const bool right_ok = (i + 1 == xs.size()) || m >= std::abs(vs[i + 1]);
    if (left_ok && right_ok && m >= 0.9 * std::abs(best.value)) candidates.push_back({i, m});
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) { return a.magnitude > b.magnitude; });
  if (candidates.size() > 64) candidates.resize(64);

  for (const Candidate& cand : candidates) {
    const std::size_t i = cand.index;
    const double a = xs[i == 0 ? 0 : i - 1];
    const double b = xs[i + 1 == xs.size() ? i : i + 1];
    if (b <= a) continue;
    const double x_tol = std::max(1e-15 * (1.0 + std::abs(xs[i])), (b - a) * 1e-12);
    const Extremum e = golden_max_abs(f, a, b, x_tol);
    if (std::abs(e.value) > std::abs(best.value)) best = e;
  }
  return best;
}

double sup_norm(const RealFunction& f, const Interval& I, const GridSpec& grid, int degree,
                std::span<const double> breakpoints) {
  return std::abs(arg_sup_norm(f, I, grid, degree, breakpoints).value);
}

double min_gap(const SignChangeSet& Y) {
  double gap = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= 2 * Y.s(); ++j) gap = std::min(gap, Y.y(j - 1) - Y.y(j));
  return gap;
}

MembershipReport membership_report(const RealFunction& dq, const SignChangeSet& Y, const MembershipOptions& options,
                                   const Interval* restrict_to, std::span<const double> breakpoints) {
  double lo = Y.window_lo(), hi = Y.window_hi();
  std::vector<double> extra(Y.points().begin(), Y.points().end());
  for (double b : breakpoints) extra.push_back(Y.to_window(b));
  if (restrict_to != nullptr) {
    // A restriction interval may straddle the window start; fold it into the window.
    const double a = restrict_to->lo(), b = restrict_to->hi();
    if (a >= lo && b <= hi) {
      lo = a;
      hi = b;
    } else {
      lo = a;
      hi = b;
      for (double& e : extra) {
        if (e < lo) e += kTwoPi;
        if (e > hi) e -= kTwoPi;
      }
    }
  }
  const std::vector<double> cuts = cut_points(lo, hi, extra);

  std::vector<double> ts, products, values;
  const double full_density = 4096.0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double len = cuts[c + 1] - cuts[c];
    const int count = std::max(options.points_per_cell, static_cast<int>(std::ceil(full_density * len / kTwoPi)));
    for (double t : chebyshev_gauss(cuts[c], cuts[c + 1], count)) {
      ts.push_back(t);
      products.push_back(Y.product(t));
      values.push_back(dq(t));
    }
  }
  MembershipReport rep;
  double prod_scale = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    rep.dq_scale = std::max(rep.dq_scale, std::abs(values[i]));
    prod_scale = std::max(prod_scale, std::abs(products[i]));
  }
  const double dq_scale = std::max(rep.dq_scale, options.scale_floor);
  if (dq_scale == 0.0 || prod_scale == 0.0) return rep;
  rep.worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double v = values[i] * products[i] / (dq_scale * prod_scale);
    if (v < rep.worst) {
      rep.worst = v;
      rep.at = ts[i];
    }
  }
  rep.member = rep.worst >= -options.rel_tol;
  return rep;
}

CanonicalShift shift_to_canonical(const SignChangeSet& Y) {
  const std::vector<double>& p = Y.points();
  const std::size_t n = p.size();
  std::size_t best = 0;
  double best_gap = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    const double next = (j + 1 < n) ? p[j + 1] : p[0] + kTwoPi;
    const double gap = next - p[j];
    if (gap < best_gap) {
      best_gap = gap;
      best = j;
    }
  }
  const double anchor = (best + 1 < n) ? p[best + 1] : p[0] + kTwoPi;
  const double shift = 0.0 - anchor;
  std::vector<double> q(n);
  for (std::size_t j = 0; j < n; ++j) {
    double v = p[j] + shift;
    while (v < -best_gap - 1e-12 * kTwoPi) v += kTwoPi;
    while (v >= kTwoPi - best_gap - 1e-12 * kTwoPi) v -= kTwoPi;
    q[j] = v;
  }
  std::sort(q.begin(), q.end());
  // Snap the anchored pair so the canonical set is exactly {-b, 0, ...}.
  q[0] = -best_gap;
  q[1] = 0.0;
  return {SignChangeSet(std::move(q)), shift, (best % 2 == 0) ? 1 : -1};
}

}  // namespace coqm
