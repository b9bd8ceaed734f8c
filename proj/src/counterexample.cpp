#include "coqm/counterexample.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "coqm/bigrational.hpp"
#include "coqm/serialize.hpp"

namespace coqm {

const char* to_string(LedgerMode mode) { return mode == LedgerMode::proven ? "proven" : "empirical"; }

LedgerMode ledger_mode_from_string(const std::string& s) {
  if (s == "proven") return LedgerMode::proven;
  if (s == "empirical") return LedgerMode::empirical;
  throw ValidationError("unknown ledger mode: " + s);
}

namespace {

bool close_rel(double a, double b, double tol = 1e-12) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

void check_qp(int q, int p) {
  require(q >= 3, "ledger: q must be >= 3, got " + std::to_string(q));
  require(p >= q, "ledger: p must be >= q");
}

std::vector<double> s_norms_for(const MollifierTable& M, int m) {
  const int top = std::max(m, 1);
  require(top <= M.j_max(), "ledger: m = " + std::to_string(m) + " exceeds the mollifier table j_max = " +
                                std::to_string(M.j_max()));
  std::vector<double> s(static_cast<std::size_t>(top) + 1);
  for (int j = 0; j <= top; ++j) s[static_cast<std::size_t>(j)] = M.s_norm(j);
  return s;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void ConstantsLedger::derive() {
  require(static_cast<int>(s_norms.size()) > m, "ledger: s_norms shorter than m");
  const double sm = s_norms[static_cast<std::size_t>(m)];
  c_star = 1.0 / (40.0 * c0);
  c6 = c3 / (2.0 * c5);
  c7 = std::pow(c6, m) / sm;
  c10 = c7 * c3 / 2.0;
  c8_j.assign(static_cast<std::size_t>(m) + 1, 0.0);
  for (int j = 0; j <= m; ++j)
    c8_j[static_cast<std::size_t>(j)] =
        std::pow(c6, m - j) * std::pow(b_max, r * (m - j)) * s_norms[static_cast<std::size_t>(j)] / sm;
  c8 = *std::max_element(c8_j.begin(), c8_j.end());
  c9 = c7 * c4 * std::pow(b_max, r * m);
}

std::vector<std::string> ConstantsLedger::check() const {
  std::vector<std::string> bad;
  if (r != q - 1) bad.push_back("r != q - 1");
  if (m != p - r) bad.push_back("m != p - r");
  if (q < 3 || p < q) bad.push_back("need p >= q >= 3");
  for (double v : {c0, c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c_star, d, b_max})
    if (!(v > 0.0) || !std::isfinite(v)) {
      bad.push_back("constants must be positive and finite");
      break;
    }
  if (!bad.empty()) return bad;
  ConstantsLedger ref = *this;
  ref.derive();
  const std::pair<const char*, std::pair<double, double>> ids[] = {
      {"c_star = 1/(40 c0)", {c_star, ref.c_star}}, {"c6 = c3/(2 c5)", {c6, ref.c6}},
      {"c7 = c6^m/s_m", {c7, ref.c7}},             {"c10 = c7 c3/2", {c10, ref.c10}},
      {"c8 = max_j c8_j", {c8, ref.c8}},           {"c9 = c7 c4 D^{rm}", {c9, ref.c9}}};
  for (const auto& [name, vals] : ids)
    if (!close_rel(vals.first, vals.second)) bad.push_back(std::string("identity violated: ") + name);
  if (mode == LedgerMode::proven) {
    if (!(c0 < 10.0)) bad.push_back("proven: c0 < 10 violated");
    if (!(c1 >= 1.0 / (80.0 * c0) * (1.0 - 1e-15))) bad.push_back("proven: c1 >= 1/(80 c0) violated");
    if (!(c3 >= std::pow(2.0, -r) * c1 / c2 * (1.0 - 1e-15))) bad.push_back("proven: c3 >= 2^-r c1/c2 violated");
  }
  return bad;
}

std::string ConstantsLedger::hash() const {
  std::string text = std::string(to_string(mode)) + "|" + std::to_string(q) + "|" + std::to_string(p) + "|" + fmt(d) +
                     "|" + fmt(b_max);
  for (double v : {c0, c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c_star}) text += "|" + fmt(v);
  for (double v : s_norms) text += "|" + fmt(v);
  return fnv1a_hex(text);
}

ConstantsLedger proven_ledger(int q, int p, const MollifierTable& M) {
  check_qp(q, p);
  ConstantsLedger L;
  L.mode = LedgerMode::proven;
  L.q = q;
  L.p = p;
  L.r = q - 1;
  L.m = p - L.r;
  L.d = kPi;
  L.b_max = kPi / 4;
  L.s_norms = s_norms_for(M, L.m);
  L.c0 = 9.0;
  L.c1 = 1.0 / (80.0 * L.c0);
  L.c2 = 100.0;
  L.c3 = std::pow(2.0, -L.r) * L.c1 / L.c2;
  L.c4 = 2.0 * std::pow(kPi, L.r);
  L.c5 = 8.0 * std::pow(kPi, L.r - 1);
  L.derive();
  L.provenance = {
      {"c0", "9: any value below the stated bound c0 < 10"},
      {"c1", "1/(80 c0), the stated lower bound"},
      {"c2", "100: assumed; no explicit value is available for this constant"},
      {"c3", "2^-r c1/c2, the stated lower bound"},
      {"c4", "2 pi^r: zero-mean periodic levels below ||E^(r)|| < 2"},
      {"c5", "8 pi^(r-1): unrolled distance bound"},
      {"d", "pi: bound on every gap"},
      {"b_max", "pi/4 >= b_1 = d/4 >= b_k: the D in c8 and c9"},
      {"c6..c10", "ledger identities"}};
  return L;
}

ConstantsLedger empirical_ledger(int q, int p, double d, const MeasuredConstants& measured, const MollifierTable& M) {
  check_qp(q, p);
  require(d > 0.0 && d <= kPi, "empirical_ledger: d must lie in (0, pi]");
  ConstantsLedger L;
  L.mode = LedgerMode::empirical;
  L.q = q;
  L.p = p;
  L.r = q - 1;
  L.m = p - L.r;
  L.d = d;
  L.b_max = d / 4;
  L.s_norms = s_norms_for(M, L.m);
  L.c0 = measured.c0;
  L.c1 = measured.c1;
  L.c2 = measured.c2;
  L.c3 = measured.c3;
  L.c4 = measured.c4;
  L.c5 = measured.c5;
  for (double v : {L.c0, L.c1, L.c2, L.c3, L.c4, L.c5})
    require(v > 0.0 && std::isfinite(v), "empirical_ledger: measured constants must be positive");
  L.derive();
  L.provenance = measured.provenance;
  L.provenance["c6..c10"] = "ledger identities";
  return L;
}

double lambda_n_b(double n, double b, const ConstantsLedger& L) {
  require(n >= 1.0, "lambda_n_b: n must be >= 1");
  require(b > 0.0, "lambda_n_b: b must be positive");
  return L.c6 * std::pow(b, L.r) / n;
}

namespace {

double checked_lambda(double n, double b, double d, const ConstantsLedger& L) {
  require(d > 0.0 && d <= kPi, "build_f_nb: d must lie in (0, pi]");
  require(b > 0.0, "build_f_nb: b must be positive");
  require(b <= L.b_max * (1.0 + 1e-12), "build_f_nb: b exceeds the ledger bound b_max = d/4");
  require(n >= 3.0 * L.c6 * std::pow(b, L.r) * (1.0 - 1e-12), "build_f_nb: need n >= 3 c6 b^r");
  const double lambda = lambda_n_b(n, b, L);
  require(lambda <= d / 3.0 * (1.0 + 1e-12), "build_f_nb: lambda_{n,b} exceeds d/3");
  if (lambda < kMinRealizableLambda)
    throw NumericalError("build_f_nb: lambda_{n,b} = " + fmt(lambda) + " is below the realizable floor (plan-only level)");
  return lambda;
}

}  // namespace

ScaledSpline::ScaledSpline(double n, double b, double d, const ConstantsLedger& L,
                           std::shared_ptr<const MollifierTable> M)
    : n_(n),
      b_(b),
      amp_(L.c7 * std::pow(b, L.r * L.m) / std::pow(n, L.m)),
      spline_(L.r, d, checked_lambda(n, b, d, L), std::move(M)) {}

ScaledSpline build_f_nb(double n, double b, double d, const ConstantsLedger& L,
                        std::shared_ptr<const MollifierTable> M) {
  return ScaledSpline(n, b, d, L, std::move(M));
}

const char* to_string(EpsRule rule) {
  switch (rule) {
    case EpsRule::log: return "log";
    case EpsRule::linear: return "linear";
    case EpsRule::exp: return "exp";
  }
  return "log";
}

EpsRule eps_rule_from_string(const std::string& s) {
  if (s == "log") return EpsRule::log;
  if (s == "linear") return EpsRule::linear;
  if (s == "exp") return EpsRule::exp;
  throw ValidationError("unknown eps rule: " + s + " (expected log, linear, exp)");
}

namespace {

/// Relative slack applied to log-domain comparisons so that rounding cannot flip them.
constexpr double kLogMargin = 1e-12;

/// Rational lower bound of e: the exp rule is checked as e_lo^n c10 B >= k, which implies
/// e^n c10 B >= k and is decidable exactly.
const mpq_class& e_low() {
  static const mpq_class v = parse_rational("2718281828/1000000000");
  return v;
}

/// Smallest n0 >= 0 with e_lo^{n0} c10 B >= k (exact; n >= n0 is the exp-rule condition).
mpz_class exp_rule_threshold(const mpq_class& c10B, int k) {
  const mpq_class kq(k);
  if (c10B >= kq) return 0;
  const double guess = (std::log(static_cast<double>(k)) - log_rational(c10B)) / std::log(2.718281828);
  unsigned n0 = guess > 3.0 ? static_cast<unsigned>(guess) - 2 : 0;
  mpq_class power = pow_rational(e_low(), n0);
  while (power * c10B < kq) {
    power *= e_low();
    ++n0;
  }
  return n0;
}

/// eps-growth condition: eps(n) * c10 * B >= k, B = b_k^{r(m+1)}. Exact for the linear and exp
/// rules; the log rule is compared in the log domain with a conservative margin.
bool holds_eps_growth(EpsRule rule, const mpz_class& n, const mpq_class& c10B, int k) {
  switch (rule) {
    case EpsRule::linear:
      return mpq_class(n) * c10B >= mpq_class(k);
    case EpsRule::exp:
      return n >= exp_rule_threshold(c10B, k);
    case EpsRule::log: {
      // log(n + 2) >= k / (c10 B), compared as log(log(n + 2)) >= log(k) - log(c10 B)
      const double need = std::log(static_cast<double>(k)) - log_rational(c10B);
      const double have = std::log(log_integer(n + 2));
      return have >= need + kLogMargin * (1.0 + std::abs(need));
    }
  }
  return false;
}

/// Bits of n needed by eps-growth under the log rule (used to fail fast).
double bits_needed_eps_log(const mpq_class& c10B, int k) {
  const double need = std::log(static_cast<double>(k)) - log_rational(c10B);  // log of the required log(n)
  if (need > 700.0) return HUGE_VAL;
  return std::exp(need) / std::numbers::ln2;
}

struct Levels {
  const mpq_class& c6;
  const mpq_class& c9;
  const mpq_class& c10;
  int r, m;
};

bool holds_lambda_bound(const Levels& L, const mpz_class& n, const mpq_class& b) {
  return 3 * L.c6 * pow_rational(b, static_cast<unsigned>(L.r)) / mpq_class(n) < b;
}

bool holds_tail_decay(const Levels& L, const mpz_class& n, const mpz_class& n_prev, const mpq_class& b_prevprev) {
  const mpq_class lhs = L.c9 / mpq_class(pow_integer(n, static_cast<unsigned>(L.m)));
  const mpq_class rhs = L.c10 * pow_rational(b_prevprev, static_cast<unsigned>(L.r * (L.m + 1))) /
                        (10 * mpq_class(pow_integer(n_prev, static_cast<unsigned>(L.m + 1))));
  return lhs <= rhs;
}

mpq_class lambda_exact(const Levels& L, const mpz_class& n, const mpq_class& b) {
  mpq_class out = L.c6 * pow_rational(b, static_cast<unsigned>(L.r)) / mpq_class(n);
  out.canonicalize();
  return out;
}

/// Smallest integer n >= lo with pred(n); pred must be monotone.
template <typename Pred>
mpz_class smallest_with(const mpz_class& lo, Pred pred, unsigned max_bits, const std::string& what) {
  if (pred(lo)) return lo;
  mpz_class bad = lo, good = lo;
  for (;;) {
    good *= 2;
    if (mpz_sizeinbase(good.get_mpz_t(), 2) > max_bits)
      throw NumericalError("plan_recursion: " + what + " needs n beyond " + std::to_string(max_bits) + " bits");
    if (pred(good)) break;
    bad = good;
  }
  while (good - bad > 1) {
    const mpz_class mid = (good + bad) / 2;
    if (pred(mid)) good = mid;
    else bad = mid;
  }
  return good;
}

}  // namespace

RecursionPlan plan_recursion(const SignChangeSet& Y, int q, int p, EpsRule eps, int K, const ConstantsLedger& L,
                             const PlanOptions& options) {
  check_qp(q, p);
  require(K >= 0, "plan_recursion: K must be nonnegative");
  require(L.q == q && L.p == p, "plan_recursion: ledger was built for different (q, p)");
  const std::vector<std::string> bad = L.check();
  require(bad.empty(), "plan_recursion: inconsistent ledger: " + (bad.empty() ? std::string() : bad.front()));

  const CanonicalShift cs = shift_to_canonical(Y);
  RecursionPlan plan;
  plan.q = q;
  plan.p = p;
  plan.r = q - 1;
  plan.m = p - plan.r;
  plan.K = K;
  plan.eps = eps;
  plan.d = min_gap(cs.canonical);
  require(plan.d <= L.d * (1.0 + 1e-9), "plan_recursion: gap d exceeds the ledger's validity bound");
  if (L.mode == LedgerMode::empirical)
    require(std::abs(plan.d - L.d) <= 1e-9 * L.d, "plan_recursion: empirical ledger was calibrated for another gap");
  plan.d_exact = exact_rational(plan.d);
  plan.shift = cs.shift;
  plan.orientation = cs.orientation;
  plan.canonical_points = cs.canonical.points();
  plan.c6 = exact_rational(L.c6);
  plan.c9 = exact_rational(L.c9);
  plan.c10 = exact_rational(L.c10);
  plan.ledger_hash = L.hash();
  plan.mode = L.mode;

  const Levels lv{plan.c6, plan.c9, plan.c10, plan.r, plan.m};
  const unsigned rm1 = static_cast<unsigned>(plan.r * (plan.m + 1));
  plan.entries.push_back({1, ceil_rational(3 * plan.c6 * pow_rational(plan.d_exact, static_cast<unsigned>(plan.r))),
                          mpq_class(plan.d_exact / 4)});
  plan.entries.back().b.canonicalize();
  if (plan.entries.back().n < 1) plan.entries.back().n = 1;

  for (int k = 1; k <= K; ++k) {
    const PlanEntry& cur = plan.entries[static_cast<std::size_t>(k - 1)];
    const mpq_class c10B = plan.c10 * pow_rational(cur.b, rm1);
    if (eps == EpsRule::log && bits_needed_eps_log(c10B, k) > options.max_bits)
      throw NumericalError("plan_recursion: eps(n) = log(n+2) grows too slowly for eps-growth at k = " + std::to_string(k) +
                           " (n would need more than " + std::to_string(options.max_bits) + " bits)");
    const mpz_class n_k = cur.n;
    const mpq_class b_k = cur.b;
    const bool has93 = k >= 2;
    const mpq_class b_km1 = has93 ? plan.entries[static_cast<std::size_t>(k - 2)].b : mpq_class(0);
    auto pred = [&](const mpz_class& n) {
      if (!holds_lambda_bound(lv, n, b_k)) return false;
      if (!holds_eps_growth(eps, n, c10B, k)) return false;
      return !has93 || holds_tail_decay(lv, n, n_k, b_km1);
    };
    const mpz_class n_next = smallest_with(2 * n_k, pred, options.max_bits, "level " + std::to_string(k + 1));
    plan.entries.push_back({k + 1, n_next, lambda_exact(lv, n_next, b_k)});
  }
  return plan;
}

std::vector<PlanCheckItem> verify_plan(const RecursionPlan& plan) {
  std::vector<PlanCheckItem> out;
  const Levels lv{plan.c6, plan.c9, plan.c10, plan.r, plan.m};
  const unsigned rm1 = static_cast<unsigned>(plan.r * (plan.m + 1));
  require(static_cast<int>(plan.entries.size()) == plan.K + 1, "verify_plan: entry count does not match K");
  const PlanEntry& first = plan.level(1);
  const bool init_ok = first.n == std::max(mpz_class(1), ceil_rational(3 * plan.c6 *
                                                                      pow_rational(plan.d_exact, static_cast<unsigned>(plan.r)))) &&
                       first.b == plan.d_exact / 4;
  out.push_back({1, "init", init_ok, true, "n_1 = ceil(3 c6 d^r), b_1 = d/4"});
  for (int k = 1; k <= plan.K; ++k) {
    const PlanEntry& cur = plan.level(k);
    const PlanEntry& next = plan.level(k + 1);
    out.push_back({k, "n>=2n", next.n >= 2 * cur.n, true, "n_{k+1} >= 2 n_k"});
    out.push_back({k, "lambda-bound", holds_lambda_bound(lv, next.n, cur.b), true, "3 lambda_{n_{k+1},b_k} < b_k"});
    const mpq_class c10B = plan.c10 * pow_rational(cur.b, rm1);
    out.push_back({k, "eps-growth", holds_eps_growth(plan.eps, next.n, c10B, k), plan.eps != EpsRule::log,
                   std::string("eps(n_{k+1}) c10 b_k^{r(m+1)} >= k, eps = ") + to_string(plan.eps)});
    if (k >= 2)
      out.push_back({k, "tail-decay", holds_tail_decay(lv, next.n, cur.n, plan.level(k - 1).b), true,
                     "c9/n_{k+1}^m <= c10 b_{k-1}^{r(m+1)} / (10 n_k^{m+1})"});
    out.push_back({k, "b-recursion", next.b == lambda_exact(lv, next.n, cur.b), true, "b_{k+1} = lambda_{n_{k+1},b_k}"});
    // Minimality: n_{k+1} - 1 must fail some condition (or fall below 2 n_k).
    const mpz_class prev = next.n - 1;
    bool prev_ok = prev >= 2 * cur.n && holds_lambda_bound(lv, prev, cur.b) && holds_eps_growth(plan.eps, prev, c10B, k) &&
                   (k < 2 || holds_tail_decay(lv, prev, cur.n, plan.level(k - 1).b));
    out.push_back({k, "minimal", !prev_ok, plan.eps != EpsRule::log, "n_{k+1} - 1 does not qualify"});
  }
  // Supports of consecutive summands' higher derivatives are disjoint. Summand k has
  // support [-d + b_{k+1}, -d + 3 b_{k+1}] u [b_{k+1}, 3 b_{k+1}].
  for (int k = 1; k + 1 <= plan.K; ++k) {
    const mpq_class& ba = plan.level(k + 1).b;
    const mpq_class& bb = plan.level(k + 2).b;
    const mpq_class A[2][2] = {{-plan.d_exact + ba, -plan.d_exact + 3 * ba}, {ba, 3 * ba}};
    const mpq_class B[2][2] = {{-plan.d_exact + bb, -plan.d_exact + 3 * bb}, {bb, 3 * bb}};
    bool disjoint = true;
    for (const auto& I : A)
      for (const auto& J : B)
        if (!(I[1] < J[0] || J[1] < I[0])) disjoint = false;
    out.push_back({k, "support-disjoint", disjoint, true, "supports of summands k and k+1 are disjoint"});
  }
  return out;
}

bool plan_ok(const std::vector<PlanCheckItem>& items) {
  return std::all_of(items.begin(), items.end(), [](const PlanCheckItem& i) { return i.ok; });
}

PartialSum::PartialSum(std::vector<ScaledSpline> summands, double shift, int orientation, double tail_bound,
                       bool tail_from_next_level)
    : summands_(std::move(summands)),
      shift_(shift),
      orientation_(orientation),
      tail_bound_(tail_bound),
      tail_from_next_level_(tail_from_next_level) {}

double PartialSum::canonical_partial(double x, int order, int count) const {
  double v = 0.0;
  for (int k = 0; k < count && k < K(); ++k) v += summands_[static_cast<std::size_t>(k)].derivative(x, order);
  return v;
}

double PartialSum::derivative(double x, int order) const {
  return orientation_ * canonical_partial(x + shift_, order, K());
}

std::vector<double> PartialSum::breakpoints() const {
  std::vector<double> out;
  for (const ScaledSpline& f : summands_)
    for (double z : f.zone_boundaries()) out.push_back(z - shift_);
  std::sort(out.begin(), out.end());
  return out;
}

PartialSum build_partial_sum(const RecursionPlan& plan, int K, const ConstantsLedger& L,
                             std::shared_ptr<const MollifierTable> M) {
  require(K >= 0, "build_partial_sum: K must be nonnegative");
  require(K <= plan.K, "build_partial_sum: K = " + std::to_string(K) + " exceeds the realized plan (K = " +
                           std::to_string(plan.K) + ")");
  require(L.hash() == plan.ledger_hash, "build_partial_sum: ledger does not match the plan");
  std::vector<ScaledSpline> summands;
  for (int k = 1; k <= K; ++k) {
    const double lam = to_double(plan.level(k + 1).b);
    if (!(lam >= kMinRealizableLambda))
      throw NumericalError("build_partial_sum: level " + std::to_string(k) + " is plan-only (lambda = " +
                           scientific(plan.level(k + 1).b) + " below " + fmt(kMinRealizableLambda) + ")");
    summands.push_back(build_f_nb(to_double(mpq_class(plan.level(k + 1).n)), to_double(plan.level(k).b), plan.d, L, M));
  }
  // Tail: 2 c9 / n_{K+2}^m when that level is planned, else c9 / ((2^m - 1) n_{K+1}^m),
  // which only uses n_{j+1} >= 2 n_j.
  const unsigned m = static_cast<unsigned>(plan.m);
  double tail = 0.0;
  bool from_next = false;
  if (K + 2 <= static_cast<int>(plan.entries.size())) {
    tail = to_double(2 * plan.c9 / mpq_class(pow_integer(plan.level(K + 2).n, m)));
    from_next = true;
  } else {
    tail = to_double(plan.c9 / (mpq_class((mpz_class(1) << m) - 1) * mpq_class(pow_integer(plan.level(K + 1).n, m))));
  }
  return PartialSum(std::move(summands), plan.shift, plan.orientation, tail, from_next);
}

namespace {

std::vector<double> cuts_with(const std::vector<double>& zones, double extra) {
  std::vector<double> out = zones;
  out.push_back(extra);
  return out;
}

}  // namespace

RealizationCheck check_f_nb(const ScaledSpline& f, const SignChangeSet& canonical, int q, int m) {
  RealizationCheck rc;
  const Interval window = f.spline().window();
  const std::vector<double> cuts = cuts_with(f.zone_boundaries(), 0.0);
  const int top = f.r() + m;
  for (int j = 0; j <= top; ++j)
    rc.derivative_norms.push_back(
        sup_norm([&f, j](double x) { return f.derivative(x, j); }, window, GridSpec{}, 0, cuts));
  rc.top_derivative_norm = rc.derivative_norms.back();
  const MembershipReport mr = membership_report([&f, q](double x) { return f.derivative(x, q); }, canonical,
                                                MembershipOptions{}, nullptr, cuts);
  rc.membership = mr.member;
  rc.membership_worst = mr.worst;
  return rc;
}

RealizationCheck check_partial_sum(const PartialSum& f, const SignChangeSet& Y, int q, int p) {
  RealizationCheck rc;
  const std::vector<double> cuts = f.breakpoints();
  const Interval window(Y.window_lo(), Y.window_hi());
  std::vector<double> wrapped;
  for (double c : cuts) wrapped.push_back(Y.to_window(c));
  for (double y : Y.points()) wrapped.push_back(y);
  for (int j = 0; j <= p; ++j)
    rc.derivative_norms.push_back(
        sup_norm([&f, j](double x) { return f.derivative(x, j); }, window, GridSpec{}, 0, wrapped));
  rc.top_derivative_norm = rc.derivative_norms.back();
  const MembershipReport mr =
      membership_report([&f, q](double x) { return f.derivative(x, q); }, Y, MembershipOptions{}, nullptr, wrapped);
  rc.membership = mr.member;
  rc.membership_worst = mr.worst;
  return rc;
}

double polynomial_fit_residual(const PartialSum& f, double b_K, int r) {
  require(b_K > 0.0, "polynomial_fit_residual: b_K must be positive");
  require(f.K() >= 1, "polynomial_fit_residual: need at least one summand");
  const std::vector<double> xs = chebyshev_lobatto(-b_K, b_K, 201);
  Eigen::MatrixXd V(static_cast<Eigen::Index>(xs.size()), r + 1);
  Eigen::VectorXd g(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double u = xs[i] / b_K;
    double pw = 1.0;
    for (int j = 0; j <= r; ++j) {
      V(static_cast<Eigen::Index>(i), j) = pw;
      pw *= u;
    }
    g(static_cast<Eigen::Index>(i)) = f.canonical_partial(xs[i], 0, f.K() - 1);
  }
  const Eigen::VectorXd c = V.colPivHouseholderQr().solve(g);
  const double scale = std::max(g.cwiseAbs().maxCoeff(), 1e-300);
  return (V * c - g).cwiseAbs().maxCoeff() / scale;
}

}  // namespace coqm
