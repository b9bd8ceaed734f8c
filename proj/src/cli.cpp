#include "coqm/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "coqm/bigrational.hpp"
#include "coqm/counterexample.hpp"
#include "coqm/experiments.hpp"
#include "coqm/minimax.hpp"
#include "coqm/report.hpp"
#include "coqm/serialize.hpp"
#include "coqm/splines.hpp"

namespace coqm {
namespace {

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

/// Every parameter any command accepts; each subcommand binds the subset it uses.
struct Params {
  std::string config, out, ledger, eps, target, artifact, name;
  int jobs = 1;
  std::uint64_t seed = 20240601;
  int r = -1, q = 3, p = 4, K = 2, free_poly = -1, restarts = 200, points_per_degree = 20;
  unsigned max_bits = 1u << 20;
  double b = kUnset, d = kUnset, lambda = kUnset;
  bool constraint_on_domain = false;
  std::vector<int> n, knots;
  std::vector<double> Y, domain, b_list;
};

void add_common(CLI::App* app, Params& P) {
  app->add_option("--config", P.config, "JSON config file (command-line flags win)");
  app->add_option("--out", P.out, "Output directory (default: $COQM_OUTPUT_ROOT/<command>-<hash>)");
  app->add_option("--jobs", P.jobs, "Worker threads for experiment cells")->check(CLI::PositiveNumber);
  app->add_option("--seed", P.seed, "Base random seed");
}

bool given(const CLI::App* app, const std::string& name) {
  const CLI::Option* opt = app->get_option_no_throw("--" + name);
  return opt != nullptr && opt->count() > 0;
}

std::vector<std::string> json_to_results(const Json& v, const std::string& key) {
  std::vector<std::string> out;
  auto scalar = [&](const Json& x) {
    if (x.is_boolean()) return std::string(x.get<bool>() ? "true" : "false");
    if (x.is_number_integer() || x.is_number_unsigned()) return x.dump();
    if (x.is_number_float()) return x.dump();
    if (x.is_string()) return x.get<std::string>();
    throw ValidationError("config key '" + key + "': unsupported value " + x.dump());
  };
  if (v.is_array())
    for (const Json& x : v) out.push_back(scalar(x));
  else
    out.push_back(scalar(v));
  return out;
}

/// Fills options not given on the command line from the JSON config; unknown keys are rejected.
void apply_config(CLI::App* leaf, const std::string& path) {
  const Json cfg = read_json_file(path);
  if (!cfg.is_object()) throw ValidationError("config " + path + ": expected a JSON object");
  for (const auto& item : cfg.items()) {
    const std::string& key = item.key();
    if (key == "command") continue;
    CLI::Option* opt = key == "config" ? nullptr : leaf->get_option_no_throw("--" + key);
    if (opt == nullptr) throw ValidationError("config " + path + ": unknown key '" + key + "'");
    if (opt->count() > 0) continue;
    for (const std::string& s : json_to_results(item.value(), key)) opt->add_result(s);
    try {
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw ValidationError("config key '" + key + "': " + e.what());
    }
  }
}

std::string run_dir(const Params& P, const std::string& label, const Json& resolved) {
  if (!P.out.empty()) return P.out;
  const char* root = std::getenv(kOutputRootEnv);
  return std::string(root != nullptr && *root != '\0' ? root : "coqm-runs") + "/" + label + "-" +
         content_hash(resolved).substr(0, 8);
}

/// A run's output directory plus its summary lines.
struct Run {
  std::string dir;
  std::ostringstream summary;

  Run(const Params& P, const std::vector<std::string>& command, Json resolved) {
    std::string label;
    for (const std::string& c : command) label += (label.empty() ? "" : "-") + c;
    resolved["command"] = command;
    resolved["seed"] = P.seed;
    resolved["jobs"] = P.jobs;
    dir = run_dir(P, label, resolved);
    resolved["out"] = dir;
    write_json_file(dir + "/config-echo.json", resolved);
  }
  template <typename T>
  void line(const std::string& key, const T& value) {
    summary << key << ": " << value << "\n";
  }
  void finish(std::ostream& out) {
    line("output", dir);
    write_text_file(dir + "/summary.txt", summary.str());
    out << summary.str();
  }
};

std::string num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

ConstantsLedger load_ledger(const std::string& spec, int q, int p, const MollifierTable& M) {
  if (spec.empty() || spec == "proven") return proven_ledger(q, p, M);
  Json j = read_json_file(spec);
  if (j.contains("artifacts") && j.at("artifacts").contains("ledger")) j = j.at("artifacts").at("ledger");
  return ledger_from_json(j, M);
}

/// Ledger for (q, p); a ledger file fixes (q, p) and conflicts with explicit flags.
ConstantsLedger resolve_ledger(const CLI::App* leaf, Params& P, const MollifierTable& M) {
  ConstantsLedger L = load_ledger(P.ledger, P.q, P.p, M);
  if (!P.ledger.empty() && P.ledger != "proven") {
    require(!given(leaf, "q") || P.q == L.q, "--q conflicts with the ledger's q = " + std::to_string(L.q));
    require(!given(leaf, "p") || P.p == L.p, "--p conflicts with the ledger's p = " + std::to_string(L.p));
    P.q = L.q;
    P.p = L.p;
  }
  return L;
}

int first_n(const Params& P, int fallback) { return P.n.empty() ? fallback : P.n.front(); }

// ---------------------------------------------------------------------------

int cmd_build_ideal(Params& P, std::ostream& out) {
  const int r = P.r < 0 ? 1 : P.r;
  const double b = std::isnan(P.b) ? kPi : P.b;
  const IdealSpline E = build_ideal_spline(r, b);
  Run run(P, {"build", "ideal"}, {{"r", r}, {"b", b}});
  const double top = sup_norm([&](double x) { return E.derivative(x, r); }, E.window(), {}, 0, E.breakpoints());
  const double mean = E.spline().integral() / kTwoPi;
  const SignChangeSet Y(std::vector<double>{-b, 0.0});
  const bool member = delta_q_membership([&](double x) { return E.derivative(x, r + 1); }, Y);
  Json artifact = to_json(E);
  artifact["summary"] = {{"top_derivative_norm", top}, {"one_plus_gamma_b", 1.0 + gamma_b(b)},
                         {"period_mean", mean},        {"membership_q_r_plus_1", member}};
  write_json_file(run.dir + "/artifact.json", artifact);
  run.line("kind", "ideal");
  run.line("r", r);
  run.line("b", num(b));
  run.line("||E^(r)||", num(top));
  run.line("1 + gamma_b", num(1.0 + gamma_b(b)));
  run.line("period mean", num(mean));
  run.line("support", "window [" + num(-b) + ", " + num(kTwoPi - b) + "], breakpoints {-b, 0}");
  run.line("membership Delta^(r+1)({-b, 0})", member ? "true" : "false");
  run.finish(out);
  return kExitOk;
}

int cmd_build_smooth(Params& P, std::ostream& out) {
  const int r = P.r < 0 ? 1 : P.r;
  const double d = std::isnan(P.d) ? kPi : P.d;
  const double lambda = std::isnan(P.lambda) ? d / 12 : P.lambda;
  require(lambda > 0.0 && lambda <= d / 3, "build smooth: lambda must lie in (0, d/3]");
  auto M = build_mollifier();
  const SmoothSpline S = build_smooth_spline(r, d, lambda, M);
  Run run(P, {"build", "smooth"}, {{"r", r}, {"d", d}, {"lambda", lambda}});
  const std::vector<double> br = S.zone_boundaries();
  const IdealSpline E = build_ideal_spline(r, d);
  const double dist = sup_norm([&](double x) { return S(x) - E(x); }, S.window(), {}, 0, br);
  Json ratios = Json::array();
  for (int j = 1; j <= 2; ++j) {
    const double v = sup_norm([&](double x) { return S.derivative(x, r + j); }, S.window(), {}, 0, br);
    ratios.push_back(v * std::pow(lambda, j) / M->s_norm(j));
    run.line("||E^(r+" + std::to_string(j) + ")|| lambda^j / s_j", num(ratios.back().get<double>()));
  }
  Json artifact = to_json(S);
  artifact["summary"] = {{"norm_ratios", ratios},
                         {"distance_to_ideal", dist},
                         {"distance_bound", smoothing_distance_constant(r) * lambda}};
  write_json_file(run.dir + "/artifact.json", artifact);
  run.line("kind", "smooth");
  run.line("||E_lambda - E||", num(dist));
  run.line("bound 8 pi^(r-1) lambda", num(smoothing_distance_constant(r) * lambda));
  std::string zones;
  for (double z : br) zones += (zones.empty() ? "" : ", ") + num(z);
  run.line("zone boundaries", zones);
  run.finish(out);
  return kExitOk;
}

int cmd_build_fnb(const CLI::App* leaf, Params& P, std::ostream& out) {
  auto M = build_mollifier();
  const ConstantsLedger L = resolve_ledger(leaf, P, *M);
  const int n = first_n(P, 8);
  const double b = std::isnan(P.b) ? L.b_max : P.b;
  const ScaledSpline f = build_f_nb(n, b, L.d, L, M);
  Run run(P, {"build", "fnb"},
          {{"n", {n}}, {"b", b}, {"q", L.q}, {"p", L.p}, {"ledger", P.ledger.empty() ? "proven" : P.ledger}});
  const RealizationCheck rc = check_f_nb(f, SignChangeSet(std::vector<double>{-L.d, 0.0}), L.q, L.m);
  Json artifact = to_json(f);
  artifact["ledger_hash"] = L.hash();
  artifact["summary"] = {{"membership", rc.membership},
                         {"membership_worst", rc.membership_worst},
                         {"top_derivative_norm", rc.top_derivative_norm},
                         {"derivative_norms", rc.derivative_norms}};
  write_json_file(run.dir + "/artifact.json", artifact);
  run.line("kind", "fnb");
  run.line("ledger mode", to_string(L.mode));
  run.line("lambda", num(f.lambda()));
  run.line("amplitude", num(f.amplitude()));
  run.line("||f^(r+m)||", num(rc.top_derivative_norm));
  run.line("membership Delta^(q)({-d, 0})", rc.membership ? "true" : "false");
  run.finish(out);
  return kExitOk;
}

EpsRule resolve_eps(const Params& P, const ConstantsLedger& L) {
  if (!P.eps.empty()) return eps_rule_from_string(P.eps);
  return L.mode == LedgerMode::proven ? EpsRule::linear : EpsRule::exp;
}

SignChangeSet resolve_Y(const Params& P, double d) {
  return P.Y.empty() ? SignChangeSet(std::vector<double>{-d, 0.0}) : SignChangeSet(P.Y);
}

int cmd_build_partial_sum(const CLI::App* leaf, Params& P, std::ostream& out) {
  auto M = build_mollifier();
  const ConstantsLedger L = resolve_ledger(leaf, P, *M);
  const SignChangeSet Y = resolve_Y(P, L.d);
  const EpsRule eps = resolve_eps(P, L);
  require(P.K >= 1, "build partial-sum: K must be >= 1");
  Run run(P, {"build", "partial-sum"},
          {{"K", P.K}, {"Y", Y.points()}, {"eps", to_string(eps)}, {"q", L.q}, {"p", L.p},
           {"ledger", P.ledger.empty() ? "proven" : P.ledger}, {"max-bits", P.max_bits}});
  PlanOptions po;
  po.max_bits = P.max_bits;
  const RecursionPlan plan = plan_recursion(Y, L.q, L.p, eps, P.K + 1, L, po);
  const PartialSum f = build_partial_sum(plan, P.K, L, M);
  const RealizationCheck rc = check_partial_sum(f, Y, L.q, L.p);
  Json summands = Json::array();
  for (const ScaledSpline& s : f.summands()) summands.push_back(to_json(s));
  const Json artifact = {{"kind", "partial-sum"},
                         {"K", P.K},
                         {"plan", to_json(plan)},
                         {"shift", f.shift()},
                         {"orientation", f.orientation()},
                         {"tail_bound", f.tail_bound()},
                         {"tail_from_next_level", f.tail_from_next_level()},
                         {"summands", summands},
                         {"summary",
                          {{"membership", rc.membership},
                           {"membership_worst", rc.membership_worst},
                           {"top_derivative_norm", rc.top_derivative_norm},
                           {"derivative_norms", rc.derivative_norms}}}};
  write_json_file(run.dir + "/artifact.json", artifact);
  run.line("kind", "partial-sum");
  run.line("ledger mode", to_string(L.mode));
  run.line("K", P.K);
  for (const ScaledSpline& s : f.summands())
    run.line("summand lambda", num(s.lambda()) + " (n = " + num(s.n()) + ", b = " + num(s.b()) + ")");
  run.line("||f_K^(p)||", num(rc.top_derivative_norm));
  run.line("membership Delta^(q)(Y)", rc.membership ? "true" : "false");
  run.line("tail bound", num(f.tail_bound()));
  run.finish(out);
  return kExitOk;
}

int cmd_solve(Params& P, std::ostream& out) {
  std::string target = P.target;
  int r = P.r < 0 ? 1 : P.r;
  double b = std::isnan(P.b) ? kPi : P.b;
  double d = std::isnan(P.d) ? kPi : P.d;
  double lambda = std::isnan(P.lambda) ? d / 12 : P.lambda;
  if (!P.artifact.empty()) {
    const Json a = read_json_file(P.artifact);
    target = a.value("kind", std::string());
    if (target == "ideal") {
      r = a.at("r").get<int>();
      b = a.at("b").get<double>();
    } else if (target == "smooth") {
      r = a.at("r").get<int>();
      d = a.at("d").get<double>();
      lambda = a.at("lambda").get<double>();
    } else {
      throw ValidationError("solve: artifact kind must be ideal or smooth, got '" + target + "'");
    }
  }
  MinimaxProblem pb;
  Json problem = {{"target", target}, {"n", {first_n(P, 8)}}};
  std::shared_ptr<const MollifierTable> M;
  if (target == "F1") {
    pb.target = [](double x) { return std::abs(x); };
    pb.breakpoints = {0.0};
  } else if (target == "cos") {
    pb.target = [](double x) { return std::cos(x); };
  } else if (target == "ideal") {
    auto E = std::make_shared<IdealSpline>(build_ideal_spline(r, b));
    pb.target = [E](double x) { return (*E)(x); };
    pb.breakpoints = {-b, 0.0};
    problem["r"] = r;
    problem["b"] = b;
  } else if (target == "smooth") {
    require(lambda > 0.0 && lambda <= d / 3, "solve: lambda must lie in (0, d/3]");
    M = build_mollifier();
    auto S = std::make_shared<SmoothSpline>(build_smooth_spline(r, d, lambda, M));
    pb.target = [S](double x) { return (*S)(x); };
    pb.breakpoints = S->zone_boundaries();
    problem["r"] = r;
    problem["d"] = d;
    problem["lambda"] = lambda;
  } else {
    throw ValidationError("solve: unknown target '" + target + "' (F1, cos, ideal, smooth)");
  }
  if (!P.artifact.empty()) problem["artifact"] = P.artifact;
  pb.degree = first_n(P, 8);
  if (!P.domain.empty()) {
    require(P.domain.size() == 2, "solve: --domain takes two numbers");
    pb.domain = Interval(P.domain[0], P.domain[1]);
    problem["domain"] = P.domain;
  }
  if (!P.Y.empty()) {
    pb.constraint = CoQConstraint{P.q, SignChangeSet(P.Y)};
    problem["Y"] = P.Y;
    problem["q"] = P.q;
  }
  pb.free_poly_degree = P.free_poly;
  pb.constraint_on_domain = P.constraint_on_domain;
  pb.objective_grid.points_per_degree = P.points_per_degree;
  pb.constraint_grid.points_per_degree = P.points_per_degree;
  problem["free-poly"] = P.free_poly;
  problem["constraint-on-domain"] = P.constraint_on_domain;
  problem["points-per-degree"] = P.points_per_degree;
  Run run(P, {"solve"}, problem);
  const ApproxResult res = solve_minimax(pb);
  write_json_file(run.dir + "/result.json", {{"problem", problem}, {"result", to_json(res)}});
  run.line("target", target);
  run.line("n", pb.degree);
  run.line("constrained", pb.constraint ? "true" : "false");
  run.line("error", num(res.error));
  run.line("post-check error", num(res.post_check_error));
  run.line("constraint violation", num(res.constraint_violation));
  run.line("constraint ok", res.constraint_ok ? "true" : "false");
  run.finish(out);
  return kExitOk;
}

int cmd_plan(const CLI::App* leaf, Params& P, std::ostream& out, std::ostream& err) {
  auto M = build_mollifier();
  const ConstantsLedger L = resolve_ledger(leaf, P, *M);
  const SignChangeSet Y = resolve_Y(P, L.d);
  const EpsRule eps = resolve_eps(P, L);
  Run run(P, {"plan"},
          {{"K", P.K}, {"Y", Y.points()}, {"eps", to_string(eps)}, {"q", L.q}, {"p", L.p},
           {"ledger", P.ledger.empty() ? "proven" : P.ledger}, {"max-bits", P.max_bits}});
  PlanOptions po;
  po.max_bits = P.max_bits;
  const RecursionPlan plan = plan_recursion(Y, L.q, L.p, eps, P.K, L, po);
  const std::vector<PlanCheckItem> items = verify_plan(plan);
  write_json_file(run.dir + "/plan.json", to_json(plan));
  write_json_file(run.dir + "/plan-check.json", to_json(items));
  write_json_file(run.dir + "/ledger.json", to_json(L));
  run.line("ledger mode", to_string(L.mode));
  run.line("eps rule", to_string(eps));
  for (const PlanEntry& e : plan.entries)
    run.line("level " + std::to_string(e.k),
             "n = " + scientific(mpq_class(e.n)) + " (" + std::to_string(decimal_digits(e.n)) + " digits), b = " +
                 scientific(e.b));
  const bool ok = plan_ok(items);
  run.line("verified", ok ? "true" : "false");
  run.finish(out);
  if (!ok)
    for (const PlanCheckItem& i : items)
      if (!i.ok) err << "plan check failed: k = " << i.k << " " << i.condition << " " << i.detail << "\n";
  return ok ? kExitOk : kExitAssertion;
}

int cmd_experiment(const CLI::App* leaf, Params& P, std::ostream& out, std::ostream& err) {
  ExperimentOptions opt;
  opt.seed = P.seed;
  opt.jobs = P.jobs;
  opt.restarts = P.restarts;
  const std::string& name = P.name;
  auto n_or = [&](std::vector<int> fallback) { return P.n.empty() ? fallback : P.n; };
  auto Y_or = [&](std::vector<double> fallback) { return P.Y.empty() ? SignChangeSet(fallback) : SignChangeSet(P.Y); };
  Json resolved;
  ExperimentReport rep;
  std::optional<ConstantsLedger> ledger_out;
  if (name == "bernstein") {
    const double b = std::isnan(P.b) ? kPi / 2 : P.b;
    const std::vector<int> n = n_or({4, 8, 16});
    resolved = {{"b", b}, {"n", n}, {"restarts", opt.restarts}};
    rep = exp_bernstein_interval(b, n, opt);
  } else if (name == "lemma-mod") {
    const std::vector<double> bl = P.b_list.empty() ? std::vector<double>{kPi / 2, kPi} : P.b_list;
    const std::vector<int> n = n_or({4, 8, 16, 32});
    resolved = {{"b-list", bl}, {"n", n}};
    rep = exp_lemma_mod(bl, n, opt);
  } else if (name == "lemma-3111") {
    const double b = std::isnan(P.b) ? kPi / 4 : P.b;
    resolved = {{"q", P.q}, {"b", b}, {"restarts", opt.restarts}};
    rep = exp_lemma_3111(P.q, b, opt);
  } else if (name == "lemma-22") {
    const std::vector<int> knots = P.knots.empty() ? std::vector<int>{32, 64} : P.knots;
    resolved = {{"q", P.q}, {"knots", knots}};
    rep = exp_lemma_22(P.q, knots, opt);
  } else if (name == "thm-12" || name == "thm-13") {
    const SignChangeSet Y = Y_or({-kPi / 2, 0.0});
    const std::vector<int> n = n_or({4, 8, 16, 32});
    resolved = {{"q", P.q}, {"Y", Y.points()}, {"n", n}};
    rep = name == "thm-12" ? exp_theorem_12(P.q, Y, n, opt) : exp_theorem_13(P.q, Y, n, opt);
  } else if (name == "calibrate") {
    const double d = std::isnan(P.d) ? kPi : P.d;
    resolved = {{"q", P.q}, {"p", P.p}, {"d", d}, {"restarts", opt.restarts}};
    Calibration cal = calibrate_constants(P.q, P.p, d, build_mollifier(), opt);
    rep = std::move(cal.report);
    ledger_out = cal.ledger;
  } else if (name == "lemma-aux") {
    auto M = build_mollifier();
    ConstantsLedger L;
    if (P.ledger.empty()) {
      const double d = std::isnan(P.d) ? kPi : P.d;
      err << "lemma-aux: no --ledger given; calibrating an empirical ledger for d = " << d << "\n";
      L = calibrate_constants(P.q, P.p, d, M, opt).ledger;
      ledger_out = L;
    } else {
      L = resolve_ledger(leaf, P, *M);
    }
    const double b = std::isnan(P.b) ? L.b_max : P.b;
    const std::vector<int> n = n_or({8, 16});
    resolved = {{"q", L.q}, {"p", L.p}, {"b", b}, {"n", n}};
    if (!P.ledger.empty()) resolved["ledger"] = P.ledger;
    rep = exp_lemma_aux(n, b, L.q, L.p, L, M, opt);
  } else {
    throw ValidationError("unknown experiment '" + name + "'");
  }
  resolved["restarts"] = opt.restarts;
  Run run(P, {"experiment", name}, resolved);
  write_report(rep, run.dir);
  if (ledger_out) write_json_file(run.dir + "/ledger.json", to_json(*ledger_out));
  run.line("experiment", name);
  for (const Json& c : rep.cells) run.line("cell", c.dump());
  for (const ReportConstant& c : rep.constants) run.line("constant " + c.name, num(c.value) + " (" + to_string(c.mode) + ")");
  run.line("assertions", std::to_string(rep.assertions.size() - rep.failures().size()) + "/" +
                             std::to_string(rep.assertions.size()) + " passed");
  run.line("passed", rep.passed() ? "true" : "false");
  run.finish(out);
  for (const ReportAssertion& a : rep.failures())
    err << "assertion failed: " << a.name << (a.cell.empty() ? "" : " [" + a.cell + "]") << " " << a.detail << "\n";
  return rep.passed() ? kExitOk : kExitAssertion;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Params P;
  CLI::App app{"Co-q-monotone trigonometric approximation: constructions, solvers, plans, experiments", "coqm"};
  app.require_subcommand(1);

  CLI::App* build = app.add_subcommand("build", "Build a function artifact");
  build->require_subcommand(1);
  CLI::App* ideal = build->add_subcommand("ideal", "Ideal spline E_{r,b}");
  CLI::App* smooth = build->add_subcommand("smooth", "Mollified spline E_{r,d,lambda}");
  CLI::App* fnb = build->add_subcommand("fnb", "Scaled smooth spline f_{n,b}");
  CLI::App* psum = build->add_subcommand("partial-sum", "Partial sum f_K of the recursive construction");
  CLI::App* solve = app.add_subcommand("solve", "Best (co-q-monotone) trigonometric approximation");
  CLI::App* plan = app.add_subcommand("plan", "Recursion plan (n_k, b_k) in exact arithmetic");
  CLI::App* exper = app.add_subcommand("experiment", "Run a named experiment");
  for (CLI::App* a : {ideal, smooth, fnb, psum, solve, plan, exper}) add_common(a, P);

  for (CLI::App* a : {ideal, smooth, solve}) a->add_option("--r", P.r, "Spline order r")->check(CLI::PositiveNumber);
  for (CLI::App* a : {ideal, fnb, solve, exper}) a->add_option("--b", P.b, "Half-width b");
  for (CLI::App* a : {smooth, solve, exper}) a->add_option("--d", P.d, "Gap d");
  for (CLI::App* a : {smooth, solve}) a->add_option("--lambda", P.lambda, "Smoothing width lambda");
  for (CLI::App* a : {fnb, solve, exper}) a->add_option("--n", P.n, "Degree(s) n");
  for (CLI::App* a : {fnb, psum, solve, plan, exper}) a->add_option("--q", P.q, "Order q of the constraint");
  for (CLI::App* a : {fnb, psum, plan, exper}) a->add_option("--p", P.p, "Smoothness p");
  for (CLI::App* a : {fnb, psum, plan, exper})
    a->add_option("--ledger", P.ledger, "Ledger JSON (or calibrate report); 'proven' for the proven ledger");
  for (CLI::App* a : {psum, solve, plan, exper})
    a->add_option("--Y", P.Y, "Sign-change points, ascending");
  for (CLI::App* a : {psum, plan}) {
    a->add_option("--K", P.K, "Number of levels");
    a->add_option("--eps", P.eps, "eps rule: log | linear | exp");
    a->add_option("--max-bits", P.max_bits, "Bit-length limit for n_k");
  }
  solve->add_option("--target", P.target, "F1 | cos | ideal | smooth")->default_val("F1");
  solve->add_option("--artifact", P.artifact, "Ideal or smooth spline artifact JSON");
  solve->add_option("--domain", P.domain, "Approximation interval lo hi (default: full period)")->expected(2);
  solve->add_option("--free-poly", P.free_poly, "Degree of a free algebraic polynomial (-1: none)");
  solve->add_flag("--constraint-on-domain", P.constraint_on_domain, "Impose the constraint on the domain only");
  solve->add_option("--points-per-degree", P.points_per_degree, "Grid density")->check(CLI::PositiveNumber);
  exper->add_option("name", P.name, "Experiment name")->required()->check(CLI::IsMember(experiment_names()));
  exper->add_option("--b-list", P.b_list, "Half-widths b (lemma-mod)");
  exper->add_option("--knots", P.knots, "Knot interval counts (lemma-22)");
  exper->add_option("--restarts", P.restarts, "Random restarts of constant searches")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  CLI::App* leaf = &app;
  while (!leaf->get_subcommands().empty()) leaf = leaf->get_subcommands().front();

  try {
    if (!P.config.empty()) apply_config(leaf, P.config);
    if (leaf == ideal) return cmd_build_ideal(P, out);
    if (leaf == smooth) return cmd_build_smooth(P, out);
    if (leaf == fnb) return cmd_build_fnb(leaf, P, out);
    if (leaf == psum) return cmd_build_partial_sum(leaf, P, out);
    if (leaf == solve) return cmd_solve(P, out);
    if (leaf == plan) return cmd_plan(leaf, P, out, err);
    if (leaf == exper) return cmd_experiment(leaf, P, out, err);
    err << "usage error: no command\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const Json::exception& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace coqm
