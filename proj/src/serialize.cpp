#include "coqm/serialize.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "coqm/bigrational.hpp"

namespace coqm {

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string fnv1a_hex(std::string_view text) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(text)));
  return buf;
}

std::string content_hash(const Json& j) { return fnv1a_hex(j.dump()); }

namespace {

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd from_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Json with_hash(Json j) {
  j["content_hash"] = content_hash(j);
  return j;
}

template <typename T>
T get_field(const Json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(std::string(what) + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ValidationError(std::string(what) + ": bad field '" + key + "': " + e.what());
  }
}

}  // namespace

Json to_json(const Interval& I) { return Json::array({I.lo(), I.hi()}); }

Json to_json(const SignChangeSet& Y) { return Json(Y.points()); }

Json to_json(const GridSpec& g) {
  return {{"points_per_degree", g.points_per_degree},
          {"refinement_tolerance", g.refinement_tolerance},
          {"max_refinements", g.max_refinements}};
}

Json to_json(const Polynomiald& p) { return {{"center", p.center()}, {"coeffs", to_vector(p.coeffs())}}; }

Json to_json(const PiecewisePolyd& pp) {
  Json pieces = Json::array();
  for (const Polynomiald& p : pp.pieces()) pieces.push_back(to_json(p));
  return {{"breakpoints", pp.breakpoints()}, {"periodic", pp.periodic()}, {"pieces", pieces}};
}

Json to_json(const TrigPolyd& T) {
  return {{"a0", T.a0()}, {"cos", to_vector(T.cos_coeffs())}, {"sin", to_vector(T.sin_coeffs())}};
}

Polynomiald polynomial_from_json(const Json& j) {
  return Polynomiald(get_field<double>(j, "center", "polynomial"),
                     from_vector(get_field<std::vector<double>>(j, "coeffs", "polynomial")));
}

PiecewisePolyd piecewise_from_json(const Json& j) {
  std::vector<Polynomiald> pieces;
  for (const Json& p : get_field<Json>(j, "pieces", "piecewise polynomial")) pieces.push_back(polynomial_from_json(p));
  return PiecewisePolyd(get_field<std::vector<double>>(j, "breakpoints", "piecewise polynomial"), std::move(pieces),
                        get_field<bool>(j, "periodic", "piecewise polynomial"));
}

TrigPolyd trig_from_json(const Json& j) {
  return TrigPolyd(get_field<double>(j, "a0", "trig polynomial"),
                   from_vector(get_field<std::vector<double>>(j, "cos", "trig polynomial")),
                   from_vector(get_field<std::vector<double>>(j, "sin", "trig polynomial")));
}

SignChangeSet sign_change_set_from_json(const Json& j) {
  try {
    return SignChangeSet(j.get<std::vector<double>>());
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("Y: expected an array of numbers: ") + e.what());
  }
}

Json to_json(const IdealSpline& E) {
  Json levels = Json::array();
  for (int j = 0; j <= E.r(); ++j) levels.push_back(to_json(E.derivative_pp(j)));
  return with_hash({{"kind", "ideal"},
                    {"r", E.r()},
                    {"b", E.b()},
                    {"gamma_b", gamma_b(E.b())},
                    {"window", to_json(E.window())},
                    {"derivatives", levels}});
}

Json to_json(const SmoothSpline& E) {
  return with_hash({{"kind", "smooth"},
                    {"r", E.r()},
                    {"d", E.d()},
                    {"lambda", E.lambda()},
                    {"window", to_json(E.window())},
                    {"zone_boundaries", E.zone_boundaries()},
                    {"mollifier", {{"grid_size", E.mollifier().grid_size()},
                                   {"j_max", E.mollifier().j_max()},
                                   {"bump_integral", E.mollifier().bump_integral()},
                                   {"s_norms", E.mollifier().s_norms()}}},
                    {"spline", to_json(E.derivative_pp(0))}});
}

Json to_json(const ScaledSpline& f) {
  const Json spline = to_json(f.spline());
  return with_hash({{"kind", "fnb"},
                    {"n", f.n()},
                    {"b", f.b()},
                    {"lambda", f.lambda()},
                    {"amplitude", f.amplitude()},
                    {"spline_hash", spline.at("content_hash")},
                    {"spline", spline}});
}

Json to_json(const ApproxResult& r) {
  Json j = {{"error", r.error},
            {"post_check_error", r.post_check_error},
            {"constraint_violation", r.constraint_violation},
            {"constraint_ok", r.constraint_ok},
            {"lp_iterations", r.lp_iterations},
            {"optimality_gap", r.optimality_gap},
            {"refinements", r.refinements},
            {"densifications", r.densifications},
            {"objective_points", r.objective_points},
            {"constraint_points", r.constraint_points},
            {"degree", r.approximant.degree()},
            {"trig", to_json(r.approximant)},
            {"polynomial", to_json(r.polynomial)}};
  j["basis"] = {{"kind", r.basis.is_local() ? "local" : "fourier"},
                {"center", r.basis.center()},
                {"half", r.basis.half()},
                {"coeffs", to_vector(r.basis_coeffs)}};
  return j;
}

Json to_json(const ConstantsLedger& L) {
  Json j = {{"mode", to_string(L.mode)},
            {"q", L.q},
            {"p", L.p},
            {"r", L.r},
            {"m", L.m},
            {"d", L.d},
            {"b_max", L.b_max},
            {"c0", L.c0},
            {"c1", L.c1},
            {"c2", L.c2},
            {"c3", L.c3},
            {"c4", L.c4},
            {"c5", L.c5},
            {"c6", L.c6},
            {"c7", L.c7},
            {"c8", L.c8},
            {"c9", L.c9},
            {"c10", L.c10},
            {"c_star", L.c_star},
            {"c8_j", L.c8_j},
            {"s_norms", L.s_norms},
            {"provenance", L.provenance}};
  j["hash"] = L.hash();
  return j;
}

ConstantsLedger ledger_from_json(const Json& j, const MollifierTable& M) {
  const char* what = "ledger";
  const LedgerMode mode = ledger_mode_from_string(get_field<std::string>(j, "mode", what));
  const int q = get_field<int>(j, "q", what), p = get_field<int>(j, "p", what);
  ConstantsLedger L;
  if (mode == LedgerMode::proven) {
    L = proven_ledger(q, p, M);
  } else {
    MeasuredConstants mc;
    mc.c0 = get_field<double>(j, "c0", what);
    mc.c1 = get_field<double>(j, "c1", what);
    mc.c2 = get_field<double>(j, "c2", what);
    mc.c3 = get_field<double>(j, "c3", what);
    mc.c4 = get_field<double>(j, "c4", what);
    mc.c5 = get_field<double>(j, "c5", what);
    if (j.contains("provenance")) mc.provenance = j.at("provenance").get<std::map<std::string, std::string>>();
    L = empirical_ledger(q, p, get_field<double>(j, "d", what), mc, M);
    L.provenance = mc.provenance;
  }
  // Stored derived constants must agree with the re-derived ones.
  for (const char* key : {"c6", "c7", "c8", "c9", "c10", "c_star"}) {
    if (!j.contains(key)) continue;
    const double stored = j.at(key).get<double>();
    const double derived = Json(to_json(L)).at(key).get<double>();
    if (std::abs(stored - derived) > 1e-12 * std::max(std::abs(stored), std::abs(derived)))
      throw ValidationError(std::string("ledger: stored ") + key + " does not satisfy the ledger identities");
  }
  const std::vector<std::string> bad = L.check();
  if (!bad.empty()) throw ValidationError("ledger: " + bad.front());
  return L;
}

Json to_json(const RecursionPlan& plan) {
  Json entries = Json::array();
  for (const PlanEntry& e : plan.entries)
    entries.push_back({{"k", e.k},
                       {"n", to_string(e.n)},
                       {"b", to_string(e.b)},
                       {"n_digits", decimal_digits(e.n)},
                       {"n_approx", scientific(mpq_class(e.n))},
                       {"b_approx", scientific(e.b)}});
  return {{"q", plan.q},
          {"p", plan.p},
          {"r", plan.r},
          {"m", plan.m},
          {"K", plan.K},
          {"eps", to_string(plan.eps)},
          {"d", plan.d},
          {"d_exact", to_string(plan.d_exact)},
          {"shift", plan.shift},
          {"orientation", plan.orientation},
          {"canonical_points", plan.canonical_points},
          {"c6", to_string(plan.c6)},
          {"c9", to_string(plan.c9)},
          {"c10", to_string(plan.c10)},
          {"ledger_hash", plan.ledger_hash},
          {"mode", to_string(plan.mode)},
          {"entries", entries}};
}

RecursionPlan plan_from_json(const Json& j) {
  const char* what = "plan";
  RecursionPlan plan;
  plan.q = get_field<int>(j, "q", what);
  plan.p = get_field<int>(j, "p", what);
  plan.r = get_field<int>(j, "r", what);
  plan.m = get_field<int>(j, "m", what);
  plan.K = get_field<int>(j, "K", what);
  plan.eps = eps_rule_from_string(get_field<std::string>(j, "eps", what));
  plan.d = get_field<double>(j, "d", what);
  plan.d_exact = parse_rational(get_field<std::string>(j, "d_exact", what));
  plan.shift = get_field<double>(j, "shift", what);
  plan.orientation = get_field<int>(j, "orientation", what);
  plan.canonical_points = get_field<std::vector<double>>(j, "canonical_points", what);
  plan.c6 = parse_rational(get_field<std::string>(j, "c6", what));
  plan.c9 = parse_rational(get_field<std::string>(j, "c9", what));
  plan.c10 = parse_rational(get_field<std::string>(j, "c10", what));
  plan.ledger_hash = get_field<std::string>(j, "ledger_hash", what);
  plan.mode = ledger_mode_from_string(get_field<std::string>(j, "mode", what));
  for (const Json& e : get_field<Json>(j, "entries", what)) {
    const mpq_class n = parse_rational(get_field<std::string>(e, "n", "plan entry"));
    require(n.get_den() == 1, "plan entry: n must be an integer");
    plan.entries.push_back({get_field<int>(e, "k", "plan entry"), mpz_class(n.get_num()),
                            parse_rational(get_field<std::string>(e, "b", "plan entry"))});
  }
  return plan;
}

Json to_json(const std::vector<PlanCheckItem>& items) {
  Json out = Json::array();
  for (const PlanCheckItem& i : items)
    out.push_back({{"k", i.k}, {"condition", i.condition}, {"ok", i.ok}, {"exact", i.exact}, {"detail", i.detail}});
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw ValidationError("invalid JSON in " + path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << text;
}

void write_json_file(const std::string& path, const Json& j) { write_text_file(path, j.dump(2) + "\n"); }

}  // namespace coqm
