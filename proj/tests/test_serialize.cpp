#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "coqm/bigrational.hpp"
#include "coqm/serialize.hpp"

using namespace coqm;

TEST_CASE("FNV-1a reference values") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
  CHECK(content_hash(Json{{"b", 1}, {"a", 2}}) == content_hash(Json{{"a", 2}, {"b", 1}}));
}

TEST_CASE("polynomial, piecewise and trigonometric round trips") {
  const Polynomiald p(0.25, Eigen::Vector3d(0.1, -2.0, 1.0 / 3.0));
  const Polynomiald p2 = polynomial_from_json(to_json(p));
  CHECK(p2.coeffs() == p.coeffs());

  const IdealSpline E = build_ideal_spline(2, kPi / 2);
  const PiecewisePolyd pp = piecewise_from_json(to_json(E.spline()));
  for (double x : {-1.0, 0.0, 0.3, 4.0}) CHECK(pp(x) == E(x));

  const TrigPolyd T = best_approx([](double t) { return std::exp(std::cos(t)); }, 3).approximant;
  const TrigPolyd T2 = trig_from_json(to_json(T));
  for (double t : {-2.0, 0.5, 3.0}) CHECK(T2(t) == T(t));

  const SignChangeSet Y({-2.0, 0.5, 1.5, 3.0});
  CHECK(sign_change_set_from_json(to_json(Y)).points() == Y.points());
}

TEST_CASE("ledger round trip and tamper detection") {
  auto M = build_mollifier();
  for (const ConstantsLedger& L : {proven_ledger(3, 3, *M), proven_ledger(3, 5, *M)}) {
    const Json j = to_json(L);
    CHECK(j.at("hash") == L.hash());
    const ConstantsLedger back = ledger_from_json(Json::parse(j.dump()), *M);
    CHECK(back.hash() == L.hash());
    CHECK(back.c10 == L.c10);

    Json bad = j;
    bad["c6"] = bad["c6"].get<double>() * 1.001;
    CHECK_THROWS_AS((void)ledger_from_json(bad, *M), ValidationError);
  }
}

TEST_CASE("plan round trip keeps exact values") {
  auto M = build_mollifier();
  const ConstantsLedger L = proven_ledger(3, 3, *M);
  const RecursionPlan plan = plan_recursion(SignChangeSet({-kPi / 2, 0.0}), 3, 3, EpsRule::linear, 2, L);
  const RecursionPlan back = plan_from_json(Json::parse(to_json(plan).dump()));
  REQUIRE(back.entries.size() == plan.entries.size());
  for (std::size_t i = 0; i < plan.entries.size(); ++i) {
    CHECK(back.entries[i].n == plan.entries[i].n);
    CHECK(back.entries[i].b == plan.entries[i].b);
  }
  CHECK(back.c10 == plan.c10);
  CHECK(back.ledger_hash == L.hash());
  CHECK(plan_ok(verify_plan(back)));
  CHECK(to_json(back).dump() == to_json(plan).dump());
}

TEST_CASE("spline artifacts carry a content hash") {
  auto M = build_mollifier();
  const Json a = to_json(build_smooth_spline(1, kPi / 2, 0.1, M));
  const Json b = to_json(build_smooth_spline(1, kPi / 2, 0.1, M));
  const Json c = to_json(build_smooth_spline(1, kPi / 2, 0.11, M));
  CHECK(a.at("content_hash") == b.at("content_hash"));
  CHECK(a.at("content_hash") != c.at("content_hash"));
  Json stripped = a;
  stripped.erase("content_hash");
  CHECK(content_hash(stripped) == a.at("content_hash").get<std::string>());
}

TEST_CASE("json files") {
  const auto dir = std::filesystem::temp_directory_path() / "coqm-test-serialize" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  const Json j{{"x", 1.5}, {"name", "abc"}};
  write_json_file((dir / "a.json").string(), j);
  CHECK(read_json_file((dir / "a.json").string()) == j);
  CHECK_THROWS((void)read_json_file((dir / "missing.json").string()));
  std::filesystem::remove_all(dir.parent_path());
}
