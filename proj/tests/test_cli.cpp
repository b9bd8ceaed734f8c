#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "coqm/cli.hpp"
#include "coqm/serialize.hpp"

using namespace coqm;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out, err;
};

CliRun run(std::initializer_list<std::string> args) {
  std::vector<std::string> storage{"coqm"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& s : storage) argv.push_back(s.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "coqm-test-cli" / name;
  fs::remove_all(p);
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run({"--help"}).code == kExitOk);
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"experiment", "nope"}).code == kExitUsage);
  CHECK(run({"build", "ideal", "--r", "x"}).code == kExitUsage);
  CHECK(run({"solve", "--bogus", "1"}).code == kExitUsage);
}

TEST_CASE("build ideal and smooth") {
  const std::string dir = scratch("ideal");
  const CliRun r = run({"build", "ideal", "--r", "2", "--b", "1.0", "--out", dir});
  REQUIRE(r.code == kExitOk);
  const Json a = read_json_file(dir + "/artifact.json");
  CHECK(a.at("kind") == "ideal");
  CHECK(a.at("summary").at("membership_q_r_plus_1").get<bool>());
  CHECK(fs::exists(dir + "/summary.txt"));
  CHECK(fs::exists(dir + "/config-echo.json"));

  const std::string sdir = scratch("smooth");
  CHECK(run({"build", "smooth", "--r", "1", "--d", "1.0", "--lambda", "0.2", "--out", sdir}).code == kExitOk);
  const CliRun bad = run({"build", "smooth", "--r", "1", "--d", "1.0", "--lambda", "0.5", "--out", sdir});
  CHECK(bad.code == kExitUsage);
  CHECK(bad.err.find("validation error") != std::string::npos);
}

TEST_CASE("solve") {
  const std::string dir = scratch("solve-cos");
  REQUIRE(run({"solve", "--target", "cos", "--n", "1", "--out", dir}).code == kExitOk);
  CHECK(read_json_file(dir + "/result.json").at("result").at("error").get<double>() <= 1e-12);

  // Negative numbers are values, not options.
  const std::string cdir = scratch("solve-con");
  REQUIRE(run({"solve", "--n", "4", "--q", "1", "--Y", "-1.5", "0.5", "--out", cdir}).code == kExitOk);
  const Json echo = read_json_file(cdir + "/config-echo.json");
  CHECK(echo.at("Y") == Json::array({-1.5, 0.5}));
  CHECK(read_json_file(cdir + "/result.json").at("result").at("constraint_ok").get<bool>());

  CHECK(run({"solve", "--n", "4", "--Y", "-1", "0", "1", "--out", cdir}).code == kExitUsage);
}

TEST_CASE("config files") {
  const std::string dir = scratch("config");
  write_json_file(dir + "/bad.json", {{"r", 2}, {"colour", "red"}});
  CHECK(run({"build", "ideal", "--config", dir + "/bad.json", "--out", dir + "/o"}).code == kExitUsage);

  write_json_file(dir + "/good.json", {{"r", 3}, {"b", 0.5}});
  REQUIRE(run({"build", "ideal", "--config", dir + "/good.json", "--r", "2", "--out", dir + "/o"}).code == kExitOk);
  const Json echo = read_json_file(dir + "/o/config-echo.json");
  CHECK(echo.at("r") == 2);
  CHECK(echo.at("b") == 0.5);
}

TEST_CASE("config echo replays an experiment bit for bit") {
  const std::string a = scratch("replay-a"), b = scratch("replay-b");
  REQUIRE(run({"experiment", "lemma-3111", "--q", "3", "--restarts", "20", "--seed", "5", "--out", a}).code ==
          kExitOk);
  REQUIRE(run({"experiment", "lemma-3111", "--config", a + "/config-echo.json", "--out", b}).code == kExitOk);
  CHECK(slurp(a + "/report.json") == slurp(b + "/report.json"));
  CHECK(fs::exists(a + "/tables/cells.csv"));
  CHECK(fs::exists(a + "/timing.json"));
}

TEST_CASE("default output directory is derived from the configuration") {
  const std::string root = scratch("root");
  setenv(kOutputRootEnv, root.c_str(), 1);
  REQUIRE(run({"build", "ideal", "--r", "1", "--b", "1.0"}).code == kExitOk);
  REQUIRE(run({"build", "ideal", "--r", "1", "--b", "1.0"}).code == kExitOk);
  REQUIRE(run({"build", "ideal", "--r", "1", "--b", "1.25"}).code == kExitOk);
  unsetenv(kOutputRootEnv);
  int dirs = 0;
  for (const auto& e : fs::directory_iterator(root)) {
    CHECK(e.path().filename().string().rfind("build-ideal-", 0) == 0);
    ++dirs;
  }
  CHECK(dirs == 2);
}

TEST_CASE("plan with the proven ledger") {
  const std::string dir = scratch("plan");
  REQUIRE(run({"plan", "--ledger", "proven", "--q", "3", "--p", "3", "--K", "1", "--out", dir}).code == kExitOk);
  const Json items = read_json_file(dir + "/plan-check.json");
  REQUIRE(items.is_array());
  for (const Json& it : items) CHECK(it.at("ok").get<bool>());
  CHECK(read_json_file(dir + "/ledger.json").at("mode") == "proven");
  const CliRun slow = run({"plan", "--ledger", "proven", "--q", "3", "--p", "3", "--K", "1", "--eps", "log",
                           "--out", scratch("plan-log")});
  CHECK(slow.code == kExitNumerical);
}

TEST_CASE("calibrated ledger drives fnb and partial sums") {
  const std::string cal = scratch("calibrate");
  REQUIRE(run({"experiment", "calibrate", "--q", "3", "--p", "4", "--out", cal}).code == kExitOk);
  const std::string ledger = cal + "/ledger.json";
  CHECK(read_json_file(ledger).at("mode") == "empirical");

  const std::string f = scratch("fnb");
  REQUIRE(run({"build", "fnb", "--ledger", ledger, "--n", "64", "--out", f}).code == kExitOk);
  CHECK(read_json_file(f + "/artifact.json").at("summary").at("membership").get<bool>());
  // The ledger fixes (q, p).
  CHECK(run({"build", "fnb", "--ledger", ledger, "--p", "5", "--out", f}).code == kExitUsage);

  const std::string ps = scratch("psum");
  REQUIRE(run({"build", "partial-sum", "--ledger", cal + "/report.json", "--K", "2", "--out", ps}).code == kExitOk);
  const Json art = read_json_file(ps + "/artifact.json");
  CHECK(art.at("summary").at("membership").get<bool>());
  CHECK(art.at("summary").at("top_derivative_norm").get<double>() <= 1.0 + 1e-9);
  CHECK(art.at("summands").size() == 2);
}
