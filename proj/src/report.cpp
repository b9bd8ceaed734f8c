#include "coqm/report.hpp"

#include <cmath>
#include <cstdio>
#include <set>

namespace coqm {

bool ExperimentReport::passed() const { return failures().empty(); }

std::vector<ReportAssertion> ExperimentReport::failures() const {
  std::vector<ReportAssertion> out;
  for (const ReportAssertion& a : assertions)
    if (!a.pass) out.push_back(a);
  return out;
}

void ExperimentReport::assert_that(std::string name, bool pass, std::string detail, std::string cell) {
  assertions.push_back({std::move(name), pass, std::move(detail), std::move(cell)});
}

void ExperimentReport::add_constant(std::string name, double value, LedgerMode mode, std::string formula) {
  constants.push_back({std::move(name), value, mode, std::move(formula)});
}

double ExperimentReport::constant(const std::string& name) const {
  for (const ReportConstant& c : constants)
    if (c.name == name) return c.value;
  throw ValidationError("report " + id + " has no constant " + name);
}

namespace {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_number(v.get<double>());
  const std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + "\"";
}

}  // namespace

Json to_json(const ExperimentReport& report) {
  Json constants = Json::array();
  for (const ReportConstant& c : report.constants)
    constants.push_back({{"name", c.name}, {"value", c.value}, {"mode", to_string(c.mode)}, {"formula", c.formula}});
  Json assertions = Json::array();
  for (const ReportAssertion& a : report.assertions)
    assertions.push_back({{"name", a.name}, {"pass", a.pass}, {"detail", a.detail}, {"cell", a.cell}});
  Json plots = Json::object();
  for (const PlotSeries& p : report.plots) {
    Json pts = Json::array();
    for (const auto& [x, y] : p.points) pts.push_back({x, y});
    plots[p.name] = pts;
  }
  return {{"id", report.id},
          {"seed", report.seed},
          {"parameters", report.parameters},
          {"cells", report.cells},
          {"constants", constants},
          {"assertions", assertions},
          {"passed", report.passed()},
          {"ledger_hash", report.ledger_hash},
          {"plots", plots},
          {"artifacts", report.artifacts}};
}

std::string cells_csv(const std::vector<Json>& cells) {
  std::set<std::string> keys;
  for (const Json& c : cells)
    for (const auto& item : c.items()) keys.insert(item.key());
  std::string out;
  bool first = true;
  for (const std::string& k : keys) {
    out += (first ? "" : ",") + csv_field(Json(k));
    first = false;
  }
  out += "\n";
  for (const Json& c : cells) {
    first = true;
    for (const std::string& k : keys) {
      out += (first ? "" : ",") + (c.contains(k) ? csv_field(c.at(k)) : std::string());
      first = false;
    }
    out += "\n";
  }
  return out;
}

std::string plot_data(const PlotSeries& series) {
  std::string out = "# " + series.name + "\n";
  for (const auto& [x, y] : series.points) out += format_number(x) + " " + format_number(y) + "\n";
  return out;
}

void write_report(const ExperimentReport& report, const std::string& dir) {
  write_json_file(dir + "/report.json", to_json(report));
  write_text_file(dir + "/tables/cells.csv", cells_csv(report.cells));
  for (const PlotSeries& p : report.plots) write_text_file(dir + "/plots/" + p.name + ".dat", plot_data(p));
  write_json_file(dir + "/timing.json", {{"id", report.id}, {"runtime_seconds", report.runtime_seconds}});
}

}  // namespace coqm
