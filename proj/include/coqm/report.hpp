#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "coqm/counterexample.hpp"
#include "coqm/serialize.hpp"

namespace coqm {

/// A measured or proven constant together with the inequality it calibrates.
struct ReportConstant {
  std::string name;
  double value = 0.0;
  LedgerMode mode = LedgerMode::empirical;
  std::string formula;
};

/// A declared pass/fail criterion; `cell` names the grid cell it refers to (empty: global).
struct ReportAssertion {
  std::string name;
  bool pass = false;
  std::string detail;
  std::string cell;
};

/// Two-column plot data (x = n, y = measured quantity).
struct PlotSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

struct ExperimentReport {
  std::string id;
  std::uint64_t seed = 0;
  /// The full parameter grid.
  Json parameters = Json::object();
  /// One flat object of measured quantities per grid cell.
  std::vector<Json> cells;
  std::vector<ReportConstant> constants;
  std::vector<ReportAssertion> assertions;
  std::string ledger_hash;
  std::vector<PlotSeries> plots;
  /// Further artifacts (e.g. a calibrated ledger), embedded in report.json.
  Json artifacts = Json::object();
  /// Wall-clock seconds; written to timing.json only, so report.json stays reproducible.
  double runtime_seconds = 0.0;

  [[nodiscard]] bool passed() const;
  [[nodiscard]] std::vector<ReportAssertion> failures() const;
  void assert_that(std::string name, bool pass, std::string detail, std::string cell = {});
  void add_constant(std::string name, double value, LedgerMode mode, std::string formula);
  /// The value of a constant by name (ValidationError when absent).
  [[nodiscard]] double constant(const std::string& name) const;
};

/// Everything except the runtime.
[[nodiscard]] Json to_json(const ExperimentReport& report);

/// One header row (union of cell keys, sorted) and one row per cell; numbers with 17
/// significant digits, strings quoted when needed, missing values empty.
[[nodiscard]] std::string cells_csv(const std::vector<Json>& cells);

/// Whitespace-separated "x y" lines.
[[nodiscard]] std::string plot_data(const PlotSeries& series);

/// Writes report.json, tables/cells.csv, plots/<name>.dat and timing.json under `dir`.
void write_report(const ExperimentReport& report, const std::string& dir);

}  // namespace coqm
