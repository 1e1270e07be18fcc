#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

// The consolidated verification battery: nine criteria covering the moment
// table, the obstruction identities and lower bound, shrinker-curve
// construction, the spectral conditions, the variation formulas, the gradient
// inequality ensemble, the flow dynamics, and the Gaussian inequalities.
// Tolerances are pinned here; the CLI `report-suite` subcommand and the
// acceptance test binary both run exactly this battery.

namespace shrinklab::report {

struct ReportRow {
  std::string check_id;
  std::string anchor;  // short name of the quantity checked
  double value = 0.0;
  double expected = 0.0;  // NaN when the row checks a bound, not an equality
  double tolerance = 0.0;
  bool pass = false;
};

struct CriterionResult {
  std::string id;
  std::string title;
  bool pass = false;
  double runtime_seconds = 0.0;
  std::vector<ReportRow> rows;
};

struct AcceptanceOptions {
  std::uint64_t seed = 1;
  // Test hook: "moment-table" corrupts one expected table value so the
  // first criterion must fail.
  std::string fault_injection;
};

CriterionResult run_criterion(int index, const AcceptanceOptions& opts);
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts);

nlohmann::ordered_json to_json(const std::vector<CriterionResult>& results,
                               const AcceptanceOptions& opts);

}  // namespace shrinklab::report
