#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "slnt/aim.hpp"
#include "slnt/app/config.hpp"
#include "slnt/oracle.hpp"

namespace slnt::app {

inline constexpr const char* kSolveSchema = "slnt.solve/1";

struct OracleReport {
  GridSpec grid;
  OracleResult result;
};

struct CaseReport {
  RunConfig config;
  SolveResult result;
  std::optional<OracleReport> oracle;
};

/// Validates, solves and (if enabled) runs the oracle. Throws slnt::Error.
CaseReport run_case(const RunConfig& config);

/// Shortest round-trip decimal form; "nan"/"inf" for non-finite values.
std::string format_double(double v);

/// JSON report. Top-level keys: schema, config, frame, eps, partial_sums,
/// orders, diagnostics, oracle.
nlohmann::ordered_json report_json(const CaseReport& report);
std::string render_json(const CaseReport& report);
std::string render_error_json(const Error& error);
std::string render_table(const CaseReport& report);

/// RFC 4180 field quoting.
std::string csv_field(const std::string& s);

/// Column layout shared by solve --format csv and sweep.
struct CsvLayout {
  std::vector<std::string> param_names;
  int order = 6;
  bool oracle = false;

  std::string header() const;
  std::string row(const RunConfig& config, const CaseReport* report, const std::string& error) const;
};

std::string render_csv(const CaseReport& report);

}  // namespace slnt::app
