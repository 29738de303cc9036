#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "json.hpp"
#include "slnt/aim.hpp"
#include "slnt/errors.hpp"
#include "slnt/frame.hpp"
#include "slnt/oracle.hpp"
#include "slnt/potential.hpp"

namespace slnt::app {

enum class OutputFormat { Table, Csv, Json };

std::string format_name(OutputFormat f);
OutputFormat parse_format(const std::string& name);

struct OracleOptions {
  bool enabled = false;
  std::optional<double> r_max;  // empty: max(12, 15 r0)
  int points = 6000;
  bool extrapolate = true;
};

/// One case to solve. Exactly one of builtin / expression is set.
struct RunConfig {
  std::string builtin;
  std::string expression;
  std::map<std::string, double> params;
  int n = 0;
  int ell = 0;
  int dim = 3;
  int order = 6;
  int k_cap = 60;
  double tol = 1e-12;
  double x0 = 0.0;
  OracleOptions oracle;
  OutputFormat format = OutputFormat::Table;

  /// Checks every field and throws one Config error listing all problems.
  void validate() const;

  PotentialSpec potential() const;
  QuantumNumbers quantum_numbers() const;
  EngineOptions engine_options() const;
  GridSpec grid_for(double r0) const;
};

nlohmann::ordered_json to_json(const RunConfig& config);

/// Accepts a bare config object or a solve report carrying a "config" member.
/// Unknown keys and wrong types are reported together as one Config error.
RunConfig config_from_json(const nlohmann::ordered_json& j);
RunConfig load_config_file(const std::filesystem::path& path);

/// "name=value" into params; throws Config on a malformed entry.
void apply_param(std::map<std::string, double>& params, const std::string& assignment);

/// 0 success, 2 config/parse, 3 numerical failure.
int exit_code_for(ErrorCode code);

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitDeviation = 4;

}  // namespace slnt::app
