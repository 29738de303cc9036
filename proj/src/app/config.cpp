#include "slnt/app/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace slnt::app {

using json = nlohmann::ordered_json;

std::string format_name(OutputFormat f) {
  switch (f) {
    case OutputFormat::Table: return "table";
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Json: return "json";
  }
  return "table";
}

OutputFormat parse_format(const std::string& name) {
  if (name == "table") return OutputFormat::Table;
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw Error(ErrorCode::Config, "unknown format '" + name + "' (expected table, csv or json)");
}

void RunConfig::validate() const {
  std::vector<std::string> problems;
  if (builtin.empty() == expression.empty()) {
    problems.emplace_back("give exactly one of a builtin potential or an expression");
  }
  for (const auto& [name, value] : params) {
    if (!std::isfinite(value)) problems.push_back("parameter " + name + " is not finite");
  }
  if (n < 0) problems.emplace_back("n must be >= 0");
  if (ell < -1) problems.emplace_back("l must be >= -1");
  if (dim < 1) problems.emplace_back("N must be >= 1");
  if (order < 0 || order > 16) problems.emplace_back("order must lie in [0, 16]");
  if (k_cap < 2 || k_cap > 1000) problems.emplace_back("k_cap must lie in [2, 1000]");
  if (!(tol > 0.0 && tol < 1.0)) problems.emplace_back("tol must lie in (0, 1)");
  if (!std::isfinite(x0)) problems.emplace_back("x0 must be finite");
  if (oracle.r_max && !(*oracle.r_max > 0.0 && std::isfinite(*oracle.r_max))) {
    problems.emplace_back("oracle r_max must be positive");
  }
  if (oracle.points < 100 || oracle.points > 2000000) problems.emplace_back("oracle points must lie in [100, 2000000]");
  if (!problems.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& p : problems) msg += "\n  - " + p;
    throw Error(ErrorCode::Config, msg);
  }
  (void)potential();
}

PotentialSpec RunConfig::potential() const {
  if (!builtin.empty()) return builtin_potential(builtin, params);
  return parse_potential(expression, params);
}

QuantumNumbers RunConfig::quantum_numbers() const { return QuantumNumbers{n, ell, dim}; }

EngineOptions RunConfig::engine_options() const {
  EngineOptions o;
  o.order = order;
  o.k_cap = k_cap;
  o.tol = tol;
  o.x0 = x0;
  return o;
}

GridSpec RunConfig::grid_for(double r0) const {
  GridSpec g;
  g.r_max = oracle.r_max ? *oracle.r_max : std::max(12.0, 15.0 * r0);
  g.points = oracle.points;
  g.extrapolate = oracle.extrapolate;
  return g;
}

json to_json(const RunConfig& c) {
  json j;
  if (!c.builtin.empty()) {
    j["builtin"] = c.builtin;
  } else {
    j["expression"] = c.expression;
  }
  j["params"] = json::object();
  for (const auto& [k, v] : c.params) j["params"][k] = v;
  j["n"] = c.n;
  j["l"] = c.ell;
  j["N"] = c.dim;
  j["order"] = c.order;
  j["k_cap"] = c.k_cap;
  j["tol"] = c.tol;
  j["x0"] = c.x0;
  j["oracle"] = {{"enabled", c.oracle.enabled},
                 {"r_max", c.oracle.r_max ? json(*c.oracle.r_max) : json(nullptr)},
                 {"points", c.oracle.points},
                 {"extrapolate", c.oracle.extrapolate}};
  j["format"] = format_name(c.format);
  return j;
}

namespace {

class Reader {
 public:
  explicit Reader(std::vector<std::string>& problems) : problems_(problems) {}

  template <typename T>
  void read(const json& obj, const char* key, T& out, const std::string& where) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    try {
      if constexpr (std::is_same_v<T, int>) {
        if (!v.is_number_integer()) throw std::invalid_argument("expected an integer");
      } else if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) throw std::invalid_argument("expected a number");
      } else if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw std::invalid_argument("expected true or false");
      } else {
        if (!v.is_string()) throw std::invalid_argument("expected a string");
      }
      out = v.get<T>();
    } catch (const std::exception& e) {
      problems_.push_back(where + key + ": " + e.what());
    }
  }

  void unknown_keys(const json& obj, std::initializer_list<const char*> known, const std::string& where) {
    for (const auto& [k, _] : obj.items()) {
      if (std::none_of(known.begin(), known.end(), [&](const char* s) { return k == s; })) {
        problems_.push_back(where + k + ": unknown key");
      }
    }
  }

 private:
  std::vector<std::string>& problems_;
};

}  // namespace

RunConfig config_from_json(const json& root) {
  const json& j = root.is_object() && root.contains("config") && root.contains("schema") ? root.at("config") : root;
  if (!j.is_object()) throw Error(ErrorCode::Config, "config must be a JSON object");
  RunConfig c;
  std::vector<std::string> problems;
  Reader r(problems);
  r.unknown_keys(j, {"builtin", "expression", "params", "n", "l", "N", "order", "k_cap", "tol", "x0", "oracle", "format"},
                 "");
  r.read(j, "builtin", c.builtin, "");
  r.read(j, "expression", c.expression, "");
  if (j.contains("params")) {
    if (!j["params"].is_object()) {
      problems.emplace_back("params: expected an object of name: number");
    } else {
      for (const auto& [k, v] : j["params"].items()) {
        if (v.is_number()) {
          c.params[k] = v.get<double>();
        } else {
          problems.push_back("params." + k + ": expected a number");
        }
      }
    }
  }
  r.read(j, "n", c.n, "");
  r.read(j, "l", c.ell, "");
  r.read(j, "N", c.dim, "");
  r.read(j, "order", c.order, "");
  r.read(j, "k_cap", c.k_cap, "");
  r.read(j, "tol", c.tol, "");
  r.read(j, "x0", c.x0, "");
  if (j.contains("oracle")) {
    const json& o = j["oracle"];
    if (!o.is_object()) {
      problems.emplace_back("oracle: expected an object");
    } else {
      r.unknown_keys(o, {"enabled", "r_max", "points", "extrapolate"}, "oracle.");
      r.read(o, "enabled", c.oracle.enabled, "oracle.");
      if (o.contains("r_max") && !o["r_max"].is_null()) {
        double v = 0.0;
        r.read(o, "r_max", v, "oracle.");
        c.oracle.r_max = v;
      }
      r.read(o, "points", c.oracle.points, "oracle.");
      r.read(o, "extrapolate", c.oracle.extrapolate, "oracle.");
    }
  }
  std::string fmt = format_name(c.format);
  r.read(j, "format", fmt, "");
  try {
    c.format = parse_format(fmt);
  } catch (const Error& e) {
    problems.emplace_back(e.what());
  }
  if (!problems.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& p : problems) msg += "\n  - " + p;
    throw Error(ErrorCode::Config, msg);
  }
  return c;
}

RunConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, "cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Parse, "config file " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

void apply_param(std::map<std::string, double>& params, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Error(ErrorCode::Config, "parameter '" + assignment + "' must have the form name=value");
  }
  const std::string name = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw Error(ErrorCode::Config, "parameter " + name + ": '" + text + "' is not a number");
  }
  params[name] = value;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse:
    case ErrorCode::Usage:
    case ErrorCode::Config: return kExitConfig;
    default: return kExitNumerical;
  }
}

}  // namespace slnt::app
