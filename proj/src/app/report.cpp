#include "slnt/app/report.hpp"

#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace slnt::app {

using json = nlohmann::ordered_json;

CaseReport run_case(const RunConfig& config) {
  config.validate();
  const PotentialSpec spec = config.potential();
  const QuantumNumbers qn = config.quantum_numbers();
  CaseReport rep;
  rep.config = config;
  rep.result = solve(spec, qn, config.engine_options());
  if (config.oracle.enabled) {
    OracleReport o;
    o.grid = config.grid_for(rep.result.frame.r0);
    try {
      o.result = fd_eigenvalue_detail(spec, qn, o.grid);
    } catch (const Error& e) {
      throw Error(ErrorCode::Oracle, std::string("oracle failed: ") + e.what());
    }
    if (o.result.accuracy_warning) {
      rep.result.diagnostics.warnings.push_back("oracle grid may be too coarse: h and h/2 energies differ by " +
                                                format_double(std::abs(o.result.coarse - o.result.fine)));
    }
    rep.oracle = o;
  }
  return rep;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (v == 0.0) return "0";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json report_json(const CaseReport& rep) {
  const SolveResult& r = rep.result;
  const ShiftedFrame& f = r.frame;
  json out;
  out["schema"] = kSolveSchema;
  out["config"] = to_json(rep.config);
  out["frame"] = {{"r0", f.r0},
                  {"Lambda", f.Lambda},
                  {"a", f.a},
                  {"g", f.g},
                  {"gamma", f.gamma},
                  {"A", f.A},
                  {"B", f.B},
                  {"V", f.V0},
                  {"dV", f.dV0},
                  {"veff_leading", f.veff_leading},
                  {"alpha", f.coeffs.alphas},
                  {"beta", f.coeffs.betas},
                  {"xi", f.coeffs.xis},
                  {"candidate_r0", f.candidate_r0}};
  out["eps"] = r.expansion.eps;
  out["partial_sums"] = r.partial_sums;
  json orders = json::array();
  for (const auto& rec : r.expansion.records) {
    orders.push_back({{"order", rec.order},
                      {"value", rec.value},
                      {"k_accepted", rec.k_accepted},
                      {"last_delta", rec.last_delta},
                      {"alt_x0", rec.alt_x0},
                      {"alt_value", optional_number(rec.alt_value)}});
  }
  out["orders"] = orders;
  json trace = json::array();
  for (const auto& v : r.diagnostics.ratio_trace) trace.push_back(optional_number(v));
  out["diagnostics"] = {{"residuals",
                         {{"minimum_condition", r.diagnostics.residuals.minimum_condition},
                          {"shift_condition", r.diagnostics.residuals.shift_condition},
                          {"epsilon0_nulling", r.diagnostics.residuals.epsilon0_nulling}}},
                        {"ratio_x", r.diagnostics.ratio_x},
                        {"ratio_trace", trace},
                        {"warnings", r.diagnostics.warnings}};
  if (rep.oracle) {
    const auto& o = *rep.oracle;
    out["oracle"] = {{"energy", o.result.energy},
                     {"coarse", o.result.coarse},
                     {"fine", o.result.fine},
                     {"r_max", o.grid.r_max},
                     {"points", o.grid.points},
                     {"extrapolate", o.grid.extrapolate},
                     {"accuracy_warning", o.result.accuracy_warning},
                     {"difference", r.partial_sums.back() - o.result.energy}};
  } else {
    out["oracle"] = nullptr;
  }
  return out;
}

std::string render_json(const CaseReport& rep) { return report_json(rep).dump(2) + "\n"; }

std::string render_error_json(const Error& e) {
  json out;
  out["error"] = {{"code", std::string(code_name(e.code()))}, {"message", e.what()}};
  return out.dump(2) + "\n";
}

std::string render_table(const CaseReport& rep) {
  const SolveResult& r = rep.result;
  const ShiftedFrame& f = r.frame;
  std::ostringstream os;
  os << "potential  " << rep.config.potential().to_string() << "\n";
  os << "state      n=" << f.qn.n << " l=" << f.qn.ell << " N=" << f.qn.dim << "  J=" << r.expansion.order << "\n";
  os << "frame      r0=" << format_double(f.r0) << " Lambda=" << format_double(f.Lambda)
     << " a=" << format_double(f.a) << " gamma=" << format_double(f.gamma) << "\n\n";
  os << std::left << std::setw(6) << "j" << std::setw(26) << "eps(j)" << std::setw(26) << "E(j)" << std::setw(6)
     << "k" << "eps(j) at x0=" << format_double(r.expansion.records.empty() ? 0.5 : r.expansion.records[0].alt_x0)
     << "\n";
  for (std::size_t j = 0; j < r.expansion.eps.size(); ++j) {
    std::string k = "-";
    std::string alt = "-";
    if (j > 0) {
      const auto& rec = r.expansion.records[j - 1];
      k = std::to_string(rec.k_accepted);
      alt = rec.alt_value ? format_double(*rec.alt_value) : "no convergence";
    }
    os << std::left << std::setw(6) << j << std::setw(26) << format_double(r.expansion.eps[j]) << std::setw(26)
       << format_double(r.partial_sums[j]) << std::setw(6) << k << alt << "\n";
  }
  if (rep.oracle) {
    const auto& o = *rep.oracle;
    os << "\noracle     E=" << format_double(o.result.energy) << " (h: " << format_double(o.result.coarse)
       << ", h/2: " << format_double(o.result.fine) << ", r_max=" << format_double(o.grid.r_max)
       << ", points=" << o.grid.points << ")\n";
    os << "           E(J) - oracle = " << format_double(r.partial_sums.back() - o.result.energy) << "\n";
  }
  for (const auto& w : r.diagnostics.warnings) os << "warning: " << w << "\n";
  return os.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string CsvLayout::header() const {
  std::vector<std::string> cols{"potential", "n", "l", "N"};
  for (const auto& p : param_names) cols.push_back(p);
  cols.emplace_back("r0");
  for (int j = 0; j <= order; ++j) cols.push_back("eps" + std::to_string(j));
  for (int j = 0; j <= order; ++j) cols.push_back("E" + std::to_string(j));
  if (oracle) cols.emplace_back("oracle");
  cols.emplace_back("error");
  std::string out;
  for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + csv_field(cols[i]);
  return out + "\n";
}

std::string CsvLayout::row(const RunConfig& c, const CaseReport* rep, const std::string& error) const {
  std::vector<std::string> cols;
  cols.push_back(c.builtin.empty() ? c.expression : c.builtin);
  cols.push_back(std::to_string(c.n));
  cols.push_back(std::to_string(c.ell));
  cols.push_back(std::to_string(c.dim));
  for (const auto& p : param_names) {
    const auto it = c.params.find(p);
    cols.push_back(it == c.params.end() ? "" : format_double(it->second));
  }
  const std::size_t width = 2 * static_cast<std::size_t>(order + 1) + 1 + (oracle ? 1 : 0);
  if (rep != nullptr) {
    cols.push_back(format_double(rep->result.frame.r0));
    for (double e : rep->result.expansion.eps) cols.push_back(format_double(e));
    for (double e : rep->result.partial_sums) cols.push_back(format_double(e));
    if (oracle) cols.push_back(rep->oracle ? format_double(rep->oracle->result.energy) : "");
  } else {
    cols.insert(cols.end(), width, "");
  }
  cols.push_back(error);
  std::string out;
  for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + csv_field(cols[i]);
  return out + "\n";
}

std::string render_csv(const CaseReport& rep) {
  CsvLayout layout;
  for (const auto& [k, _] : rep.config.params) layout.param_names.push_back(k);
  layout.order = rep.config.order;
  layout.oracle = rep.config.oracle.enabled;
  return layout.header() + layout.row(rep.config, &rep, "");
}

}  // namespace slnt::app
