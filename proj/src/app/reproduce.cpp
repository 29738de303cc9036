#include "slnt/app/reproduce.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "slnt/aim.hpp"
#include "slnt/app/report.hpp"
#include "slnt/errors.hpp"
#include "slnt/published_tables_data.hpp"

namespace slnt::app {

using json = nlohmann::ordered_json;

namespace {

PublishedTables parse_tables() {
  const json j = json::parse(std::string(kPublishedTablesJson));
  PublishedTables t;
  t.version = j.at("version").get<int>();
  const json& tol = j.at("tolerances");
  t.tol.eps_abs = tol.at("eps_abs").get<double>();
  t.tol.odd_abs = tol.at("odd_abs").get<double>();
  t.tol.energy_rel = tol.at("energy_rel").get<double>();
  t.tol.susy_deviation_factor = tol.at("susy_deviation_factor").get<double>();
  for (const json& r : j.at("table1")) {
    t.table1.push_back(Table1Reference{r.at("key").get<std::string>(), r.at("l").get<int>(), r.at("c").get<double>(),
                                       r.at("b").get<double>(), r.at("eps").get<std::vector<double>>()});
  }
  for (const json& r : j.at("table2")) {
    Table2Reference ref;
    ref.key = r.at("key").get<std::string>();
    ref.ell = r.at("l").get<int>();
    ref.c = r.at("c").get<double>();
    ref.b_candidates = r.at("b").get<std::vector<double>>();
    ref.e_1n = r.at("E_1N").get<double>();
    ref.e_susy = r.at("E_susy").get<double>();
    ref.e4 = r.at("E4").get<double>();
    ref.e6 = r.at("E6").get<double>();
    ref.note = r.value("note", "");
    t.table2.push_back(std::move(ref));
  }
  return t;
}

SolveResult solve_npo(int ell, double b, double c) {
  const PotentialSpec spec = builtin_potential("npo", {{"b", b}, {"c", c}});
  EngineOptions opts;
  opts.order = 6;
  opts.sensitivity = false;
  return solve(spec, QuantumNumbers{0, ell, 3}, opts);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string sci(double v, int digits) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(digits) << v;
  return os.str();
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

}  // namespace

const PublishedTables& published_tables() {
  static const PublishedTables tables = parse_tables();
  return tables;
}

std::vector<Table1Result> run_table1() {
  const PublishedTables& t = published_tables();
  std::vector<Table1Result> out;
  for (const auto& ref : t.table1) {
    Table1Result row;
    row.ref = ref;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      row.eps = solve_npo(ref.ell, ref.b, ref.c).expansion.eps;
      for (int j : {2, 4, 6}) {
        const double dev = std::abs(row.eps[static_cast<std::size_t>(j)] - ref.eps[static_cast<std::size_t>(j)]);
        if (!(dev <= t.tol.eps_abs)) {
          row.failures.push_back("eps" + std::to_string(j) + " deviates by " + sci(dev, 2));
        }
      }
      for (int j : {0, 1, 3, 5}) {
        const double v = std::abs(row.eps[static_cast<std::size_t>(j)]);
        if (!(v <= t.tol.odd_abs)) row.failures.push_back("eps" + std::to_string(j) + " = " + sci(v, 2));
      }
    } catch (const Error& e) {
      row.error = std::string(code_name(e.code())) + ": " + e.what();
    }
    row.seconds = seconds_since(t0);
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<Table2Result> run_table2() {
  const PublishedTables& t = published_tables();
  std::vector<Table2Result> out;
  for (const auto& ref : t.table2) {
    Table2Result row;
    row.ref = ref;
    const auto t0 = std::chrono::steady_clock::now();
    for (double b : ref.b_candidates) {
      Table2Candidate cand;
      cand.b = b;
      try {
        const SolveResult r = solve_npo(ref.ell, b, ref.c);
        cand.e4 = r.partial_sums.at(4);
        cand.e6 = r.partial_sums.at(6);
      } catch (const Error& e) {
        cand.error = std::string(code_name(e.code())) + ": " + e.what();
      }
      row.candidates.push_back(std::move(cand));
    }
    row.seconds = seconds_since(t0);

    double best = INFINITY;
    bool any = false;
    for (std::size_t i = 0; i < row.candidates.size(); ++i) {
      const auto& cand = row.candidates[i];
      if (!cand.e4) continue;
      const double d = std::abs(*cand.e4 - ref.e_1n);
      if (d < best) {
        best = d;
        row.chosen = i;
        any = true;
      }
    }
    if (!any) {
      row.error = row.candidates.front().error;
      out.push_back(std::move(row));
      continue;
    }
    if (row.candidates.size() > 1) {
      std::string msg = "printed b is ambiguous; ran b in {";
      for (std::size_t i = 0; i < row.candidates.size(); ++i) {
        msg += (i ? ", " : "") + format_double(row.candidates[i].b);
      }
      msg += "}; b = " + format_double(row.candidates[row.chosen].b) + " reproduces E(1/N) = " +
             format_double(ref.e_1n);
      row.warnings.push_back(msg);
    }
    const Table2Candidate& c = row.candidates[row.chosen];
    const double rel4 = std::abs(*c.e4 - ref.e4) / std::abs(ref.e4);
    const double rel6 = std::abs(*c.e6 - ref.e6) / std::abs(ref.e6);
    if (!(rel4 <= t.tol.energy_rel)) row.failures.push_back("E4 relative deviation " + sci(rel4, 2));
    if (!(rel6 <= t.tol.energy_rel)) row.failures.push_back("E6 relative deviation " + sci(rel6, 2));
    row.susy_deviation = std::abs(*c.e6 - ref.e_susy);
    row.susy_limit = t.tol.susy_deviation_factor * std::abs(ref.e6 - ref.e_susy);
    if (!(row.susy_deviation <= row.susy_limit)) {
      row.failures.push_back("|E6 - E(SUSY)| = " + sci(row.susy_deviation, 2) + " exceeds " + sci(row.susy_limit, 2));
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::string render_table1(const std::vector<Table1Result>& rows) {
  std::ostringstream os;
  os << "Ground-state expansion coefficients, V = r^2 + b r^2/(1 + c r^2), N = 3\n";
  os << "tolerance: |d eps2,4,6| <= " << sci(published_tables().tol.eps_abs, 0)
     << ", |eps0,1,3,5| <= " << sci(published_tables().tol.odd_abs, 0) << "\n\n";
  os << std::left << std::setw(13) << "row" << std::setw(4) << "l" << std::setw(6) << "c" << std::setw(9) << "b"
     << std::setw(5) << "j" << std::setw(20) << "computed" << std::setw(16) << "published" << std::setw(11)
     << "|dev|" << "status\n";
  for (const auto& r : rows) {
    if (!r.error.empty()) {
      os << std::left << std::setw(13) << r.ref.key << std::setw(4) << r.ref.ell << std::setw(6)
         << format_double(r.ref.c) << std::setw(9) << format_double(r.ref.b) << "ERROR " << r.error << "\n";
      continue;
    }
    for (int j : {2, 4, 6}) {
      const auto uj = static_cast<std::size_t>(j);
      const double dev = std::abs(r.eps[uj] - r.ref.eps[uj]);
      const bool ok = dev <= published_tables().tol.eps_abs;
      if (j == 2) {
        os << std::left << std::setw(13) << r.ref.key << std::setw(4) << r.ref.ell << std::setw(6)
           << format_double(r.ref.c) << std::setw(9) << format_double(r.ref.b);
      } else {
        os << std::setw(32) << "";
      }
      os << std::setw(5) << j << std::setw(20) << sci(r.eps[uj], 11) << std::setw(16) << format_double(r.ref.eps[uj])
         << std::setw(11) << sci(dev, 2) << (ok ? "ok" : "DEVIATION") << "\n";
    }
    double odd = 0.0;
    for (int j : {0, 1, 3, 5}) odd = std::max(odd, std::abs(r.eps[static_cast<std::size_t>(j)]));
    os << std::setw(32) << "" << std::setw(5) << "odd" << "max |eps0,1,3,5| = " << sci(odd, 2)
       << (odd <= published_tables().tol.odd_abs ? "  ok" : "  DEVIATION") << "\n";
  }
  int failed = 0;
  for (const auto& r : rows) failed += r.pass() ? 0 : 1;
  os << "\n" << (rows.size() - static_cast<std::size_t>(failed)) << "/" << rows.size() << " rows within tolerance\n";
  return os.str();
}

std::string render_table2(const std::vector<Table2Result>& rows) {
  const Tolerances& tol = published_tables().tol;
  std::ostringstream os;
  os << "Ground-state energies, V = r^2 + b r^2/(1 + c r^2), N = 3\n";
  os << "tolerance: E4, E6 relative " << sci(tol.energy_rel, 0) << "; |E6 - E(SUSY)| <= "
     << format_double(tol.susy_deviation_factor) << " x published deviation\n\n";
  for (const auto& r : rows) {
    os << r.ref.key << "  l=" << r.ref.ell << " c=" << format_double(r.ref.c);
    if (!r.error.empty() && r.candidates.empty()) {
      os << "  ERROR " << r.error << "\n\n";
      continue;
    }
    os << " b=" << format_double(r.candidates[r.chosen].b) << "\n";
    for (const auto& w : r.warnings) os << "  warning: " << w << "\n";
    for (const auto& cand : r.candidates) {
      if (r.candidates.size() < 2) break;
      os << "  candidate b=" << format_double(cand.b) << ": ";
      if (cand.e4) {
        os << "E4=" << fixed(*cand.e4, 14) << "  |E4 - E(1/N)|=" << sci(std::abs(*cand.e4 - r.ref.e_1n), 2) << "\n";
      } else {
        os << "ERROR " << cand.error << "\n";
      }
    }
    if (!r.error.empty()) {
      os << "  ERROR " << r.error << "\n\n";
      continue;
    }
    const auto& c = r.candidates[r.chosen];
    const double rel4 = std::abs(*c.e4 - r.ref.e4) / std::abs(r.ref.e4);
    const double rel6 = std::abs(*c.e6 - r.ref.e6) / std::abs(r.ref.e6);
    os << "  " << std::left << std::setw(6) << "" << std::setw(22) << "computed" << std::setw(22) << "published"
       << std::setw(11) << "rel dev" << "status\n";
    os << "  " << std::setw(6) << "E4" << std::setw(22) << fixed(*c.e4, 16) << std::setw(22) << fixed(r.ref.e4, 16)
       << std::setw(11) << sci(rel4, 2) << (rel4 <= tol.energy_rel ? "ok" : "DEVIATION") << "\n";
    os << "  " << std::setw(6) << "E6" << std::setw(22) << fixed(*c.e6, 16) << std::setw(22) << fixed(r.ref.e6, 16)
       << std::setw(11) << sci(rel6, 2) << (rel6 <= tol.energy_rel ? "ok" : "DEVIATION") << "\n";
    os << "  |E6 - E(SUSY)| = " << sci(r.susy_deviation, 3) << "  limit " << sci(r.susy_limit, 3) << "  "
       << (r.susy_deviation <= r.susy_limit ? "ok" : "DEVIATION") << "\n\n";
  }
  int failed = 0;
  for (const auto& r : rows) failed += r.pass() ? 0 : 1;
  os << (rows.size() - static_cast<std::size_t>(failed)) << "/" << rows.size() << " rows within tolerance\n";
  return os.str();
}

}  // namespace slnt::app
