#pragma once

#include <optional>
#include <string>
#include <vector>

namespace slnt::app {

struct Tolerances {
  double eps_abs = 1e-6;
  double odd_abs = 1e-9;
  double energy_rel = 1e-8;
  double susy_deviation_factor = 2.0;
};

/// Non-polynomial oscillator V = r^2 + b r^2/(1 + c r^2), n = 0, N = 3.
struct Table1Reference {
  std::string key;
  int ell = 0;
  double c = 0.0;
  double b = 0.0;
  std::vector<double> eps;  // eps^(0)..eps^(6)
};

struct Table2Reference {
  std::string key;
  int ell = 0;
  double c = 0.0;
  std::vector<double> b_candidates;  // more than one when the printed b is in doubt
  double e_1n = 0.0;
  double e_susy = 0.0;
  double e4 = 0.0;
  double e6 = 0.0;
  std::string note;
};

struct PublishedTables {
  int version = 0;
  Tolerances tol;
  std::vector<Table1Reference> table1;
  std::vector<Table2Reference> table2;
};

/// Parses the reference data embedded at build time.
const PublishedTables& published_tables();

struct Table1Result {
  Table1Reference ref;
  std::vector<double> eps;
  double seconds = 0.0;
  std::string error;
  std::vector<std::string> failures;
  bool pass() const { return error.empty() && failures.empty(); }
};

struct Table2Candidate {
  double b = 0.0;
  std::optional<double> e4;
  std::optional<double> e6;
  std::string error;
};

struct Table2Result {
  Table2Reference ref;
  std::vector<Table2Candidate> candidates;
  std::size_t chosen = 0;  // candidate closest to the published E(1/N)
  double susy_deviation = 0.0;
  double susy_limit = 0.0;
  double seconds = 0.0;
  std::string error;
  std::vector<std::string> failures;
  std::vector<std::string> warnings;
  bool pass() const { return error.empty() && failures.empty(); }
};

std::vector<Table1Result> run_table1();
std::vector<Table2Result> run_table2();

/// Deterministic text; no timings.
std::string render_table1(const std::vector<Table1Result>& rows);
std::string render_table2(const std::vector<Table2Result>& rows);

}  // namespace slnt::app
