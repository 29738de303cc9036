// slnt: bound-state energies from the shifted large-N expansion, each order
// extracted with the asymptotic iteration method.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "slnt/app/config.hpp"
#include "slnt/app/report.hpp"
#include "slnt/app/reproduce.hpp"
#include "slnt/app/sweep.hpp"

namespace {

using namespace slnt;
using namespace slnt::app;

struct CaseFlags {
  std::string config_path;
  std::string builtin;
  std::string expression;
  std::vector<std::string> params;
  int n = 0;
  int ell = 0;
  int dim = 3;
  int order = 6;
  int k_cap = 60;
  double tol = 1e-12;
  double x0 = 0.0;
  bool oracle = false;
  double r_max = 0.0;
  int points = 6000;
  bool no_extrapolate = false;
  std::string format = "table";

  CLI::Option* o_builtin = nullptr;
  CLI::Option* o_expression = nullptr;
  CLI::Option* o_n = nullptr;
  CLI::Option* o_ell = nullptr;
  CLI::Option* o_dim = nullptr;
  CLI::Option* o_order = nullptr;
  CLI::Option* o_k_cap = nullptr;
  CLI::Option* o_tol = nullptr;
  CLI::Option* o_x0 = nullptr;
  CLI::Option* o_oracle = nullptr;
  CLI::Option* o_r_max = nullptr;
  CLI::Option* o_points = nullptr;
  CLI::Option* o_no_extrapolate = nullptr;
  CLI::Option* o_format = nullptr;

  void attach(CLI::App& app, bool with_format) {
    app.add_option("--config", config_path, "JSON config file (a solve report's JSON is accepted too); flags override it");
    o_builtin = app.add_option("--builtin", builtin, "built-in potential: harmonic, coulomb, npo");
    o_expression = app.add_option("--potential", expression, "potential expression in r (grammar below)");
    app.add_option("--param", params, "bind a parameter, name=value (repeatable)");
    o_n = app.add_option("--n", n, "radial quantum number (default 0)");
    o_ell = app.add_option("--l", ell, "angular momentum, >= -1 (default 0)");
    o_dim = app.add_option("--N", dim, "spatial dimension (default 3)");
    o_order = app.add_option("--order", order, "highest order J (default 6)");
    o_k_cap = app.add_option("--k-cap", k_cap, "iteration cap per order (default 60)");
    o_tol = app.add_option("--tol", tol, "relative agreement between successive iterations (default 1e-12)");
    o_x0 = app.add_option("--x0", x0, "evaluation point in the shifted coordinate (default 0)");
    o_oracle = app.add_flag("--oracle", oracle, "also run the finite-difference eigenvalue check");
    o_r_max = app.add_option("--r-max", r_max, "oracle box size (default max(12, 15 r0))");
    o_points = app.add_option("--points", points, "oracle grid points (default 6000)");
    o_no_extrapolate = app.add_flag("--no-extrapolate", no_extrapolate, "oracle: single grid, no Richardson step");
    if (with_format) o_format = app.add_option("--format", format, "table | csv | json (default table)");
  }

  RunConfig build() const {
    RunConfig c = config_path.empty() ? RunConfig{} : load_config_file(config_path);
    if (*o_builtin) {
      c.builtin = builtin;
      c.expression.clear();
    }
    if (*o_expression) {
      c.expression = expression;
      if (!*o_builtin) c.builtin.clear();
    }
    if (config_path.empty() && c.builtin.empty() && c.expression.empty()) c.builtin = "harmonic";
    for (const auto& p : params) apply_param(c.params, p);
    if (*o_n) c.n = n;
    if (*o_ell) c.ell = ell;
    if (*o_dim) c.dim = dim;
    if (*o_order) c.order = order;
    if (*o_k_cap) c.k_cap = k_cap;
    if (*o_tol) c.tol = tol;
    if (*o_x0) c.x0 = x0;
    if (*o_oracle) c.oracle.enabled = true;
    if (*o_r_max) c.oracle.r_max = r_max;
    if (*o_points) c.oracle.points = points;
    if (*o_no_extrapolate) c.oracle.extrapolate = false;
    if (o_format != nullptr && *o_format) c.format = parse_format(format);
    return c;
  }
};

std::string footer() {
  std::string s = "\nPotential expressions:\n";
  s += kPotentialGrammar;
  s += "\n\nExit codes: 0 success, 2 configuration or parse error, 3 numerical failure"
       " (frame, convergence, oracle), 4 reproduce deviation beyond tolerance.\n";
  return s;
}

int report_error(const Error& e, bool json) {
  if (json) std::cout << render_error_json(e);
  std::cerr << "error [" << code_name(e.code()) << "]: " << e.what() << "\n";
  return exit_code_for(e.code());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bound-state energies of the N-dimensional radial Schrodinger equation from a shifted\n"
               "large-N expansion, with every order extracted by the asymptotic iteration method."};
  app.footer(footer());
  app.require_subcommand(1);

  CaseFlags solve_flags;
  CLI::App* solve_cmd = app.add_subcommand("solve", "solve one case and print frame, coefficients and energies");
  solve_flags.attach(*solve_cmd, true);

  std::string which;
  CLI::App* repro_cmd = app.add_subcommand("reproduce", "recompute the reference tables and compare");
  repro_cmd->add_option("table", which, "table1 | table2")->required()->check(CLI::IsMember({"table1", "table2"}));

  CaseFlags sweep_flags;
  std::vector<std::string> grid;
  unsigned threads = 0;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "CSV over a cartesian grid of parameters and quantum numbers");
  sweep_flags.attach(*sweep_cmd, false);
  sweep_cmd->add_option("--grid", grid, "axis key=v1,v2,... (repeatable; keys n, l, N or a parameter)");
  sweep_cmd->add_option("--threads", threads, "worker threads (default: hardware concurrency)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  if (*solve_cmd) {
    RunConfig cfg;
    bool json = false;
    try {
      cfg = solve_flags.build();
      json = cfg.format == OutputFormat::Json;
      const CaseReport rep = run_case(cfg);
      switch (cfg.format) {
        case OutputFormat::Json: std::cout << render_json(rep); break;
        case OutputFormat::Csv: std::cout << render_csv(rep); break;
        case OutputFormat::Table: std::cout << render_table(rep); break;
      }
      return kExitOk;
    } catch (const Error& e) {
      return report_error(e, json);
    }
  }

  if (*repro_cmd) {
    try {
      bool ok = true;
      if (which == "table1") {
        const auto rows = run_table1();
        std::cout << render_table1(rows);
        for (const auto& r : rows) ok = ok && r.pass();
      } else {
        const auto rows = run_table2();
        std::cout << render_table2(rows);
        for (const auto& r : rows) ok = ok && r.pass();
      }
      return ok ? kExitOk : kExitDeviation;
    } catch (const Error& e) {
      return report_error(e, false);
    }
  }

  if (*sweep_cmd) {
    try {
      const RunConfig base = sweep_flags.build();
      std::vector<SweepAxis> axes;
      for (const auto& g : grid) axes.push_back(parse_axis(g));
      run_sweep(base, axes, std::cout, threads);
      return kExitOk;
    } catch (const Error& e) {
      return report_error(e, false);
    }
  }
  return kExitOk;
}
