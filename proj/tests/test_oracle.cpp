#include <Eigen/Dense>
#include <chrono>
#include <cmath>

#include "doctest.h"
#include "slnt/aim.hpp"
#include "slnt/errors.hpp"
#include "slnt/oracle.hpp"

using namespace slnt;

namespace {

PotentialSpec npo(double b, double c) { return builtin_potential("npo", {{"b", b}, {"c", c}}); }

}  // namespace

TEST_CASE("operator shape") {
  const Tridiagonal t = build_radial_operator(builtin_potential("harmonic"), QuantumNumbers{0, 1, 3}, 10.0, 100);
  CHECK(t.diag.size() == 99);
  CHECK(t.off.size() == 98);
  const double h = 0.1;
  CHECK(t.off[0] == doctest::Approx(-1 / (h * h)));
  CHECK(t.diag[0] == doctest::Approx(2 / (h * h) + 2 / (h * h) + h * h));
}

TEST_CASE("sturm count agrees with a dense eigensolver") {
  const Tridiagonal t = build_radial_operator(npo(-0.46, 0.1), QuantumNumbers{0, 1, 3}, 8.0, 201);
  const auto m = static_cast<Eigen::Index>(t.diag.size());
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    dense(i, i) = t.diag[static_cast<std::size_t>(i)];
    if (i + 1 < m) dense(i, i + 1) = dense(i + 1, i) = t.off[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(dense).eigenvalues();
  for (double lambda : {-5.0, 3.9, 4.0, 7.5, 50.0, 1000.0, 1e5}) {
    int below = 0;
    for (Eigen::Index i = 0; i < m; ++i) below += ev(i) < lambda ? 1 : 0;
    CHECK(sturm_count(t, lambda) == below);
  }
  for (int k : {0, 1, 2, 10, 150}) {
    CHECK(kth_eigenvalue(t, k) == doctest::Approx(ev(k)).epsilon(1e-10));
  }
}

TEST_CASE("harmonic ground state") {
  const double e = fd_eigenvalue(builtin_potential("harmonic"), QuantumNumbers{0, 0, 3}, GridSpec{12.0, 6000, true});
  CHECK(std::abs(e - 3.0) <= 1e-8);
}

TEST_CASE("coulomb ground state") {
  const double e = fd_eigenvalue(builtin_potential("coulomb"), QuantumNumbers{0, 0, 3}, GridSpec{60.0, 6000, true});
  CHECK(std::abs(e + 0.25) <= 1e-7);
}

TEST_CASE("npo ground state") {
  const auto t0 = std::chrono::steady_clock::now();
  const OracleResult r = fd_eigenvalue_detail(npo(-0.46, 0.1), QuantumNumbers{0, 0, 3}, GridSpec{12.0, 6000, true});
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(std::abs(r.energy - 2.4) <= 1e-7);
  CHECK_FALSE(r.accuracy_warning);
  CHECK(seconds <= 5.0);
}

TEST_CASE("error is second order in h") {
  // Fit log|E_h - E| against log h over three grids.
  const PotentialSpec v = builtin_potential("harmonic");
  const QuantumNumbers qn{0, 0, 3};
  const double r_max = 12.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int points : {500, 1000, 2000}) {
    const double err = std::abs(fd_eigenvalue(v, qn, GridSpec{r_max, points, false}) - 3.0);
    const double x = std::log(r_max / points);
    const double y = std::log(err);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (3 * sxy - sx * sy) / (3 * sxx - sx * sx);
  CHECK(slope == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("node count matches n") {
  const PotentialSpec v = npo(-0.5, 0.1);
  for (int n = 0; n <= 3; ++n) {
    const Tridiagonal t = build_radial_operator(v, QuantumNumbers{n, 1, 3}, 12.0, 1200);
    const double e = kth_eigenvalue(t, n);
    CHECK(node_count(eigenvector(t, e)) == n);
  }
}

TEST_CASE("coarse grids raise the accuracy warning") {
  const OracleResult r = fd_eigenvalue_detail(builtin_potential("coulomb"), QuantumNumbers{0, 0, 3}, GridSpec{60.0, 100, true});
  CHECK(r.accuracy_warning);
}

TEST_CASE("oracle domain errors") {
  try {
    (void)fd_eigenvalue(parse_potential("1/(r-1)"), QuantumNumbers{}, GridSpec{2.0, 100, false});
    FAIL("expected a domain error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Domain);
  }
  CHECK_THROWS_AS(build_radial_operator(builtin_potential("harmonic"), QuantumNumbers{}, 10.0, 50), Error);
}

TEST_CASE("oracle and expansion agree away from three dimensions") {
  for (int dim : {2, 4, 5}) {
    const PotentialSpec v = npo(-0.46, 0.1);
    const QuantumNumbers qn{0, 1, dim};
    EngineOptions o;
    o.sensitivity = false;
    const SolveResult r = solve(v, qn, o);
    const double oracle = fd_eigenvalue(v, qn, GridSpec{std::max(12.0, 15 * r.frame.r0), 6000, true});
    CHECK(std::abs(r.partial_sums.back() - oracle) <= 1e-3);
  }
}
