#include <cmath>

#include "doctest.h"
#include "slnt/aim.hpp"
#include "slnt/errors.hpp"

using namespace slnt;

namespace {

struct NpoCase {
  int ell;
  double b;
  double c;
};

const NpoCase kCases[] = {{0, -0.46, 0.1}, {1, -0.5, 0.1},    {2, -0.54, 0.1},
                          {0, -0.0406, 0.01}, {1, -0.041, 0.01}, {-1, -0.42, 0.1}};

PotentialSpec npo(double b, double c) { return builtin_potential("npo", {{"b", b}, {"c", c}}); }

Real coeff_norm(const GSeries& s, int j) {
  Real n = 0;
  for (Real c : s[j].coeffs()) n += std::fabs(c);
  return n;
}

EngineOptions quiet(int order = 6) {
  EngineOptions o;
  o.order = order;
  o.sensitivity = false;
  return o;
}

}  // namespace

TEST_CASE("first step on a constant slice") {
  const Real gamma = 1.3L;
  const Real c = 0.7L;
  const GSeries lambda0 = GSeries::constant(XPoly::monomial(2 * gamma, 1), 0);
  const GSeries s0 = GSeries::constant(XPoly::constant(c), 0);
  const AimState st = aim_start(lambda0, s0);
  CHECK(st.k == 0);
  const XPoly expected_lambda{2 * gamma + c, 0, 4 * gamma * gamma};
  const XPoly expected_s{0, c * 2 * gamma};
  for (int i = 0; i <= 2; ++i) {
    CHECK(static_cast<double>(st.next.lambda[0][static_cast<std::size_t>(i)]) ==
          doctest::Approx(static_cast<double>(expected_lambda[static_cast<std::size_t>(i)])));
    CHECK(static_cast<double>(st.next.s[0][static_cast<std::size_t>(i)]) ==
          doctest::Approx(static_cast<double>(expected_s[static_cast<std::size_t>(i)])));
  }
  // delta_0 = c (2 gamma + c) independent of x.
  const GSeries d = delta_k(st);
  CHECK(d[0].degree() == 0);
  CHECK(static_cast<double>(d[0][0]) == doctest::Approx(static_cast<double>(c * (2 * gamma + c))));
}

TEST_CASE("delta_0 vanishes on the first two rungs") {
  const Real gamma = 0.9L;
  const GSeries lambda0 = GSeries::constant(XPoly::monomial(2 * gamma, 1), 0);
  for (Real c : {Real(0), -2 * gamma}) {
    const AimState st = aim_start(lambda0, GSeries::constant(XPoly::constant(c), 0));
    CHECK(std::fabs(static_cast<double>(delta_coefficient_at(st, 0, 0.37L))) < 1e-15);
  }
}

TEST_CASE("odd-in-g slice stays zero for an even perturbation") {
  const GSeries lambda0(std::vector<XPoly>{XPoly::monomial(2, 1), XPoly{}, XPoly{}}, 2);
  const GSeries s0(std::vector<XPoly>{XPoly::constant(-0.3L), XPoly{}, XPoly{0.5L, 0, -1, 0, 0.25L}}, 2);
  AimState st = aim_start(lambda0, s0);
  for (int k = 0; k < 12; ++k) {
    CHECK(st.current.lambda[1].is_zero());
    CHECK(st.current.s[1].is_zero());
    st = aim_step(st, lambda0, s0);
  }
}

TEST_CASE("delta_k is small at the exact harmonic energy and not otherwise") {
  const PotentialSpec v = builtin_potential("harmonic");
  for (int n = 0; n <= 2; ++n) {
    const ShiftedFrame f = solve_r0(v, QuantumNumbers{n, 0, 3}, 0);
    const AimInputs in = build_s0_lambda0(f, 0);
    const Real e0 = static_cast<Real>(epsilon0_closed(f, n));
    const std::vector<Real> exact{e0};
    const std::vector<Real> off{e0 + 1e-3L};
    const GSeries s_exact = insert_energy(in.s0_template, f, exact);
    const GSeries s_off = insert_energy(in.s0_template, f, off);
    AimState a = aim_start(in.lambda0, s_exact);
    AimState b = aim_start(in.lambda0, s_off);
    for (int k = 0; k <= 12; ++k) {
      if (k > 0) {
        a = aim_step(a, in.lambda0, s_exact);
        b = aim_step(b, in.lambda0, s_off);
      }
      if (k < n + 1) continue;
      const GSeries da = delta_k(a);
      const GSeries db = delta_k(b);
      for (Real x : {0.0L, 0.3L, 1.1L}) {
        CHECK(std::fabs(da[0](x)) <= 1e-10L * std::max(coeff_norm(da, 0), Real(1)));
        CHECK(std::fabs(db[0](x)) > 1e-8L * coeff_norm(db, 0));
      }
    }
  }
}

TEST_CASE("epsilon0 closed form") {
  const PotentialSpec h = builtin_potential("harmonic");
  const ShiftedFrame fh = build_frame(h, QuantumNumbers{0, 0, 3}, 1.0, 0.0, 2);
  CHECK(fh.A == doctest::Approx(-2.0));
  CHECK(fh.coeffs.betas[0] == doctest::Approx(-1.0));
  CHECK(std::abs(epsilon0_closed(fh, 0)) < 1e-15);
  const ShiftedFrame fc = build_frame(builtin_potential("coulomb"), QuantumNumbers{1, 0, 3}, 1.5, 0.0, 2);
  CHECK(epsilon0_closed(fc, 1) == doctest::Approx(0.5));
  for (const auto& tc : kCases) {
    const ShiftedFrame f = solve_r0(npo(tc.b, tc.c), QuantumNumbers{0, tc.ell, 3});
    CHECK(std::abs(epsilon0_closed(f, 0)) < 1e-12);
  }
}

TEST_CASE("numeric zeroth-order root matches the closed form at every x0") {
  struct Item {
    PotentialSpec v;
    int n;
    int ell;
  };
  std::vector<Item> items;
  for (int n = 0; n <= 2; ++n) {
    items.push_back({builtin_potential("harmonic"), n, 0});
    items.push_back({builtin_potential("coulomb"), n, 1});
  }
  for (const auto& tc : kCases) items.push_back({npo(tc.b, tc.c), 0, tc.ell});
  for (const auto& it : items) {
    const ShiftedFrame f = solve_r0(it.v, QuantumNumbers{it.n, it.ell, 3}, 0);
    const double closed = epsilon0_closed(f, it.n);
    for (int k = it.n + 3; k <= it.n + 5; ++k) {
      for (double x0 : {0.0, 0.5, 1.0}) {
        const double root = epsilon0_numeric(f, it.n, k, x0);
        CHECK_MESSAGE(std::abs(root - closed) <= 1e-10, it.v.provenance() << " n=" << it.n << " k=" << k << " x0=" << x0);
      }
    }
  }
}

TEST_CASE("g^j coefficient of delta_k is affine in eps^(j)") {
  for (const auto& tc : kCases) {
    const ShiftedFrame f = solve_r0(npo(tc.b, tc.c), QuantumNumbers{0, tc.ell, 3});
    const AimInputs in = build_s0_lambda0(f, 6);
    const EnergyExpansion ex = expand_energy(f, quiet());
    for (int j = 1; j <= 6; ++j) {
      const GSeries l0 = in.lambda0.truncated(j);
      const GSeries tmpl = in.s0_template.truncated(j);
      std::vector<Real> eps;
      for (int i = 0; i < j; ++i) eps.push_back(static_cast<Real>(ex.eps[static_cast<std::size_t>(i)]));
      auto value_at = [&](Real trial, int k, Real x) {
        std::vector<Real> e = eps;
        e.push_back(trial);
        const GSeries s0 = insert_energy(tmpl, f, e);
        AimState st = aim_start(l0, s0, x);
        for (int i = 0; i < k; ++i) st = aim_step(st, l0, s0);
        return delta_coefficient_at(st, j, x);
      };
      for (int k : {4, 10}) {
        for (Real x : {0.0L, 0.5L}) {
          const Real v0 = value_at(0, k, x);
          const Real v1 = value_at(1, k, x);
          const Real v3 = value_at(-2.5L, k, x);
          const Real predicted = v0 + (-2.5L) * (v1 - v0);
          const Real scale = std::fabs(v0) + std::fabs(v1) + std::fabs(v3);
          if (scale == 0) continue;
          CHECK(static_cast<double>(std::fabs(v3 - predicted) / scale) <= 1e-9);
        }
      }
    }
  }
}

TEST_CASE("ratio diagnostic") {
  const ShiftedFrame f = solve_r0(builtin_potential("harmonic"), QuantumNumbers{1, 0, 3}, 0);
  const AimInputs in = build_s0_lambda0(f, 0);
  const std::vector<Real> exact{static_cast<Real>(epsilon0_closed(f, 1))};
  const GSeries s0 = insert_energy(in.s0_template, f, exact);
  AimState st = aim_start(in.lambda0, s0);
  for (int k = 0; k < 20; ++k) st = aim_step(st, in.lambda0, s0);
  const auto converged = ratio_diagnostic(st, 0.5);
  REQUIRE(converged.has_value());
  CHECK(*converged <= 1e-10);

  const std::vector<Real> off{exact[0] + 0.3L};
  const GSeries s_off = insert_energy(in.s0_template, f, off);
  const AimState early = aim_step(aim_start(in.lambda0, s_off), in.lambda0, s_off);
  const auto v = ratio_diagnostic(early, 0.5);
  REQUIRE(v.has_value());
  CHECK(std::isfinite(*v));
  CHECK(*v > 0.0);

  // lambda_0 = 2 gamma x vanishes at x = 0.
  CHECK_FALSE(ratio_diagnostic(aim_start(in.lambda0, s_off), 0.0).has_value());
}

TEST_CASE("reference coefficients") {
  const EnergyExpansion r1 = expand_energy(solve_r0(npo(-0.46, 0.1), QuantumNumbers{0, 0, 3}), quiet());
  CHECK(r1.eps[2] == doctest::Approx(-0.021504914).epsilon(1e-7));
  const EnergyExpansion r2 = expand_energy(solve_r0(npo(-0.5, 0.1), QuantumNumbers{0, 1, 3}), quiet());
  CHECK(r2.eps[4] == doctest::Approx(0.02042523).epsilon(1e-6));
  for (const auto& tc : kCases) {
    const EnergyExpansion ex = expand_energy(solve_r0(npo(tc.b, tc.c), QuantumNumbers{0, tc.ell, 3}), quiet());
    for (int j : {0, 1, 3, 5}) CHECK(std::abs(ex.eps[static_cast<std::size_t>(j)]) <= 1e-9);
    REQUIRE(ex.records.size() == 6);
    for (const auto& rec : ex.records) CHECK(rec.k_accepted <= 60);
  }
}

TEST_CASE("assembled energies") {
  const SolveResult r = solve(npo(-0.46, 0.1), QuantumNumbers{0, 0, 3}, quiet());
  CHECK(r.partial_sums[4] == doctest::Approx(2.40051591814138).epsilon(1e-12));
  const SolveResult r4 = solve(npo(-0.0406, 0.01), QuantumNumbers{0, 0, 3}, quiet());
  CHECK(r4.partial_sums[4] == doctest::Approx(2.94000001431155).epsilon(1e-12));

  // The assembly is reproducible from the stored fields.
  const ShiftedFrame& f = r.frame;
  double sum = 0.0;
  for (int m = 0; m <= 6; ++m) {
    sum += std::pow(f.g, m) * r.expansion.eps[static_cast<std::size_t>(m)];
    CHECK(r.partial_sums[static_cast<std::size_t>(m)] ==
          doctest::Approx(f.veff_leading + sum / (f.r0 * f.r0 * f.g * f.g)).epsilon(1e-14));
  }
}

TEST_CASE("harmonic and coulomb energies are exact at every order") {
  for (int n = 0; n <= 2; ++n) {
    for (int ell = 0; ell <= 2; ++ell) {
      const SolveResult h = solve(builtin_potential("harmonic"), QuantumNumbers{n, ell, 3}, quiet());
      const SolveResult c = solve(builtin_potential("coulomb"), QuantumNumbers{n, ell, 3}, quiet());
      const double eh = 4 * n + 2 * ell + 3;
      const double ec = -1.0 / (4.0 * (n + ell + 1) * (n + ell + 1));
      for (double e : h.partial_sums) CHECK(std::abs(e - eh) <= 1e-10);
      for (double e : c.partial_sums) CHECK(std::abs(e - ec) <= 1e-10);
    }
  }
}

TEST_CASE("harmonic energies in other dimensions") {
  for (int dim : {2, 4, 5}) {
    for (int n = 0; n <= 1; ++n) {
      const SolveResult h = solve(builtin_potential("harmonic"), QuantumNumbers{n, 1, dim}, quiet());
      for (double e : h.partial_sums) CHECK(std::abs(e - (4 * n + 2 + dim)) <= 1e-10);
    }
  }
}

TEST_CASE("J = 6 and J = 8 agree on shared orders") {
  for (const auto& tc : kCases) {
    const PotentialSpec v = npo(tc.b, tc.c);
    const QuantumNumbers qn{0, tc.ell, 3};
    const EnergyExpansion e6 = expand_energy(solve_r0(v, qn, 6), quiet(6));
    const EnergyExpansion e8 = expand_energy(solve_r0(v, qn, 8), quiet(8));
    for (std::size_t j = 0; j <= 6; ++j) CHECK(std::abs(e6.eps[j] - e8.eps[j]) <= 1e-10);
  }
}

TEST_CASE("sensitivity diagnostic reports the alternate point") {
  EngineOptions o;
  const SolveResult r = solve(npo(-0.46, 0.1), QuantumNumbers{0, 0, 3}, o);
  REQUIRE(r.expansion.records.size() == 6);
  const OrderRecord& rec = r.expansion.records[1];
  CHECK(rec.alt_x0 == 0.5);
  REQUIRE(rec.alt_value.has_value());
  CHECK(*rec.alt_value == doctest::Approx(rec.value).epsilon(1e-8));
  CHECK(r.diagnostics.ratio_trace.size() >= 2);
  CHECK(sensitivity_point(0.5) == 0.0);
}

TEST_CASE("engine errors") {
  const ShiftedFrame f = solve_r0(npo(-0.46, 0.1), QuantumNumbers{0, 0, 3});
  EngineOptions tight = quiet();
  tight.k_cap = 4;
  try {
    (void)expand_energy(f, tight);
    FAIL("expected non-convergence");
  } catch (const NonConvergenceError& e) {
    CHECK(e.code() == ErrorCode::Convergence);
    CHECK(e.order() == 2);
    CHECK(std::isfinite(e.last_iterate()));
    CHECK(std::isfinite(e.previous_iterate()));
  }
  EngineOptions small = quiet();
  small.max_degree = 12;
  try {
    (void)expand_energy(f, small);
    FAIL("expected the degree guard");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Resource);
  }
  const AimInputs in = build_s0_lambda0(f, 6);
  const std::vector<Real> known{0};
  CHECK_THROWS_AS(solve_order(0, f, in, known, quiet(), 0.0), Error);
  CHECK_THROWS_AS(solve_order(3, f, in, known, quiet(), 0.0), Error);
}
