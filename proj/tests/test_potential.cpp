#include <cmath>
#include <random>

#include "doctest.h"
#include "fd_oracle.hpp"
#include "slnt/errors.hpp"
#include "slnt/frame.hpp"
#include "slnt/potential.hpp"

using namespace slnt;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::Usage;
}

}  // namespace

TEST_CASE("parse harmonic") {
  const PotentialSpec v = parse_potential("r^2");
  CHECK(structurally_equal(v.root(), builtin_potential("harmonic").root()));
  CHECK(v.value(3.0) == doctest::Approx(9.0));
}

TEST_CASE("parse the non-polynomial oscillator") {
  const PotentialSpec v = parse_potential("r^2 + b*r^2/(1+c*r^2)", {{"b", -0.46}, {"c", 0.1}});
  const PotentialSpec w = builtin_potential("npo", {{"b", -0.46}, {"c", 0.1}});
  for (double r : {0.3, 1.0, 2.7}) CHECK(v.value(r) == doctest::Approx(w.value(r)).epsilon(1e-15));
  CHECK(v.params().size() == 2);
}

TEST_CASE("precedence and associativity") {
  CHECK(parse_potential("2^3^2").value(1.0) == doctest::Approx(512.0));
  CHECK(parse_potential("-2^2").value(1.0) == doctest::Approx(-4.0));
  CHECK(parse_potential("8/4/2").value(1.0) == doctest::Approx(1.0));
  CHECK(parse_potential("1-2-3").value(1.0) == doctest::Approx(-4.0));
  CHECK(parse_potential("2*r^-1").value(4.0) == doctest::Approx(0.5));
  CHECK(parse_potential("r^(1+1)").value(3.0) == doctest::Approx(9.0));
  CHECK(parse_potential(" 1.5e1 * r ").value(2.0) == doctest::Approx(30.0));
}

TEST_CASE("grammar rejections carry offsets") {
  try {
    (void)parse_potential("r^(1/2)");
    FAIL("expected rejection");
  } catch (const ParseError& e) {
    CHECK(e.code() == ErrorCode::Parse);
    CHECK(std::string(e.what()).find("integer") != std::string::npos);
  }
  try {
    (void)parse_potential("r + * 2");
    FAIL("expected rejection");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
  }
  CHECK(code_of([] { (void)parse_potential("r^2 + q"); }) == ErrorCode::Parse);
  CHECK(code_of([] { (void)parse_potential("r^r"); }) == ErrorCode::Parse);
  CHECK(code_of([] { (void)parse_potential("r^b", {{"b", 2.0}}); }) == ErrorCode::Parse);
  CHECK(code_of([] { (void)parse_potential("(r"); }) == ErrorCode::Parse);
  CHECK(code_of([] { (void)parse_potential(""); }) == ErrorCode::Parse);
  CHECK(code_of([] { (void)parse_potential("r 2"); }) == ErrorCode::Parse);
}

TEST_CASE("serialise and re-parse is structurally identical") {
  const std::map<std::string, double> params{{"b", -0.46}, {"c", 0.1}, {"k", 3.0}};
  for (const char* src : {"r^2 + b*r^2/(1+c*r^2)", "-1/r", "-(r - 2)^3 * k", "r^-2 + 2^3^2", "1 - -r", "((r))"}) {
    const PotentialSpec v = parse_potential(src, params);
    const PotentialSpec w = parse_potential(v.to_string(), params);
    CHECK_MESSAGE(structurally_equal(v.root(), w.root()), src << " -> " << v.to_string());
  }
}

TEST_CASE("builtins") {
  CHECK(builtin_names().size() == 3);
  CHECK(code_of([] { (void)builtin_potential("morse"); }) == ErrorCode::Config);
  CHECK(code_of([] { (void)builtin_potential("npo", {{"b", 1.0}}); }) == ErrorCode::Config);
  CHECK(code_of([] { (void)builtin_potential("harmonic", {{"b", 1.0}}); }) == ErrorCode::Config);
  CHECK(builtin_potential("coulomb").value(2.0) == doctest::Approx(-0.5));
  CHECK(builtin_potential("coulomb").provenance() == "builtin:coulomb");
}

TEST_CASE("derivatives of polynomials are exact") {
  const auto d = derivatives_at(builtin_potential("harmonic"), 1.0, 4);
  REQUIRE(d.values.size() == 5);
  const double expected[] = {1, 2, 2, 0, 0};
  for (std::size_t k = 0; k < 5; ++k) CHECK(d.values[k] == expected[k]);
  const auto q = derivatives_at(parse_potential("3*r^4 - r^3 + 2"), 2.0, 5);
  const double e2[] = {3 * 16 - 8 + 2, 3 * 4 * 8 - 3 * 4, 3 * 12 * 4 - 6 * 2, 3 * 24 * 2 - 6, 72, 0};
  for (std::size_t k = 0; k < 6; ++k) CHECK(q.values[k] == e2[k]);
}

TEST_CASE("coulomb derivatives") {
  const auto d = derivatives_at(builtin_potential("coulomb"), 2.0, 3);
  CHECK(d.values[0] == doctest::Approx(-0.5));
  CHECK(d.values[1] == doctest::Approx(0.25));
  CHECK(d.values[2] == doctest::Approx(-0.25));
  CHECK(d.values[3] == doctest::Approx(0.375));
}

TEST_CASE("derivative errors") {
  CHECK(code_of([] { (void)derivatives_at(builtin_potential("coulomb"), 1.0, 1); }) == ErrorCode::Usage);
  CHECK(code_of([] { (void)derivatives_at(builtin_potential("harmonic"), 0.0, 4); }) == ErrorCode::Domain);
  CHECK(code_of([] { (void)derivatives_at(parse_potential("1/(r-1)"), 1.0, 4); }) == ErrorCode::Domain);
  CHECK(code_of([] { (void)parse_potential("1/(r-1)").value(1.0); }) == ErrorCode::Domain);
}

TEST_CASE("npo derivatives at the solved r0 against finite differences") {
  const double b = -0.46;
  const double c = 0.1;
  const PotentialSpec v = builtin_potential("npo", {{"b", b}, {"c", c}});
  const double r0 = solve_r0(v, QuantumNumbers{0, 0, 3}).r0;
  const auto d = derivatives_at(v, r0, 8);
  auto f = [&](slnt::testing::Quad r) { return r * r + b * r * r / (1 + c * r * r); };
  CHECK(d.values[0] == doctest::Approx(v.value(r0)).epsilon(1e-15));
  for (int k = 1; k <= 8; ++k) {
    const double exact = d.values[static_cast<std::size_t>(k)];
    const double estimate = slnt::testing::fd_derivative(f, r0, k);
    CHECK(std::abs(estimate - exact) <= 1e-8 * std::max(1.0, std::abs(exact)));
  }
}

TEST_CASE("derivatives are linear in the potential") {
  const std::map<std::string, double> p{{"a", 2.5}};
  const auto v1 = derivatives_at(parse_potential("r^2/(1+r)"), 1.3, 6);
  const auto v2 = derivatives_at(parse_potential("r^-3 - r"), 1.3, 6);
  const auto sum = derivatives_at(parse_potential("a*(r^2/(1+r)) + (r^-3 - r)", p), 1.3, 6);
  for (std::size_t k = 0; k <= 6; ++k) {
    CHECK(sum.values[k] == doctest::Approx(2.5 * v1.values[k] + v2.values[k]).epsilon(1e-13));
  }
}

TEST_CASE("jet recentering matches direct evaluation") {
  const PotentialSpec v = builtin_potential("npo", {{"b", -0.5}, {"c", 0.1}});
  const double r0 = 1.7;
  const double h = 1e-2;
  // Carry extra orders so the re-expansion of coefficients 0..6 is complete
  // to well below the tolerance.
  const TaylorJet moved = v.jet(r0, 14).recentered(h);
  const TaylorJet direct = v.jet(r0 + h, 14);
  for (std::size_t k = 0; k <= 6; ++k) {
    CHECK(std::abs(moved[k] - direct[k]) <= 1e-10 * std::max(1.0, std::abs(direct[k])));
  }
}
