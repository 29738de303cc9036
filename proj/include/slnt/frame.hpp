#pragma once

#include <string>
#include <vector>

#include "slnt/potential.hpp"
#include "slnt/series.hpp"

namespace slnt {

/// n >= 0, N >= 1, ell >= -1. ell = -1 is admitted only as the
/// supersymmetric-partner convention used in published tables; it is not a
/// physical angular momentum.
struct QuantumNumbers {
  int n = 0;
  int ell = 0;
  int dim = 3;

  void validate() const;
};

/// alpha_i, beta_i, xi_i for i = 0..J.
struct ExpansionCoefficients {
  std::vector<double> alphas;
  std::vector<double> betas;
  std::vector<double> xis;
};

/// Everything fixed by the choice of expansion point r0 for one case.
struct ShiftedFrame {
  QuantumNumbers qn;
  int order = 0;  // J, the highest coefficient index
  double r0 = 0.0;
  double Lambda = 0.0;  // N + 2 ell - a
  double a = 0.0;       // shift parameter
  double g = 0.0;       // Lambda^(-1/2)
  double gamma = 0.0;   // sqrt(alpha_0)
  double A = 0.0;       // a - 2
  double B = 0.0;       // (1 - a)(3 - a)/4
  double V0 = 0.0;
  double dV0 = 0.0;
  double veff_leading = 0.0;  // (Lambda^2/r0^2)(1/4 + r0^2 V(r0)/Lambda^2)
  ExpansionCoefficients coeffs;
  std::vector<double> candidate_r0;  // every bracketed root found by the scan
  std::vector<std::string> warnings;
};

struct FrameResiduals {
  double minimum_condition = 0.0;  // (Lambda^2 - 2 r0^3 V'(r0)) / Lambda^2
  double shift_condition = 0.0;    // residual of the implicit r0 equation, relative
  double epsilon0_nulling = 0.0;   // beta_0 + (2n+1) sqrt(alpha_0)
};

/// Throws Frame when V'(r0) = 0 and Usage when fewer than J+2 derivatives are given.
ExpansionCoefficients coefficients(const PotentialDerivatives& derivs, double A, double B, int order);

/// Residual of  N + 2 ell - 2 + 2(2n+1) sqrt(alpha_0(r)) - sqrt(2 r^3 V'(r)).
/// NaN where it is undefined (V' <= 0, alpha_0 <= 0, or V not smooth at r).
double shift_equation_residual(const PotentialSpec& spec, const QuantumNumbers& qn, double r);

/// Builds the frame at an explicit r0 and shift a (used for forced-shift studies).
ShiftedFrame build_frame(const PotentialSpec& spec, const QuantumNumbers& qn, double r0, double a, int order);

/// Solves the implicit r0 equation with a = 2 - 2(2n+1) sqrt(alpha_0) and builds the frame.
ShiftedFrame solve_r0(const PotentialSpec& spec, const QuantumNumbers& qn, int order = 6);

FrameResiduals frame_residuals(const PotentialSpec& spec, const ShiftedFrame& frame);

/// lambda_0(x) = 2 gamma x and s_0(x, g) without the energy term; the g^0
/// constant is beta_0 + gamma and the g^0 x^2 term is dropped (gamma^2 = alpha_0).
struct AimInputs {
  GSeries lambda0;
  GSeries s0_template;
};

AimInputs build_s0_lambda0(const ShiftedFrame& frame, int order);

}  // namespace slnt
