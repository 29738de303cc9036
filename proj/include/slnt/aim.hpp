#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slnt/frame.hpp"
#include "slnt/series.hpp"

namespace slnt {

/// lambda_k and s_k at one iteration level.
struct AimLevel {
  GSeries lambda;
  GSeries s;
};

/// The recursion keeps level k and the look-ahead level k+1 needed by delta_k.
struct AimState {
  int k = 0;
  AimLevel current;  // level k
  AimLevel next;     // level k + 1
  Real x0 = 0;
  std::vector<Real> epsilon_known;
};

inline constexpr int kDefaultMaxDegree = 4096;

/// lambda' = lambda_prev' + s_prev + lambda0 lambda_prev,  s' = s_prev' + s0 lambda_prev.
AimLevel aim_recur(const AimLevel& prev, const GSeries& lambda0, const GSeries& s0);

/// State at k = 0: current = (lambda0, s0), next = level 1.
AimState aim_start(const GSeries& lambda0, const GSeries& s0, Real x0 = 0, std::vector<Real> epsilon_known = {});

/// Advances k by one. Throws Resource when the x-degree exceeds max_degree.
AimState aim_step(const AimState& state, const GSeries& lambda0, const GSeries& s0,
                  int max_degree = kDefaultMaxDegree);

/// delta_k = s_k lambda_{k+1} - s_{k+1} lambda_k in the truncated algebra.
GSeries delta_k(const AimState& state);

/// Coefficient of g^j of delta_k evaluated at x, without forming the full product.
Real delta_coefficient_at(const AimState& state, int j, Real x);

/// The same coefficient together with the sum of magnitudes of everything
/// that went into it (a bound on the scale of rounding error).
struct DeltaSample {
  Real value = 0;
  Real magnitude = 0;
};
DeltaSample delta_sample_at(const AimState& state, int j, Real x);

/// |s_{k+1}/lambda_{k+1} - s_k/lambda_k| on the g^0 slice at x. Empty when a
/// lambda vanishes at x.
std::optional<double> ratio_diagnostic(const AimState& state, double x);

/// beta_0 + (2n+1) sqrt(alpha_0); zero under the standard shift.
double epsilon0_closed(const ShiftedFrame& frame, int n);

/// Fills the energy slot of s0: the g^0 constant becomes beta_0 + gamma - eps[0]
/// and eps[j] is subtracted from the g^j constant. The g^0 constant is written
/// as -2n gamma - (eps[0] - eps0_closed) so that it is exactly -2n gamma when
/// eps[0] is the closed form.
GSeries insert_energy(const GSeries& s0_template, const ShiftedFrame& frame, std::span<const Real> eps);

struct EngineOptions {
  int order = 6;        // J
  int k_cap = 60;
  double tol = 1e-12;   // relative change between successive k
  double abs_tol = 1e-14;
  double x0 = 0.0;
  bool sensitivity = true;  // also extract each order at an alternate x0
  int max_degree = kDefaultMaxDegree;
};

/// Alternate evaluation point used by the sensitivity diagnostic.
double sensitivity_point(double x0);

struct OrderRecord {
  int order = 0;
  double value = 0.0;
  int k_accepted = 0;
  double last_delta = 0.0;            // |eps_k - eps_{k-1}| at acceptance
  std::vector<double> iterates;       // per-k estimates, NaN where ill-conditioned
  double alt_x0 = 0.0;
  std::optional<double> alt_value;    // empty if the alternate point did not converge
};

struct EnergyExpansion {
  int order = 0;
  std::vector<double> eps;             // eps^(0) .. eps^(J)
  std::vector<OrderRecord> records;    // one per j >= 1
};

/// Extracts eps^(j) given the lower orders. The g^j coefficient of delta_k(x0)
/// is affine in eps^(j); it is solved at each k and accepted at the first k
/// where three consecutive solutions agree: relatively within tol, absolutely
/// within abs_tol, or within the propagated rounding error of the solution.
OrderRecord solve_order(int j, const ShiftedFrame& frame, const AimInputs& inputs, std::span<const Real> known,
                        const EngineOptions& options, double x0);

/// Numerically locates the n-th root (ascending) in eps of the g^0 slice of
/// delta_k(x0) for the zeroth-order problem. Independent of epsilon0_closed.
double epsilon0_numeric(const ShiftedFrame& frame, int n, int k, double x0);

EnergyExpansion expand_energy(const ShiftedFrame& frame, const EngineOptions& options);

struct Diagnostics {
  FrameResiduals residuals;
  double ratio_x = 0.5;                            // where the trace is sampled
  std::vector<std::optional<double>> ratio_trace;  // g^0 ratio diagnostic per k
  std::vector<std::string> warnings;
};

struct SolveResult {
  ShiftedFrame frame;
  EnergyExpansion expansion;
  std::vector<double> partial_sums;  // E^(m), m = 0..J
  Diagnostics diagnostics;
};

/// E^(m) = veff_leading + (1/(r0^2 g^2)) sum_{i<=m} g^i eps^(i).
SolveResult assemble_energy(const ShiftedFrame& frame, const EnergyExpansion& expansion);

/// Full pipeline: frame, expansion, assembly, diagnostics.
SolveResult solve(const PotentialSpec& spec, const QuantumNumbers& qn, const EngineOptions& options = {});

}  // namespace slnt
