#include "slnt/aim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "slnt/errors.hpp"

namespace slnt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Unit roundoff of Real, and how many multiples of the propagated rounding
// estimate two iterates may differ by and still count as agreeing.
constexpr Real kRoundoff = std::numeric_limits<Real>::epsilon() / 2;
constexpr double kFloorFactor = 16.0;

// Odd orders vanish by the x -> -x, g -> -g symmetry of the expanded operator.
constexpr double kOddTolerance = 1e-9;

}  // namespace

AimLevel aim_recur(const AimLevel& prev, const GSeries& lambda0, const GSeries& s0) {
  AimLevel out;
  out.lambda = gseries_diff(prev.lambda) + prev.s + gseries_mul(lambda0, prev.lambda);
  out.s = gseries_diff(prev.s) + gseries_mul(s0, prev.lambda);
  return out;
}

AimState aim_start(const GSeries& lambda0, const GSeries& s0, Real x0, std::vector<Real> epsilon_known) {
  if (lambda0.order() != s0.order()) throw Error(ErrorCode::Usage, "lambda0 and s0 truncation orders differ");
  AimState state;
  state.k = 0;
  state.current = AimLevel{lambda0, s0};
  state.next = aim_recur(state.current, lambda0, s0);
  state.x0 = x0;
  state.epsilon_known = std::move(epsilon_known);
  return state;
}

AimState aim_step(const AimState& state, const GSeries& lambda0, const GSeries& s0, int max_degree) {
  AimState out;
  out.k = state.k + 1;
  out.current = state.next;
  out.next = aim_recur(state.next, lambda0, s0);
  out.x0 = state.x0;
  out.epsilon_known = state.epsilon_known;
  const int degree = std::max(out.next.lambda.max_degree(), out.next.s.max_degree());
  if (degree > max_degree) {
    throw Error(ErrorCode::Resource, "AIM polynomial degree " + std::to_string(degree) + " exceeds the guard " +
                                         std::to_string(max_degree) + "; lower k_cap or the order J");
  }
  return out;
}

GSeries delta_k(const AimState& state) {
  return gseries_mul(state.current.s, state.next.lambda) - gseries_mul(state.next.s, state.current.lambda);
}

namespace {

// Evaluates every g-coefficient at x and reports the sum of |terms| that
// were added, so the caller can estimate the cancellation error.
std::vector<Real> evaluate_abs(const GSeries& s, Real x, std::vector<Real>& magnitude) {
  std::vector<Real> out(static_cast<std::size_t>(s.order() + 1));
  magnitude.assign(out.size(), 0);
  const Real ax = std::fabs(x);
  for (int j = 0; j <= s.order(); ++j) {
    const auto c = s[j].coeffs();
    Real v = 0;
    Real m = 0;
    for (std::size_t i = c.size(); i-- > 0;) {
      v = v * x + c[i];
      m = m * ax + std::fabs(c[i]);
    }
    out[static_cast<std::size_t>(j)] = v;
    magnitude[static_cast<std::size_t>(j)] = m;
  }
  return out;
}

}  // namespace

DeltaSample delta_sample_at(const AimState& state, int j, Real x) {
  std::vector<Real> msc, mlc, msn, mln;
  const auto sc = evaluate_abs(state.current.s, x, msc);
  const auto lc = evaluate_abs(state.current.lambda, x, mlc);
  const auto sn = evaluate_abs(state.next.s, x, msn);
  const auto ln = evaluate_abs(state.next.lambda, x, mln);
  DeltaSample out;
  for (int a = 0; a <= j; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    const auto ub = static_cast<std::size_t>(j - a);
    out.value += sc[ua] * ln[ub] - sn[ua] * lc[ub];
    out.magnitude += msc[ua] * mln[ub] + msn[ua] * mlc[ub];
  }
  return out;
}

Real delta_coefficient_at(const AimState& state, int j, Real x) { return delta_sample_at(state, j, x).value; }

std::optional<double> ratio_diagnostic(const AimState& state, double x) {
  const Real xl = x;
  const Real lk = state.current.lambda[0](xl);
  const Real ln = state.next.lambda[0](xl);
  if (lk == 0 || ln == 0) return std::nullopt;
  const Real value = std::fabs(state.next.s[0](xl) / ln - state.current.s[0](xl) / lk);
  if (!std::isfinite(static_cast<double>(value))) return std::nullopt;
  return static_cast<double>(value);
}

double epsilon0_closed(const ShiftedFrame& frame, int n) {
  if (!(frame.coeffs.alphas.at(0) > 0.0)) throw Error(ErrorCode::Frame, "alpha_0 must be positive");
  return frame.coeffs.betas.at(0) + (2 * n + 1) * std::sqrt(frame.coeffs.alphas[0]);
}

GSeries insert_energy(const GSeries& s0_template, const ShiftedFrame& frame, std::span<const Real> eps) {
  GSeries s0 = s0_template;
  const int J = s0.order();
  const int n = frame.qn.n;
  if (!eps.empty()) {
    const Real closed = static_cast<Real>(frame.coeffs.betas[0]) + (2 * n + 1) * static_cast<Real>(frame.gamma);
    const Real constant = -2 * n * static_cast<Real>(frame.gamma) - (eps[0] - closed);
    s0.term(0) = s0.term(0) - XPoly::constant(s0[0][0]) + XPoly::constant(constant);
  }
  for (int j = 1; j <= J && static_cast<std::size_t>(j) < eps.size(); ++j) {
    s0.term(j) -= XPoly::constant(eps[static_cast<std::size_t>(j)]);
  }
  return s0;
}

double sensitivity_point(double x0) { return x0 == 0.5 ? 0.0 : 0.5; }

OrderRecord solve_order(int j, const ShiftedFrame& frame, const AimInputs& inputs, std::span<const Real> known,
                        const EngineOptions& options, double x0) {
  if (j < 1) throw Error(ErrorCode::Usage, "solve_order handles j >= 1; eps^(0) has a closed form");
  if (static_cast<int>(known.size()) < j) {
    throw Error(ErrorCode::Usage, "solve_order(" + std::to_string(j) + ") needs eps^(0..j-1)");
  }
  if (j > inputs.s0_template.order()) throw Error(ErrorCode::Usage, "order exceeds the s0 truncation");

  const GSeries lambda0 = inputs.lambda0.truncated(j);
  const GSeries tmpl = inputs.s0_template.truncated(j);

  // Two trial values of eps^(j); the g^j coefficient of delta_k is affine in it.
  std::vector<Real> eps(known.begin(), known.begin() + j);
  eps.push_back(0);
  const GSeries s0_zero = insert_energy(tmpl, frame, eps);
  eps.back() = 1;
  const GSeries s0_one = insert_energy(tmpl, frame, eps);

  const Real x = x0;
  AimState zero = aim_start(lambda0, s0_zero, x);
  AimState one = aim_start(lambda0, s0_one, x);

  OrderRecord rec;
  rec.order = j;
  std::vector<double> floors;
  int ill_count = 0;
  for (int k = 0; k <= options.k_cap; ++k) {
    if (k > 0) {
      zero = aim_step(zero, lambda0, s0_zero, options.max_degree);
      one = aim_step(one, lambda0, s0_one, options.max_degree);
    }
    const DeltaSample sz = delta_sample_at(zero, j, x);
    const DeltaSample so = delta_sample_at(one, j, x);
    const Real intercept = sz.value;
    const Real slope = so.value - sz.value;
    if (!std::isfinite(static_cast<double>(intercept)) || !std::isfinite(static_cast<double>(slope))) {
      throw Error(ErrorCode::Resource, "AIM coefficients overflowed at k = " + std::to_string(k) + "; lower k_cap");
    }
    const Real scale = std::fabs(intercept) + std::fabs(intercept + slope);
    if (slope == 0 || std::fabs(slope) < Real(1e-12) * scale) {
      rec.iterates.push_back(kNaN);
      floors.push_back(kNaN);
      ++ill_count;
      continue;
    }
    const double estimate = static_cast<double>(-intercept / slope);
    rec.iterates.push_back(estimate);
    floors.push_back(static_cast<double>(kRoundoff * (sz.magnitude + so.magnitude) / std::fabs(slope)));

    const std::size_t m = rec.iterates.size();
    if (m < 3) continue;
    const double e2 = rec.iterates[m - 1];
    const double e1 = rec.iterates[m - 2];
    const double e0 = rec.iterates[m - 3];
    if (std::isnan(e0) || std::isnan(e1)) continue;
    const double floor = kFloorFactor * std::max({floors[m - 1], floors[m - 2], floors[m - 3]});
    auto close = [&](double a, double b) {
      const double d = std::abs(a - b);
      return d <= options.tol * std::max(std::abs(a), std::abs(b)) || d <= options.abs_tol || d <= floor;
    };
    if (close(e2, e1) && close(e1, e0)) {
      rec.value = e2;
      rec.k_accepted = k;
      rec.last_delta = std::abs(e2 - e1);
      return rec;
    }
  }

  if (ill_count == static_cast<int>(rec.iterates.size())) {
    throw Error(ErrorCode::IllConditioned,
                "eps^(" + std::to_string(j) + "): the energy slope of delta_k vanishes at x0 = " + fmt(x0) +
                    " for every k; try a different --x0");
  }
  double last = kNaN;
  double previous = kNaN;
  for (auto it = rec.iterates.rbegin(); it != rec.iterates.rend(); ++it) {
    if (std::isnan(*it)) continue;
    if (std::isnan(last)) {
      last = *it;
    } else {
      previous = *it;
      break;
    }
  }
  throw NonConvergenceError("eps^(" + std::to_string(j) + ") did not settle within k_cap = " +
                                std::to_string(options.k_cap) + " (last iterates " + fmt(previous) + ", " +
                                fmt(last) + ")",
                            j, previous, last);
}

double epsilon0_numeric(const ShiftedFrame& frame, int n, int k, double x0) {
  const Real gamma = frame.gamma;
  const Real beta0 = frame.coeffs.betas.at(0);
  const Real x = x0;
  const GSeries lambda0 = GSeries::constant(XPoly::monomial(2 * gamma, 1), 0);

  auto delta_at = [&](Real eps) {
    const GSeries s0 = GSeries::constant(XPoly::constant(beta0 + gamma - eps), 0);
    AimState st = aim_start(lambda0, s0, x);
    for (int i = 0; i < k; ++i) st = aim_step(st, lambda0, s0);
    return delta_coefficient_at(st, 0, x);
  };

  // Roots lie on the ladder beta0 + (2m+1) gamma; scan a window that holds
  // the first n+1 of them and refine each sign change by bisection.
  const Real lo = beta0 - gamma / 2;
  const Real hi = beta0 + (2 * n + 2) * gamma;
  const int steps = 64 * (n + 1);
  std::vector<Real> roots;
  Real prev_e = lo;
  Real prev_v = delta_at(prev_e);
  for (int i = 1; i <= steps; ++i) {
    const Real e = lo + (hi - lo) * i / steps;
    const Real v = delta_at(e);
    if (prev_v == 0) {
      roots.push_back(prev_e);
    } else if ((prev_v < 0) != (v < 0) && v != 0) {
      Real a = prev_e;
      Real b = e;
      Real fa = prev_v;
      for (int it = 0; it < 200 && b - a > std::numeric_limits<Real>::epsilon() * 8 * (std::fabs(a) + gamma); ++it) {
        const Real mid = (a + b) / 2;
        const Real fm = delta_at(mid);
        if (fm == 0) {
          a = b = mid;
          break;
        }
        if ((fm < 0) == (fa < 0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      roots.push_back((a + b) / 2);
    }
    prev_e = e;
    prev_v = v;
  }
  if (static_cast<int>(roots.size()) <= n) {
    throw Error(ErrorCode::Convergence, "zeroth-order delta_k has fewer than n+1 roots; increase k");
  }
  std::sort(roots.begin(), roots.end());
  return static_cast<double>(roots[static_cast<std::size_t>(n)]);
}

EnergyExpansion expand_energy(const ShiftedFrame& frame, const EngineOptions& options) {
  if (options.order < 0) throw Error(ErrorCode::Usage, "order must be non-negative");
  const AimInputs inputs = build_s0_lambda0(frame, options.order);

  EnergyExpansion ex;
  ex.order = options.order;
  std::vector<Real> known{static_cast<Real>(epsilon0_closed(frame, frame.qn.n))};
  const double alt_x0 = sensitivity_point(options.x0);
  for (int j = 1; j <= options.order; ++j) {
    OrderRecord rec = solve_order(j, frame, inputs, known, options, options.x0);
    rec.alt_x0 = alt_x0;
    if (options.sensitivity) {
      try {
        rec.alt_value = solve_order(j, frame, inputs, known, options, alt_x0).value;
      } catch (const Error&) {
        rec.alt_value.reset();
      }
    }
    known.push_back(rec.value);
    ex.records.push_back(std::move(rec));
  }
  for (Real e : known) ex.eps.push_back(static_cast<double>(e));
  return ex;
}

SolveResult assemble_energy(const ShiftedFrame& frame, const EnergyExpansion& expansion) {
  SolveResult res;
  res.frame = frame;
  res.expansion = expansion;
  const Real g = frame.g;
  const Real prefactor = 1 / (static_cast<Real>(frame.r0) * frame.r0 * g * g);
  Real sum = 0;
  Real gi = 1;
  for (double e : expansion.eps) {
    sum += gi * static_cast<Real>(e);
    gi *= g;
    res.partial_sums.push_back(static_cast<double>(static_cast<Real>(frame.veff_leading) + prefactor * sum));
  }
  return res;
}

SolveResult solve(const PotentialSpec& spec, const QuantumNumbers& qn, const EngineOptions& options) {
  const ShiftedFrame frame = solve_r0(spec, qn, options.order);
  const EnergyExpansion expansion = expand_energy(frame, options);
  SolveResult res = assemble_energy(frame, expansion);

  res.diagnostics.residuals = frame_residuals(spec, frame);
  res.diagnostics.warnings = frame.warnings;
  for (int j = 1; j < static_cast<int>(expansion.eps.size()); j += 2) {
    if (std::abs(expansion.eps[static_cast<std::size_t>(j)]) > kOddTolerance) {
      res.diagnostics.warnings.push_back("odd order eps^(" + std::to_string(j) + ") = " +
                                         fmt(expansion.eps[static_cast<std::size_t>(j)]) + " is not negligible");
    }
  }

  // g^0 ratio telemetry up to the deepest accepted k. It is sampled off x0
  // because lambda_k alternates parity and vanishes at x = 0 for every other k.
  int k_max = 1;
  for (const auto& r : expansion.records) k_max = std::max(k_max, r.k_accepted);
  const AimInputs inputs = build_s0_lambda0(frame, 0);
  const std::vector<Real> eps0{static_cast<Real>(expansion.eps.at(0))};
  const GSeries s0 = insert_energy(inputs.s0_template, frame, eps0);
  res.diagnostics.ratio_x = sensitivity_point(options.x0);
  AimState st = aim_start(inputs.lambda0, s0, options.x0);
  for (int k = 0; k <= k_max; ++k) {
    if (k > 0) st = aim_step(st, inputs.lambda0, s0, options.max_degree);
    res.diagnostics.ratio_trace.push_back(ratio_diagnostic(st, res.diagnostics.ratio_x));
  }
  return res;
}

}  // namespace slnt
