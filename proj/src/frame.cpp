#include "slnt/frame.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "slnt/errors.hpp"

namespace slnt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

double alpha0_at(const PotentialDerivatives& d) {
  // alpha_0 = 3/4 + r0 V''/(4 V')
  return 0.75 + d.r0 * d.values[2] / (4.0 * d.values[1]);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

void QuantumNumbers::validate() const {
  if (n < 0) throw Error(ErrorCode::Config, "n must be >= 0");
  if (ell < -1) throw Error(ErrorCode::Config, "ell must be >= -1");
  if (dim < 1) throw Error(ErrorCode::Config, "N must be >= 1");
}

ExpansionCoefficients coefficients(const PotentialDerivatives& derivs, double A, double B, int order) {
  if (order < 0) throw Error(ErrorCode::Usage, "expansion order must be non-negative");
  if (static_cast<int>(derivs.values.size()) < order + 3) {
    throw Error(ErrorCode::Usage, "need derivatives through order " + std::to_string(order + 2));
  }
  const double dV = derivs.values[1];
  if (dV == 0.0) throw Error(ErrorCode::Frame, "V'(r0) = 0: degenerate frame");

  ExpansionCoefficients c;
  const double r0 = derivs.r0;
  for (int i = 0; i <= order; ++i) {
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    const double tail = std::pow(r0, i + 1) / (2.0 * factorial(i + 2)) * derivs.values[i + 2] / dV;
    c.alphas.push_back(sign * (i + 3) / 4.0 + tail);
    c.betas.push_back(sign * (i + 1) / 2.0 * A);
    c.xis.push_back(sign * (i + 1) * B);
  }
  return c;
}

double shift_equation_residual(const PotentialSpec& spec, const QuantumNumbers& qn, double r) {
  PotentialDerivatives d;
  try {
    d = derivatives_at(spec, r, 2);
  } catch (const Error&) {
    return kNaN;
  }
  const double dV = d.values[1];
  if (!(dV > 0.0)) return kNaN;
  const double alpha0 = alpha0_at(d);
  if (!(alpha0 > 0.0)) return kNaN;
  const double lhs = qn.dim + 2.0 * qn.ell - 2.0 + 2.0 * (2 * qn.n + 1) * std::sqrt(alpha0);
  return lhs - std::sqrt(2.0 * r * r * r * dV);
}

ShiftedFrame build_frame(const PotentialSpec& spec, const QuantumNumbers& qn, double r0, double a, int order) {
  qn.validate();
  const PotentialDerivatives d = derivatives_at(spec, r0, order + 2);
  if (!(d.values[1] > 0.0)) throw Error(ErrorCode::Frame, "V'(r0) <= 0 at r0 = " + fmt(r0));

  ShiftedFrame f;
  f.qn = qn;
  f.order = order;
  f.r0 = r0;
  f.a = a;
  f.Lambda = qn.dim + 2.0 * qn.ell - a;
  if (!(f.Lambda > 0.0)) throw Error(ErrorCode::Frame, "Lambda = N + 2l - a must be positive, got " + fmt(f.Lambda));
  f.g = 1.0 / std::sqrt(f.Lambda);
  // Centrifugal term (k-1)(k-3)/(4r^2), k = N + 2l = Lambda + a, split as
  // (Lambda^2/4)(1 + 2A/Lambda + 4B/Lambda^2).
  f.A = a - 2.0;
  f.B = (1.0 - a) * (3.0 - a) / 4.0;
  f.V0 = d.values[0];
  f.dV0 = d.values[1];
  f.coeffs = coefficients(d, f.A, f.B, order);
  if (!(f.coeffs.alphas[0] > 0.0)) {
    throw Error(ErrorCode::Frame, "alpha_0 = " + fmt(f.coeffs.alphas[0]) + " <= 0 at r0 = " + fmt(r0));
  }
  f.gamma = std::sqrt(f.coeffs.alphas[0]);
  f.veff_leading = f.Lambda * f.Lambda / (r0 * r0) * (0.25 + r0 * r0 * f.V0 / (f.Lambda * f.Lambda));
  return f;
}

ShiftedFrame solve_r0(const PotentialSpec& spec, const QuantumNumbers& qn, int order) {
  qn.validate();
  auto residual = [&](double r) { return shift_equation_residual(spec, qn, r); };

  // Log-spaced scan over [1e-3, 1e3] for sign changes between finite samples.
  constexpr int kScan = 3000;
  constexpr double kLo = 1e-3;
  constexpr double kHi = 1e3;
  std::vector<std::pair<double, double>> brackets;
  double prev_r = kLo;
  double prev_f = residual(prev_r);
  for (int i = 1; i <= kScan; ++i) {
    const double r = kLo * std::pow(kHi / kLo, static_cast<double>(i) / kScan);
    const double fr = residual(r);
    if (std::isfinite(prev_f) && std::isfinite(fr)) {
      if (prev_f == 0.0) {
        brackets.emplace_back(prev_r, prev_r);
      } else if ((prev_f < 0.0) != (fr < 0.0) && fr != 0.0) {
        brackets.emplace_back(prev_r, r);
      }
    }
    prev_r = r;
    prev_f = fr;
  }
  if (brackets.empty()) {
    throw Error(ErrorCode::Frame, "no r0 satisfies the shift equation on [1e-3, 1e3] (is V'(r) > 0 somewhere?)");
  }

  auto refine = [&](double lo, double hi) {
    if (lo == hi) return lo;
    double flo = residual(lo);
    // Bisection to 1e-6 relative.
    while ((hi - lo) > 1e-6 * hi) {
      const double mid = 0.5 * (lo + hi);
      const double fm = residual(mid);
      if (fm == 0.0) return mid;
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    // Newton with a central-difference slope, kept inside the bracket.
    double r = 0.5 * (lo + hi);
    for (int it = 0; it < 60; ++it) {
      const double fr = residual(r);
      if (fr == 0.0) break;
      const double scale = qn.dim + 2.0 * std::abs(qn.ell) + 2.0 * (2 * qn.n + 1);
      const double h = 1e-5 * r;
      const double slope = (residual(r + h) - residual(r - h)) / (2.0 * h);
      double next = r - fr / slope;
      if (!std::isfinite(next) || next <= lo || next >= hi) {
        // fall back to a bisection step
        if ((fr < 0.0) == (flo < 0.0)) {
          lo = r;
          flo = fr;
        } else {
          hi = r;
        }
        next = 0.5 * (lo + hi);
      }
      const double step = std::abs(next - r);
      r = next;
      if (std::abs(residual(r)) <= 1e-14 * scale || step <= 4e-16 * r) break;
    }
    return r;
  };

  std::vector<double> roots;
  for (const auto& [lo, hi] : brackets) roots.push_back(refine(lo, hi));

  const double r0 = roots.front();
  const PotentialDerivatives d = derivatives_at(spec, r0, 2);
  const double a = 2.0 - 2.0 * (2 * qn.n + 1) * std::sqrt(alpha0_at(d));
  ShiftedFrame frame = build_frame(spec, qn, r0, a, order);
  frame.candidate_r0 = roots;
  if (roots.size() > 1) {
    std::string msg = "shift equation has " + std::to_string(roots.size()) + " roots; using the smallest. candidates:";
    for (double r : roots) msg += " " + fmt(r);
    frame.warnings.push_back(msg);
  }
  return frame;
}

FrameResiduals frame_residuals(const PotentialSpec& spec, const ShiftedFrame& frame) {
  FrameResiduals res;
  const double L2 = frame.Lambda * frame.Lambda;
  res.minimum_condition = (L2 - 2.0 * std::pow(frame.r0, 3) * frame.dV0) / L2;
  const double scale = frame.Lambda;
  res.shift_condition = shift_equation_residual(spec, frame.qn, frame.r0) / scale;
  res.epsilon0_nulling = frame.coeffs.betas[0] + (2 * frame.qn.n + 1) * frame.gamma;
  return res;
}

AimInputs build_s0_lambda0(const ShiftedFrame& frame, int order) {
  if (order < 0) throw Error(ErrorCode::Usage, "order must be non-negative");
  if (order > frame.order) {
    throw Error(ErrorCode::Usage, "frame holds coefficients through order " + std::to_string(frame.order));
  }
  const auto& c = frame.coeffs;

  GSeries lambda0 = GSeries::constant(XPoly::monomial(2.0L * frame.gamma, 1), order);

  GSeries s0(order);
  s0.term(0) = XPoly::constant(static_cast<Real>(c.betas[0]) + static_cast<Real>(frame.gamma));
  for (int i = 1; i <= order; ++i) {
    s0.term(i) += XPoly::monomial(c.alphas[i], static_cast<std::size_t>(i) + 2);
    s0.term(i) += XPoly::monomial(c.betas[i], static_cast<std::size_t>(i));
  }
  for (int i = 0; i + 2 <= order; ++i) s0.term(i + 2) += XPoly::monomial(c.xis[i], static_cast<std::size_t>(i));
  return {std::move(lambda0), std::move(s0)};
}

}  // namespace slnt
