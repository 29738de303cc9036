#include "slnt/series.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "slnt/errors.hpp"

namespace slnt {

// ---------------------------------------------------------------------------
// XPoly

XPoly::XPoly(std::vector<Real> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

XPoly::XPoly(std::initializer_list<Real> coeffs) : coeffs_(coeffs) { trim(); }

XPoly XPoly::constant(Real c) { return XPoly(std::vector<Real>{c}); }

XPoly XPoly::monomial(Real c, std::size_t power) {
  std::vector<Real> v(power + 1, Real{0});
  v[power] = c;
  return XPoly(std::move(v));
}

void XPoly::trim() noexcept {
  while (!coeffs_.empty() && coeffs_.back() == Real{0}) coeffs_.pop_back();
}

Real XPoly::operator()(Real x) const noexcept {
  Real acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

XPoly& XPoly::operator+=(const XPoly& rhs) {
  if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), Real{0});
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  trim();
  return *this;
}

XPoly& XPoly::operator-=(const XPoly& rhs) {
  if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), Real{0});
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
  trim();
  return *this;
}

XPoly& XPoly::operator*=(Real s) {
  for (auto& c : coeffs_) c *= s;
  trim();
  return *this;
}

XPoly operator+(XPoly lhs, const XPoly& rhs) { return lhs += rhs; }
XPoly operator-(XPoly lhs, const XPoly& rhs) { return lhs -= rhs; }
XPoly operator-(XPoly p) { return p *= Real{-1}; }
XPoly operator*(XPoly p, Real s) { return p *= s; }
XPoly operator*(Real s, XPoly p) { return p *= s; }
XPoly operator*(const XPoly& p, const XPoly& q) { return xpoly_mul(p, q); }

XPoly xpoly_mul(const XPoly& p, const XPoly& q) {
  if (p.is_zero() || q.is_zero()) return {};
  const auto a = p.coeffs();
  const auto b = q.coeffs();
  std::vector<Real> out(a.size() + b.size() - 1, Real{0});
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Real ai = a[i];
    if (ai == Real{0}) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += ai * b[j];
  }
  return XPoly(std::move(out));
}

XPoly xpoly_diff(const XPoly& p) {
  const auto a = p.coeffs();
  if (a.size() <= 1) return {};
  std::vector<Real> out(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) out[i - 1] = a[i] * static_cast<Real>(i);
  return XPoly(std::move(out));
}

// ---------------------------------------------------------------------------
// GSeries

GSeries::GSeries(int order) : order_(order) {
  if (order < 0) throw Error(ErrorCode::Usage, "GSeries truncation order must be non-negative");
  terms_.resize(static_cast<std::size_t>(order) + 1);
}

GSeries::GSeries(std::vector<XPoly> terms, int order) : GSeries(order) {
  if (terms.size() > terms_.size()) {
    throw Error(ErrorCode::Usage, "GSeries given " + std::to_string(terms.size()) +
                                      " terms for truncation order " + std::to_string(order));
  }
  std::move(terms.begin(), terms.end(), terms_.begin());
}

GSeries GSeries::identity(int order) { return constant(XPoly::constant(1), order); }

GSeries GSeries::constant(const XPoly& p, int order) {
  GSeries s(order);
  s.terms_[0] = p;
  return s;
}

int GSeries::max_degree() const noexcept {
  int d = -1;
  for (const auto& t : terms_) d = std::max(d, t.degree());
  return d;
}

GSeries GSeries::truncated(int new_order) const {
  if (new_order < 0 || new_order > order_) {
    throw Error(ErrorCode::Usage, "cannot truncate order " + std::to_string(order_) + " series to " +
                                      std::to_string(new_order));
  }
  return GSeries(std::vector<XPoly>(terms_.begin(), terms_.begin() + new_order + 1), new_order);
}

std::vector<Real> GSeries::evaluate(Real x) const {
  std::vector<Real> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back(t(x));
  return out;
}

GSeries& GSeries::operator+=(const GSeries& rhs) {
  if (rhs.order_ != order_) throw Error(ErrorCode::Usage, "GSeries truncation orders differ");
  for (std::size_t j = 0; j < terms_.size(); ++j) terms_[j] += rhs.terms_[j];
  return *this;
}

GSeries& GSeries::operator-=(const GSeries& rhs) {
  if (rhs.order_ != order_) throw Error(ErrorCode::Usage, "GSeries truncation orders differ");
  for (std::size_t j = 0; j < terms_.size(); ++j) terms_[j] -= rhs.terms_[j];
  return *this;
}

GSeries operator+(GSeries lhs, const GSeries& rhs) { return lhs += rhs; }
GSeries operator-(GSeries lhs, const GSeries& rhs) { return lhs -= rhs; }
GSeries operator*(const GSeries& a, const GSeries& b) { return gseries_mul(a, b); }

GSeries gseries_mul(const GSeries& a, const GSeries& b) {
  if (a.order() != b.order()) {
    throw Error(ErrorCode::Usage, "gseries_mul: truncation orders " + std::to_string(a.order()) + " and " +
                                      std::to_string(b.order()) + " differ");
  }
  const int J = a.order();
  GSeries out(J);
  for (int i = 0; i <= J; ++i) {
    if (a[i].is_zero()) continue;
    for (int j = 0; i + j <= J; ++j) {
      if (b[j].is_zero()) continue;
      out.term(i + j) += xpoly_mul(a[i], b[j]);
    }
  }
  return out;
}

GSeries gseries_diff(const GSeries& a) {
  GSeries out(a.order());
  for (int j = 0; j <= a.order(); ++j) out.term(j) = xpoly_diff(a[j]);
  return out;
}

// ---------------------------------------------------------------------------
// TaylorJet

TaylorJet::TaylorJet(double center, std::vector<double> coeffs) : center_(center), coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw Error(ErrorCode::Usage, "TaylorJet needs at least one coefficient");
}

TaylorJet TaylorJet::constant(double center, double value, int order) {
  std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
  c[0] = value;
  return TaylorJet(center, std::move(c));
}

TaylorJet TaylorJet::variable(double center, int order) {
  std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
  c[0] = center;
  if (order >= 1) c[1] = 1.0;
  return TaylorJet(center, std::move(c));
}

double TaylorJet::derivative(int k) const {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return coeffs_.at(static_cast<std::size_t>(k)) * f;
}

TaylorJet TaylorJet::recentered(double h) const {
  // d_k = sum_{m>=k} c_m C(m,k) h^(m-k)
  const std::size_t n = coeffs_.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double binom = 1.0;  // C(m, k) starting at m = k
    double hp = 1.0;
    double acc = 0.0;
    for (std::size_t m = k; m < n; ++m) {
      acc += coeffs_[m] * binom * hp;
      binom = binom * static_cast<double>(m + 1) / static_cast<double>(m + 1 - k);
      hp *= h;
    }
    out[k] = acc;
  }
  return TaylorJet(center_ + h, std::move(out));
}

void TaylorJet::check_compatible(const TaylorJet& rhs) const {
  if (rhs.center_ != center_) throw Error(ErrorCode::Usage, "TaylorJet centers differ");
  if (rhs.coeffs_.size() != coeffs_.size()) throw Error(ErrorCode::Usage, "TaylorJet orders differ");
}

TaylorJet& TaylorJet::operator+=(const TaylorJet& rhs) {
  check_compatible(rhs);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += rhs.coeffs_[k];
  return *this;
}

TaylorJet& TaylorJet::operator-=(const TaylorJet& rhs) {
  check_compatible(rhs);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= rhs.coeffs_[k];
  return *this;
}

TaylorJet& TaylorJet::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

TaylorJet operator+(TaylorJet lhs, const TaylorJet& rhs) { return lhs += rhs; }
TaylorJet operator-(TaylorJet lhs, const TaylorJet& rhs) { return lhs -= rhs; }
TaylorJet operator-(TaylorJet u) { return u *= -1.0; }
TaylorJet operator*(TaylorJet u, double s) { return u *= s; }
TaylorJet operator*(double s, TaylorJet u) { return u *= s; }
TaylorJet operator*(const TaylorJet& u, const TaylorJet& v) { return jet_mul(u, v); }
TaylorJet operator/(const TaylorJet& u, const TaylorJet& v) { return jet_div(u, v); }

TaylorJet jet_mul(const TaylorJet& u, const TaylorJet& v) {
  if (u.center() != v.center()) throw Error(ErrorCode::Usage, "TaylorJet centers differ");
  if (u.order() != v.order()) throw Error(ErrorCode::Usage, "TaylorJet orders differ");
  const auto a = u.coeffs();
  const auto b = v.coeffs();
  std::vector<double> w(a.size(), 0.0);
  for (std::size_t k = 0; k < w.size(); ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i <= k; ++i) acc += a[i] * b[k - i];
    w[k] = acc;
  }
  return TaylorJet(u.center(), std::move(w));
}

TaylorJet jet_div(const TaylorJet& u, const TaylorJet& v) {
  if (u.center() != v.center()) throw Error(ErrorCode::Usage, "TaylorJet centers differ");
  if (u.order() != v.order()) throw Error(ErrorCode::Usage, "TaylorJet orders differ");
  const auto a = u.coeffs();
  const auto b = v.coeffs();
  if (b[0] == 0.0 || !std::isfinite(b[0])) {
    throw Error(ErrorCode::Domain, "division by a function that vanishes at r = " + std::to_string(u.center()));
  }
  // u = v w  =>  w_k = (u_k - sum_{i=1..k} v_i w_{k-i}) / v_0
  std::vector<double> w(a.size(), 0.0);
  for (std::size_t k = 0; k < w.size(); ++k) {
    double acc = a[k];
    for (std::size_t i = 1; i <= k; ++i) acc -= b[i] * w[k - i];
    w[k] = acc / b[0];
  }
  return TaylorJet(u.center(), std::move(w));
}

TaylorJet jet_pow(const TaylorJet& u, int exponent) {
  TaylorJet result = TaylorJet::constant(u.center(), 1.0, u.order());
  if (exponent == 0) return result;
  TaylorJet base = u;
  unsigned e = static_cast<unsigned>(exponent < 0 ? -static_cast<long>(exponent) : exponent);
  while (e != 0) {
    if (e & 1u) result = jet_mul(result, base);
    e >>= 1u;
    if (e != 0) base = jet_mul(base, base);
  }
  if (exponent < 0) return jet_div(TaylorJet::constant(u.center(), 1.0, u.order()), result);
  return result;
}

}  // namespace slnt
