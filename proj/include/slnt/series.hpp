#pragma once

// Truncated polynomial algebra used by the AIM recursion:
//   XPoly    - dense polynomial in the shifted coordinate x
//   GSeries  - power series in g truncated at order J, with XPoly coefficients
//   TaylorJet - truncated Taylor expansion of a function of r about a center

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace slnt {

// Coefficient field for the (x, g) recursion. Coefficients grow roughly like
// k! and the termination condition is a near-cancellation, so the extra bits
// of the x87 format are needed to keep high orders stable in k.
using Real = long double;

class XPoly {
 public:
  XPoly() = default;
  explicit XPoly(std::vector<Real> coeffs);
  XPoly(std::initializer_list<Real> coeffs);

  static XPoly constant(Real c);
  static XPoly monomial(Real c, std::size_t power);

  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  std::span<const Real> coeffs() const noexcept { return coeffs_; }

  /// Coefficient of x^i; zero beyond the degree.
  Real operator[](std::size_t i) const noexcept { return i < coeffs_.size() ? coeffs_[i] : Real{0}; }

  Real operator()(Real x) const noexcept;

  XPoly& operator+=(const XPoly& rhs);
  XPoly& operator-=(const XPoly& rhs);
  XPoly& operator*=(Real s);

  friend bool operator==(const XPoly&, const XPoly&) = default;

 private:
  void trim() noexcept;

  std::vector<Real> coeffs_;
};

XPoly operator+(XPoly lhs, const XPoly& rhs);
XPoly operator-(XPoly lhs, const XPoly& rhs);
XPoly operator-(XPoly p);
XPoly operator*(XPoly p, Real s);
XPoly operator*(Real s, XPoly p);
XPoly operator*(const XPoly& p, const XPoly& q);

XPoly xpoly_mul(const XPoly& p, const XPoly& q);
XPoly xpoly_diff(const XPoly& p);

/// Power series in g with polynomial-in-x coefficients, reduced mod g^(J+1).
/// Always stores exactly J+1 terms.
class GSeries {
 public:
  explicit GSeries(int order = 0);
  GSeries(std::vector<XPoly> terms, int order);

  static GSeries identity(int order);
  static GSeries constant(const XPoly& p, int order);

  int order() const noexcept { return order_; }
  const XPoly& operator[](int j) const { return terms_.at(static_cast<std::size_t>(j)); }
  XPoly& term(int j) { return terms_.at(static_cast<std::size_t>(j)); }
  std::span<const XPoly> terms() const noexcept { return terms_; }

  /// Largest x-degree over all g-coefficients (-1 when zero).
  int max_degree() const noexcept;

  /// Drops powers of g above new_order (new_order <= order()).
  GSeries truncated(int new_order) const;

  /// Value of each g-coefficient at x.
  std::vector<Real> evaluate(Real x) const;

  GSeries& operator+=(const GSeries& rhs);
  GSeries& operator-=(const GSeries& rhs);

  friend bool operator==(const GSeries&, const GSeries&) = default;

 private:
  int order_;
  std::vector<XPoly> terms_;
};

GSeries operator+(GSeries lhs, const GSeries& rhs);
GSeries operator-(GSeries lhs, const GSeries& rhs);
GSeries operator*(const GSeries& a, const GSeries& b);

/// Cauchy product truncated at the common order. Throws Usage on mismatch.
GSeries gseries_mul(const GSeries& a, const GSeries& b);
/// Term-wise d/dx.
GSeries gseries_diff(const GSeries& a);

/// c_k = f^(k)(center)/k!, k = 0..order.
class TaylorJet {
 public:
  TaylorJet(double center, std::vector<double> coeffs);

  static TaylorJet constant(double center, double value, int order);
  /// The identity function r at the given center.
  static TaylorJet variable(double center, int order);

  double center() const noexcept { return center_; }
  int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  double operator[](std::size_t k) const { return coeffs_.at(k); }

  /// k-th derivative at the center, c_k * k!.
  double derivative(int k) const;

  /// Re-expands about center + h, keeping the same order.
  TaylorJet recentered(double h) const;

  TaylorJet& operator+=(const TaylorJet& rhs);
  TaylorJet& operator-=(const TaylorJet& rhs);
  TaylorJet& operator*=(double s);

 private:
  void check_compatible(const TaylorJet& rhs) const;

  double center_;
  std::vector<double> coeffs_;
};

TaylorJet operator+(TaylorJet lhs, const TaylorJet& rhs);
TaylorJet operator-(TaylorJet lhs, const TaylorJet& rhs);
TaylorJet operator-(TaylorJet u);
TaylorJet operator*(TaylorJet u, double s);
TaylorJet operator*(double s, TaylorJet u);
TaylorJet operator*(const TaylorJet& u, const TaylorJet& v);
TaylorJet operator/(const TaylorJet& u, const TaylorJet& v);

TaylorJet jet_mul(const TaylorJet& u, const TaylorJet& v);
/// Throws Domain when v has a zero constant term (pole at the center).
TaylorJet jet_div(const TaylorJet& u, const TaylorJet& v);
/// Integer power; negative exponents go through jet_div.
TaylorJet jet_pow(const TaylorJet& u, int exponent);

}  // namespace slnt
