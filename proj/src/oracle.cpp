#include "slnt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "slnt/errors.hpp"

namespace slnt {

Tridiagonal build_radial_operator(const PotentialSpec& spec, const QuantumNumbers& qn, double r_max, int points) {
  qn.validate();
  if (!(r_max > 0.0) || !std::isfinite(r_max)) throw Error(ErrorCode::Config, "oracle r_max must be positive");
  if (points < 100) throw Error(ErrorCode::Config, "oracle grid needs at least 100 points");
  const double h = r_max / points;
  const double kk = qn.ell + (qn.dim - 3) / 2.0;
  const double centrifugal = kk * (kk + 1.0);
  const auto m = static_cast<std::size_t>(points - 1);
  Tridiagonal t;
  t.diag.resize(m);
  t.off.assign(m - 1, -1.0 / (h * h));
  for (std::size_t i = 0; i < m; ++i) {
    const double r = static_cast<double>(i + 1) * h;
    double v = 0.0;
    try {
      v = spec.value(r);
    } catch (const Error&) {
      throw Error(ErrorCode::Domain, "potential is not finite on the oracle grid at r = " + std::to_string(r));
    }
    t.diag[i] = 2.0 / (h * h) + centrifugal / (r * r) + v;
  }
  return t;
}

int sturm_count(const Tridiagonal& t, double lambda) {
  // Pivots of the LDL^T factorisation of T - lambda I; negatives count eigenvalues below lambda.
  int count = 0;
  double d = 1.0;
  const double tiny = std::numeric_limits<double>::min();
  for (std::size_t i = 0; i < t.diag.size(); ++i) {
    const double e2 = i == 0 ? 0.0 : t.off[i - 1] * t.off[i - 1];
    d = (t.diag[i] - lambda) - (i == 0 ? 0.0 : e2 / d);
    if (d == 0.0) d = -tiny;
    if (d < 0.0) ++count;
  }
  return count;
}

namespace {

std::pair<double, double> gershgorin(const Tridiagonal& t) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  const std::size_t m = t.diag.size();
  for (std::size_t i = 0; i < m; ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::abs(t.off[i - 1]);
    if (i + 1 < m) radius += std::abs(t.off[i]);
    lo = std::min(lo, t.diag[i] - radius);
    hi = std::max(hi, t.diag[i] + radius);
  }
  return {lo, hi};
}

}  // namespace

double kth_eigenvalue(const Tridiagonal& t, int index, double abs_tol) {
  if (t.diag.empty()) throw Error(ErrorCode::Usage, "empty operator");
  if (index < 0 || static_cast<std::size_t>(index) >= t.diag.size()) {
    throw Error(ErrorCode::Oracle, "eigenvalue index " + std::to_string(index) + " out of range");
  }
  auto [lo, hi] = gershgorin(t);
  while (hi - lo > abs_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(t, mid) > index) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> eigenvector(const Tridiagonal& t, double lambda) {
  const std::size_t m = t.diag.size();
  // Small offset keeps (T - mu I) nonsingular while staying close to lambda.
  const double mu = lambda + 1e-10 * std::max(1.0, std::abs(lambda));
  std::vector<double> v(m, 1.0);
  std::vector<double> c(m), d(m);
  for (int iter = 0; iter < 3; ++iter) {
    // Thomas algorithm on (T - mu I) y = v.
    double denom = t.diag[0] - mu;
    c[0] = m > 1 ? t.off[0] / denom : 0.0;
    d[0] = v[0] / denom;
    for (std::size_t i = 1; i < m; ++i) {
      denom = (t.diag[i] - mu) - t.off[i - 1] * c[i - 1];
      c[i] = i + 1 < m ? t.off[i] / denom : 0.0;
      d[i] = (v[i] - t.off[i - 1] * d[i - 1]) / denom;
    }
    v[m - 1] = d[m - 1];
    for (std::size_t i = m - 1; i-- > 0;) v[i] = d[i] - c[i] * v[i + 1];
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (!(norm > 0.0) || !std::isfinite(norm)) throw Error(ErrorCode::Oracle, "inverse iteration broke down");
    for (double& x : v) x /= norm;
  }
  return v;
}

int node_count(const std::vector<double>& v) {
  // Ignore the numerically zero tail where the bound state has decayed away.
  double peak = 0.0;
  for (double x : v) peak = std::max(peak, std::abs(x));
  const double floor = 1e-8 * peak;
  int nodes = 0;
  int last_sign = 0;
  for (double x : v) {
    if (std::abs(x) <= floor) continue;
    const int s = x > 0 ? 1 : -1;
    if (last_sign != 0 && s != last_sign) ++nodes;
    last_sign = s;
  }
  return nodes;
}

OracleResult fd_eigenvalue_detail(const PotentialSpec& spec, const QuantumNumbers& qn, const GridSpec& grid) {
  OracleResult out;
  out.coarse = kth_eigenvalue(build_radial_operator(spec, qn, grid.r_max, grid.points), qn.n);
  if (!grid.extrapolate) {
    out.fine = out.coarse;
    out.energy = out.coarse;
    return out;
  }
  out.fine = kth_eigenvalue(build_radial_operator(spec, qn, grid.r_max, 2 * grid.points), qn.n);
  out.energy = (4.0 * out.fine - out.coarse) / 3.0;
  out.accuracy_warning = std::abs(out.coarse - out.fine) > 1e-4;
  return out;
}

double fd_eigenvalue(const PotentialSpec& spec, const QuantumNumbers& qn, const GridSpec& grid) {
  return fd_eigenvalue_detail(spec, qn, grid).energy;
}

}  // namespace slnt
