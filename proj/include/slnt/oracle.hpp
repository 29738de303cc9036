#pragma once

#include <vector>

#include "slnt/frame.hpp"
#include "slnt/potential.hpp"

namespace slnt {

/// Uniform grid on (0, r_max] with Dirichlet ends; h = r_max / points.
struct GridSpec {
  double r_max = 12.0;
  int points = 6000;
  bool extrapolate = true;  // Richardson on h and h/2
};

/// Symmetric tridiagonal matrix: diag has m entries, off has m-1.
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;
};

/// -d2/dr2 + k(k+1)/r^2 + V(r), k = ell + (N-3)/2, on the interior points
/// r_i = i h, i = 1..points-1. Throws Domain if V is not finite there.
Tridiagonal build_radial_operator(const PotentialSpec& spec, const QuantumNumbers& qn, double r_max, int points);

/// Number of eigenvalues strictly below lambda.
int sturm_count(const Tridiagonal& t, double lambda);

/// index-th smallest eigenvalue (0-based) by bisection to abs_tol.
double kth_eigenvalue(const Tridiagonal& t, int index, double abs_tol = 1e-12);

/// Normalised eigenvector for an eigenvalue, by inverse iteration.
std::vector<double> eigenvector(const Tridiagonal& t, double lambda);

/// Sign changes of the vector, ignoring exact zeros.
int node_count(const std::vector<double>& v);

struct OracleResult {
  double energy = 0.0;  // extrapolated when requested, else the coarse value
  double coarse = 0.0;  // spacing h
  double fine = 0.0;    // spacing h/2 (equal to coarse when not extrapolating)
  bool accuracy_warning = false;  // |coarse - fine| > 1e-4
};

OracleResult fd_eigenvalue_detail(const PotentialSpec& spec, const QuantumNumbers& qn, const GridSpec& grid);
double fd_eigenvalue(const PotentialSpec& spec, const QuantumNumbers& qn, const GridSpec& grid);

}  // namespace slnt
