#pragma once

// Central finite differences with Richardson extrapolation, carried out in
// binary128 so that eighth derivatives survive the 1/h^k cancellation.

#include <vector>

namespace slnt::testing {

using Quad = __float128;

template <typename F>
Quad central_difference(const F& f, Quad x, int k, Quad h) {
  Quad acc = 0;
  Quad binom = 1;
  Quad hk = 1;
  for (int i = 0; i < k; ++i) hk *= h;
  for (int i = 0; i <= k; ++i) {
    const Quad offset = (Quad(k) / 2 - i) * h;
    acc += (i % 2 ? -binom : binom) * f(x + offset);
    binom = binom * (k - i) / (i + 1);
  }
  return acc / hk;
}

/// k-th derivative of f at x; the error of the central stencil is a series
/// in h^2, eliminated level by level on h0, h0/2, ...
template <typename F>
double fd_derivative(const F& f, double x, int k, double h0 = 0.4, int levels = 7) {
  std::vector<std::vector<Quad>> t(static_cast<std::size_t>(levels));
  Quad h = h0;
  for (int i = 0; i < levels; ++i, h /= 2) {
    auto& row = t[static_cast<std::size_t>(i)];
    row.push_back(central_difference(f, Quad(x), k, h));
    Quad four = 4;
    for (int m = 1; m <= i; ++m, four *= 4) {
      const auto& prev = t[static_cast<std::size_t>(i - 1)];
      row.push_back((four * row[static_cast<std::size_t>(m - 1)] - prev[static_cast<std::size_t>(m - 1)]) / (four - 1));
    }
  }
  return static_cast<double>(t.back().back());
}

}  // namespace slnt::testing
