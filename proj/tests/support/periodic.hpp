#pragma once

// Periodic test harness: applies a 9-point stencil with wrap-around coupling
// on an n x n torus grid.  Complex exponentials e^{i(theta1 x + theta2 y)/h}
// with on-grid frequencies theta = 2 pi k / n are exact eigenvectors of any
// such stencil, with eigenvalue equal to the stencil's Fourier symbol.  This
// gives an independent consistency check between the production stencils and
// the analysis-side symbol formulas (the production Dirichlet code shares the
// stencil weights, not the application loop).

#include <complex>
#include <vector>

#include "pdmg/grid.hpp"

namespace pdmg::testing {

struct PeriodicField {
  int n = 0;
  std::vector<cplx> v;  // row-major, x fastest, indices 0..n-1

  explicit PeriodicField(int size) : n(size), v(static_cast<size_t>(size) * size) {}
  cplx& at(int i, int j) {
    return v[static_cast<size_t>((j % n + n) % n) * n + static_cast<size_t>((i % n + n) % n)];
  }
  const cplx& at(int i, int j) const {
    return v[static_cast<size_t>((j % n + n) % n) * n + static_cast<size_t>((i % n + n) % n)];
  }
};

inline PeriodicField periodic_exponential(int n, double theta1, double theta2) {
  PeriodicField f(n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      f.at(i, j) = std::exp(cplx(0.0, theta1 * i + theta2 * j));
  return f;
}

inline PeriodicField apply_stencil_periodic(const Stencil3x3& s, const PeriodicField& u) {
  PeriodicField out(u.n);
  for (int j = 0; j < u.n; ++j) {
    for (int i = 0; i < u.n; ++i) {
      cplx acc(0.0, 0.0);
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) acc += s.w[dj + 1][di + 1] * u.at(i + di, j + dj);
      out.at(i, j) = s.scale * acc;
    }
  }
  return out;
}

// Max relative deviation of (stencil applied to the exponential) from
// (symbol * exponential).
inline double symbol_mismatch(const Stencil3x3& s, int n, double theta1, double theta2,
                              cplx symbol) {
  const PeriodicField u = periodic_exponential(n, theta1, theta2);
  const PeriodicField lu = apply_stencil_periodic(s, u);
  double worst = 0.0;
  const double scale = std::max(1.0, std::abs(symbol));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      worst = std::max(worst, std::abs(lu.at(i, j) - symbol * u.at(i, j)) / scale);
  return worst;
}

}  // namespace pdmg::testing
