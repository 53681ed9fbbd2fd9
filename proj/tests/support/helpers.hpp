#pragma once

// Shared helpers for the test suites: deterministic random data, small dense
// oracles, and discrete eigenfunctions of the 5-point Laplacian.

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "pdmg/dense.hpp"
#include "pdmg/grid.hpp"

namespace pdmg::testing {

inline GridFunction random_grid_function(const Grid2D& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  GridFunction u(g);
  cplx* d = u.data();
  for (long k = 0; k < u.size(); ++k) {
    const double re = dist(rng);
    const double im = dist(rng);
    d[k] = cplx(re, im);
  }
  return u;
}

// Bilinear (transpose, not conjugate-transpose) pairing sum_k u_k v_k.
inline cplx dot_bilinear(const GridFunction& u, const GridFunction& v) {
  cplx s(0.0, 0.0);
  const cplx* ud = u.data();
  const cplx* vd = v.data();
  for (long k = 0; k < u.size(); ++k) s += ud[k] * vd[k];
  return s;
}

// Samples of sin(p pi x) sin(q pi y): a discrete eigenfunction of the 5-point
// Laplacian with eigenvalue (4 - 2cos(p pi h) - 2cos(q pi h))/h^2.
inline GridFunction laplacian_eigenfunction(const Grid2D& g, int p, int q) {
  GridFunction u(g);
  const int m = g.interior_per_side();
  const double h = g.h();
  for (int j = 1; j <= m; ++j)
    for (int i = 1; i <= m; ++i)
      u(i, j) = cplx(std::sin(p * std::numbers::pi * i * h) *
                         std::sin(q * std::numbers::pi * j * h),
                     0.0);
  return u;
}

inline double laplacian_eigenvalue(const Grid2D& g, int p, int q) {
  const double h = g.h();
  return (4.0 - 2.0 * std::cos(p * std::numbers::pi * h) - 2.0 * std::cos(q * std::numbers::pi * h)) /
         (h * h);
}

// Dense all-at-once matrix B (x) I + I (x) A for small oracle problems.
inline Eigen::MatrixXcd dense_all_at_once(const Eigen::MatrixXd& B, const Grid2D& g) {
  const long ns = g.size();
  const long nt = B.rows();
  const Eigen::MatrixXcd A = dense_shifted_operator(g, Shift{});
  Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(nt * ns, nt * ns);
  for (long i = 0; i < nt; ++i) {
    K.block(i * ns, i * ns, ns, ns) = A;
    for (long j = 0; j < nt; ++j)
      if (B(i, j) != 0.0)
        K.block(i * ns, j * ns, ns, ns) += B(i, j) * Eigen::MatrixXcd::Identity(ns, ns);
  }
  return K;
}

inline Eigen::VectorXcd stack(const std::vector<GridFunction>& v) {
  const long ns = v.front().size();
  Eigen::VectorXcd out(static_cast<long>(v.size()) * ns);
  for (size_t i = 0; i < v.size(); ++i)
    out.segment(static_cast<long>(i) * ns, ns) =
        Eigen::Map<const Eigen::VectorXcd>(v[i].data(), ns);
  return out;
}

}  // namespace pdmg::testing
