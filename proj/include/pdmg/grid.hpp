#pragma once

#include <array>
#include <complex>
#include <vector>

#include "pdmg/errors.hpp"

namespace pdmg {

using cplx = std::complex<double>;

// Uniform vertex-centered grid on the unit square with homogeneous Dirichlet
// boundary.  `n` is the number of subdivisions per side, so the mesh width is
// h = 1/n and there are (n-1)^2 interior nodes.
struct Grid2D {
  int n = 0;

  Grid2D() = default;
  explicit Grid2D(int subdivisions) : n(subdivisions) {
    if (n < 2) throw ConfigError("Grid2D: need at least 2 subdivisions per side, got " + std::to_string(n));
  }

  double h() const { return 1.0 / n; }
  int interior_per_side() const { return n - 1; }
  long size() const { return static_cast<long>(n - 1) * (n - 1); }

  bool coarsenable() const { return n % 2 == 0 && n >= 4; }
  Grid2D coarse() const {
    if (!coarsenable())
      throw ConfigError("Grid2D: cannot coarsen grid with n = " + std::to_string(n));
    return Grid2D(n / 2);
  }

  bool operator==(const Grid2D&) const = default;
};

// A complex shift lambda applied to the negative Laplacian: the operator of
// interest is A + lambda*I with A the 5-point finite-difference Laplacian.
// `index` and `kind` tag where the shift came from (useful in sweep output);
// they do not affect the operator.
enum class ShiftKind { User, TimeEigenvalue, Helmholtz };

struct Shift {
  cplx lambda{0.0, 0.0};
  int index = 0;
  ShiftKind kind = ShiftKind::User;

  // Nondimensional shift eta = lambda * h^2, the quantity every stencil
  // coefficient actually depends on.
  cplx eta(double h) const { return lambda * (h * h); }
};

// Complex-valued function on the interior nodes of a Grid2D, row-major with
// the x index fastest.  Accessors use 1-based interior indices (i, j) with
// 1 <= i, j <= n-1; the physical node is (i*h, j*h).
class GridFunction {
 public:
  GridFunction() = default;
  explicit GridFunction(Grid2D g) : grid_(g), v_(static_cast<size_t>(g.size()), cplx(0.0, 0.0)) {}

  const Grid2D& grid() const { return grid_; }
  long size() const { return static_cast<long>(v_.size()); }

  cplx& operator()(int i, int j) { return v_[idx(i, j)]; }
  const cplx& operator()(int i, int j) const { return v_[idx(i, j)]; }

  cplx* data() { return v_.data(); }
  const cplx* data() const { return v_.data(); }

  // Pointer p such that p[i] addresses node (i, j) for 1 <= i <= n-1.
  cplx* row(int j) { return v_.data() + static_cast<size_t>(j - 1) * (grid_.n - 1) - 1; }
  const cplx* row(int j) const { return v_.data() + static_cast<size_t>(j - 1) * (grid_.n - 1) - 1; }

  void fill(cplx value) { std::fill(v_.begin(), v_.end(), value); }

  // Discrete 2-norm (plain Euclidean norm of the coefficient vector).
  double norm() const;

  GridFunction& operator+=(const GridFunction& o);
  GridFunction& operator-=(const GridFunction& o);
  GridFunction& operator*=(cplx s);

 private:
  size_t idx(int i, int j) const {
    return static_cast<size_t>(j - 1) * (grid_.n - 1) + static_cast<size_t>(i - 1);
  }

  Grid2D grid_{};
  std::vector<cplx> v_;
};

// Compact 9-point stencil.  Entry w[dj+1][di+1] multiplies u(i+di, j+dj); the
// whole sum is scaled by `scale`.  Values outside the interior are zero
// (homogeneous Dirichlet).
struct Stencil3x3 {
  std::array<std::array<cplx, 3>, 3> w{};
  double scale = 1.0;
};

// out(i,j) = scale * sum_{di,dj} w[dj+1][di+1] * u(i+di, j+dj), Dirichlet-zero
// outside the interior.
GridFunction apply_stencil(const Stencil3x3& s, const GridFunction& u);

// Stencil of A + lambda*I: (1/h^2) * [[0,-1,0],[-1,4+eta,-1],[0,-1,0]] with
// eta = lambda h^2.
Stencil3x3 shifted_laplacian_stencil(const Shift& shift, double h);

// Matrix-free application of A + lambda*I (specialized 5-point kernel).
GridFunction apply_shifted_laplacian(const GridFunction& u, const Shift& shift);

// r = b - (A + lambda*I) u.
GridFunction residual(const GridFunction& b, const GridFunction& u, const Shift& shift);

// Full-weighting restriction to the next coarser grid (fine n must be even):
// coarse node (I,J) receives the 9-point average with weights
// (1/16) [[1,2,1],[2,4,2],[1,2,1]] of fine nodes around (2I, 2J).
GridFunction restrict_full_weighting(const GridFunction& fine);

// Bilinear prolongation to the 2x-refined grid: coincident nodes copy, edge
// nodes average 2 coarse neighbors, cell-center nodes average 4.  Coarse
// values outside the interior are zero (Dirichlet).
GridFunction prolong_bilinear(const GridFunction& coarse);

}  // namespace pdmg
