#pragma once

#include <Eigen/Dense>

#include "pdmg/grid.hpp"

namespace pdmg {

// Dense assembly of A + lambda*I on the interior nodes of `g`, same row-major
// ordering as GridFunction.  Intended for coarse grids and oracles; guarded
// against accidental use on large grids.
Eigen::MatrixXcd dense_shifted_operator(const Grid2D& g, const Shift& shift);

// Dense assembly of the additive patch preconditioner
//   M = sum_i R_i^T W_i L_i^{-1} R_i,   W_i = (1/4) I,
// where i ranges over all 2x2 cell patches of the grid (including those
// touching the boundary; rows/columns for boundary nodes are simply absent)
// and L_i is the 4x4 restriction of A + lambda*I to the patch with the
// standard h^2-scaled coupling.  This is the definition-level construction
// used to validate the closed-form stencil.
Eigen::MatrixXcd dense_vanka_preconditioner(const Grid2D& g, const Shift& shift);

// The 4x4 patch matrix L_i = (1/h^2) ((4+eta) I - C) with C the adjacency
// matrix of the 4-cycle (patch nodes ordered SW, SE, NW, NE).
Eigen::Matrix4cd vanka_patch_matrix(cplx eta, double h);

// Dense LU direct solver for A + lambda*I on a fixed grid.  The factorization
// happens once at construction; singularity is detected there (smallest |U_ii|
// below 1e-14 times the Frobenius norm of the matrix) and reported by
// singular(); solve() throws SingularOperatorError in that case.
class DenseShiftedSolver {
 public:
  DenseShiftedSolver(Grid2D g, const Shift& shift);

  bool singular() const { return singular_; }
  const Grid2D& grid() const { return grid_; }

  GridFunction solve(const GridFunction& b) const;

 private:
  Grid2D grid_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
  bool singular_ = false;
};

// One-shot convenience wrapper: assemble, factor, check, solve.
GridFunction coarse_direct_solve(const GridFunction& b, const Shift& shift);

}  // namespace pdmg
