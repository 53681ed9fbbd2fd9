#pragma once

#include "pdmg/grid.hpp"

namespace pdmg {

// Coefficients of the additive overlapping-patch (Vanka-type) preconditioner
// M for the shifted Laplacian, as functions of eta = lambda h^2.  In the grid
// interior M acts as the 9-point stencil
//   (h^2/4) * [[c, 2b, c], [2b, 4a, 2b], [c, 2b, c]].
struct VankaCoeffs {
  cplx a, b, c;
};

// a = (1/4)(1/(2+eta) + 2/(4+eta) + 1/(6+eta))
// b = (1/4)(1/(2+eta) - 1/(6+eta))
// c = (1/4)(1/(2+eta) - 2/(4+eta) + 1/(6+eta))
// Throws SingularOperatorError if eta makes any patch eigenvalue (2+eta,
// 4+eta, 6+eta) vanish to within 1e-12.
VankaCoeffs vanka_coeffs(cplx eta);

// The assembled 9-point stencil of M (scale = h^2/4, weights [[c,2b,c],
// [2b,4a,2b],[c,2b,c]]).
Stencil3x3 vanka_stencil(const Shift& shift, double h);

// Diagonal (Jacobi) preconditioner weight: M = w*I with w = h^2/(4+eta).
// Throws SingularOperatorError if |4+eta| <= 1e-12.
cplx jacobi_weight(cplx eta, double h);

enum class SmootherKind { Vanka, Jacobi };

struct SmootherConfig {
  SmootherKind kind = SmootherKind::Vanka;
  double omega = 24.0 / 25.0;

  static SmootherConfig vanka(double w = 24.0 / 25.0) { return {SmootherKind::Vanka, w}; }
  static SmootherConfig jacobi(double w = 4.0 / 5.0) { return {SmootherKind::Jacobi, w}; }
};

// One damped preconditioned-Richardson sweep:
//   u_out = u + omega * M (b - (A + lambda I) u).
GridFunction apply_smoother(const GridFunction& u, const GridFunction& b, const Shift& shift,
                            const SmootherConfig& cfg);

}  // namespace pdmg
