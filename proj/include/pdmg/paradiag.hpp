#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pdmg/grid.hpp"
#include "pdmg/multigrid.hpp"

namespace pdmg {

// Time discretizations whose all-at-once matrices B(tau) are diagonalized to
// decouple the space-time system into independent shifted spatial solves.
enum class TimeSchemeKind {
  HeatBVM,           // boundary-value-method stencil for the heat equation
  BackwardHeatQBV,   // quasi-boundary-value regularization, alpha-circulant in time
};

struct TimeDiscretization {
  TimeSchemeKind kind = TimeSchemeKind::HeatBVM;
  int n = 0;           // number of time steps
  double tau = 0.0;    // time step size
  double beta = 0.01;  // regularization weight (BackwardHeatQBV only)

  // Dimension of B: n for HeatBVM, n+1 for BackwardHeatQBV.
  int dim() const { return kind == TimeSchemeKind::BackwardHeatQBV ? n + 1 : n; }

  void validate() const {
    if (n < 2) throw ConfigError("TimeDiscretization: need n >= 2 time steps");
    if (!(tau > 0.0)) throw ConfigError("TimeDiscretization: tau must be positive");
    if (kind == TimeSchemeKind::BackwardHeatQBV && !(beta > 0.0))
      throw ConfigError("TimeDiscretization: beta must be positive");
  }
};

// Assemble the dense time-stepping matrix B.
//   HeatBVM (n x n): centered differences in the interior,
//     (1/tau) * [ 0 1/2; -1/2 0 1/2; ...; -1 1 ] (last row one-sided).
//   BackwardHeatQBV ((n+1) x (n+1)): backward differences with the
//     regularization coupling corner entry B(0, n) = 1/(beta tau).
Eigen::MatrixXd time_stepping_matrix(const TimeDiscretization& td);

// Eigendecomposition B = V diag(eigenvalues) V^{-1}.  V is kept factored so
// (V^{-1} x I) products are applied by triangular solves; V^{-1} itself is
// only formed on request.
struct TimeDiagonalization {
  Eigen::VectorXcd eigenvalues;
  Eigen::MatrixXcd V;
  Eigen::PartialPivLU<Eigen::MatrixXcd> V_lu;
  double cond_estimate = 0.0;
  bool ill_conditioned = false;  // cond_estimate > 1e12

  Eigen::MatrixXcd inverse() const { return V_lu.inverse(); }
};

// General dense path (any diagonalizable B).
TimeDiagonalization diagonalize_time_matrix(const Eigen::MatrixXd& B);

// Closed-form fast path for BackwardHeatQBV: B = (1/tau)(I - Sigma_alpha)
// with Sigma_alpha the alpha-circulant down-shift, alpha = -1/beta, so the
// eigenvalues are (1 - gamma zeta^{-k})/tau with gamma the principal
// (n+1)-th root of alpha and zeta = exp(2 pi i/(n+1)); the eigenvector matrix
// is a scaled inverse-DFT matrix.
TimeDiagonalization diagonalize_qbv_closed_form(const TimeDiscretization& td);

// The spatial shifts induced by a time discretization: the eigenvalues of B,
// tagged with their position in the eigendecomposition.
std::vector<Shift> time_shifts(const TimeDiagonalization& d);

// Helmholtz-family test shifts lambda_j = -j^2 (1 - 0.5i) for
// j = 1..min(128, floor(1/(2h))).
std::vector<Shift> helmholtz_shifts(double h);

// y_i = sum_j M(i, j) x_j  (the action of M x I on a stacked space-time
// vector, time index slowest).  All grids must match and x.size() == cols(M).
std::vector<GridFunction> kron_time_apply(const Eigen::MatrixXcd& M,
                                          const std::vector<GridFunction>& x);

// Solve (V x I) y = x using the stored LU factors of V.
std::vector<GridFunction> kron_time_solve(const TimeDiagonalization& d,
                                          const std::vector<GridFunction>& x);

// r_i = f_i - sum_j B(i,j) u_j - A u_i  (A unshifted), the residual of the
// all-at-once system (B x I + I x A) u = f, evaluated matrix-free.
std::vector<GridFunction> all_at_once_residual(const Eigen::MatrixXd& B,
                                               const std::vector<GridFunction>& u,
                                               const std::vector<GridFunction>& f);

// (B x I + I x A) u, matrix-free; used to manufacture right-hand sides.
std::vector<GridFunction> all_at_once_apply(const Eigen::MatrixXd& B,
                                            const std::vector<GridFunction>& u);

// Euclidean norm of a stacked space-time vector.
double stacked_norm(const std::vector<GridFunction>& v);

struct ParadiagResult {
  std::vector<GridFunction> u;       // time-slice solutions
  std::vector<Shift> shifts;         // eigenvalue shift handled by slot j
  std::vector<SolveReport> reports;  // per-shift multigrid reports
  bool all_converged = false;
  double time_cond_estimate = 0.0;
  bool time_ill_conditioned = false;
  double relative_residual = 0.0;  // all-at-once residual over ||f||
  double seconds = 0.0;
};

// Diagonalization-based solve of (B x I + I x A) u = f:
//   g = (V^{-1} x I) f,  (A + lambda_j I) w_j = g_j for each eigenvalue,
//   u = (V x I) w.
// Per-shift non-convergence is recorded in the reports, not thrown.  The
// shifted solves are independent and are distributed over `threads` worker
// threads (each writes only its own slots, so results are deterministic).
ParadiagResult paradiag_solve(const std::vector<GridFunction>& f, const TimeDiscretization& td,
                              const MultigridConfig& cfg, int threads = 1);

// Smooth manufactured space-time field u*(x, y, t_i) =
// sin(pi x) sin(pi y) (1 + t_i) with t_i = (i+1) tau; used by drivers and
// tests to produce right-hand sides with a known exact discrete solution.
std::vector<GridFunction> manufactured_field(const Grid2D& g, int slices, double tau);

}  // namespace pdmg
