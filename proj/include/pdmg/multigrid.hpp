#pragma once

#include <memory>
#include <vector>

#include "pdmg/dense.hpp"
#include "pdmg/grid.hpp"
#include "pdmg/smoother.hpp"

namespace pdmg {

enum class CycleKind { V, W };

struct MultigridConfig {
  CycleKind cycle = CycleKind::W;
  int nu1 = 1;  // pre-smoothing sweeps
  int nu2 = 0;  // post-smoothing sweeps
  // Coarsest level has mesh width 1/coarsest_n (stored as the integer
  // subdivision count so the hierarchy depth is exact).
  int coarsest_n = 8;
  double tol = 1e-8;  // relative residual reduction target
  int max_iter = 200;
  SmootherConfig smoother{};

  void validate() const {
    if (nu1 < 0 || nu2 < 0) throw ConfigError("MultigridConfig: negative smoothing counts");
    if (nu1 + nu2 == 0) throw ConfigError("MultigridConfig: nu1 + nu2 must be positive");
    if (coarsest_n < 2) throw ConfigError("MultigridConfig: coarsest_n must be >= 2");
    if (!(tol > 0.0)) throw ConfigError("MultigridConfig: tol must be positive");
    if (max_iter < 1) throw ConfigError("MultigridConfig: max_iter must be >= 1");
  }
};

struct SolveReport {
  bool converged = false;
  int iterations = 0;
  // residual_history[k] = ||b - L u_k||; entry 0 is the initial residual.
  std::vector<double> residual_history;
  // Geometric-mean contraction factor of the last min(5, iterations-1)
  // residual ratios (the first ratio is discarded as pre-asymptotic when
  // more than one is available); 0 when no ratio exists.
  double rate = 0.0;
  double seconds = 0.0;
};

// Geometric multigrid hierarchy for A + lambda*I on a fixed fine grid.  Every
// level re-discretizes the operator at its own mesh width (the shift lambda
// is shared); smoother coefficients are computed per level.  The coarsest
// level is factored densely at construction time.
class MultigridHierarchy {
 public:
  MultigridHierarchy(Grid2D fine, const Shift& shift, const MultigridConfig& cfg);

  int num_levels() const { return static_cast<int>(levels_.size()); }
  const Grid2D& level_grid(int ell) const { return levels_[ell].grid; }
  const Shift& shift() const { return shift_; }
  const MultigridConfig& config() const { return cfg_; }

  // One multigrid cycle applied in place to u (V or W per config).
  void cycle(GridFunction& u, const GridFunction& b) const;

  // Iterate cycles from u = 0 until ||r_k|| <= tol * ||r_0|| or max_iter.
  // Non-convergence is reported, not thrown.
  SolveReport solve(GridFunction& u, const GridFunction& b) const;

 private:
  struct Level {
    Grid2D grid;
    Shift shift;  // same lambda, retagged per level for error messages
  };

  void cycle_on_level(size_t ell, GridFunction& u, const GridFunction& b) const;

  std::vector<Level> levels_;
  Shift shift_;
  MultigridConfig cfg_;
  std::unique_ptr<DenseShiftedSolver> coarse_;
};

// Convenience driver: build a hierarchy on b's grid and solve with zero
// initial guess, returning the iterate and the convergence report.
std::pair<GridFunction, SolveReport> multigrid_solve(const GridFunction& b, const Shift& shift,
                                                     const MultigridConfig& cfg);

}  // namespace pdmg
