#include "pdmg/multigrid.hpp"

#include <chrono>
#include <cmath>

namespace pdmg {

namespace {
double measured_rate(const std::vector<double>& hist) {
  const int iters = static_cast<int>(hist.size()) - 1;
  if (iters <= 0) return 0.0;
  int count = std::min(5, iters - 1);
  if (count == 0) count = 1;  // single-iteration solve: use its one ratio
  double log_sum = 0.0;
  for (int k = iters - count + 1; k <= iters; ++k) {
    if (hist[k] == 0.0) return 0.0;        // exact convergence
    if (hist[k - 1] == 0.0) return 0.0;     // degenerate; treat as solved
    log_sum += std::log(hist[k] / hist[k - 1]);
  }
  return std::exp(log_sum / count);
}
}  // namespace

MultigridHierarchy::MultigridHierarchy(Grid2D fine, const Shift& shift, const MultigridConfig& cfg)
    : shift_(shift), cfg_(cfg) {
  cfg_.validate();
  if (fine.n < cfg_.coarsest_n)
    throw ConfigError("MultigridHierarchy: fine grid n = " + std::to_string(fine.n) +
                      " is finer than coarsest_n = " + std::to_string(cfg_.coarsest_n) +
                      " allows");
  Grid2D g = fine;
  levels_.push_back({g, shift_});
  while (g.n > cfg_.coarsest_n) {
    if (!g.coarsenable())
      throw ConfigError("MultigridHierarchy: grid n = " + std::to_string(g.n) +
                        " cannot be coarsened to reach coarsest_n = " +
                        std::to_string(cfg_.coarsest_n));
    g = g.coarse();
    levels_.push_back({g, shift_});
  }
  if (g.n != cfg_.coarsest_n)
    throw ConfigError("MultigridHierarchy: coarsening from n = " + std::to_string(fine.n) +
                      " reaches n = " + std::to_string(g.n) + ", not coarsest_n = " +
                      std::to_string(cfg_.coarsest_n));
  // Validate the smoother on every level up front so a singular shift fails
  // loudly at construction, naming the offending level.
  for (size_t ell = 0; ell + 1 < levels_.size(); ++ell) {
    const double h = levels_[ell].grid.h();
    try {
      if (cfg_.smoother.kind == SmootherKind::Vanka)
        (void)vanka_coeffs(shift_.eta(h));
      else
        (void)jacobi_weight(shift_.eta(h), h);
    } catch (const SingularOperatorError& e) {
      throw SingularOperatorError("level " + std::to_string(ell) + " (n = " +
                                  std::to_string(levels_[ell].grid.n) + "): " + e.what());
    }
  }
  coarse_ = std::make_unique<DenseShiftedSolver>(levels_.back().grid, shift_);
  // The factorization itself is kept even if singular; solve() reports it.
}

void MultigridHierarchy::cycle_on_level(size_t ell, GridFunction& u, const GridFunction& b) const {
  if (ell + 1 == levels_.size()) {
    // Coarsest level: replace u by the exact solve of the level system.
    u = coarse_->solve(b);
    return;
  }
  const Shift& s = levels_[ell].shift;
  for (int k = 0; k < cfg_.nu1; ++k) u = apply_smoother(u, b, s, cfg_.smoother);
  GridFunction rc = restrict_full_weighting(residual(b, u, s));
  GridFunction ec(levels_[ell + 1].grid);
  const int gamma = (cfg_.cycle == CycleKind::W) ? 2 : 1;
  for (int g = 0; g < gamma; ++g) cycle_on_level(ell + 1, ec, rc);
  u += prolong_bilinear(ec);
  for (int k = 0; k < cfg_.nu2; ++k) u = apply_smoother(u, b, s, cfg_.smoother);
}

void MultigridHierarchy::cycle(GridFunction& u, const GridFunction& b) const {
  if (u.grid() != levels_[0].grid || b.grid() != levels_[0].grid)
    throw ConfigError("MultigridHierarchy::cycle: grid mismatch");
  cycle_on_level(0, u, b);
}

SolveReport MultigridHierarchy::solve(GridFunction& u, const GridFunction& b) const {
  if (b.grid() != levels_[0].grid)
    throw ConfigError("MultigridHierarchy::solve: grid mismatch");
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport rep;
  u = GridFunction(levels_[0].grid);  // zero initial guess
  const double r0 = b.norm();         // residual of the zero guess
  rep.residual_history.push_back(r0);
  if (r0 == 0.0 || cfg_.tol >= 1.0) {
    rep.converged = true;  // the zero guess already satisfies the criterion
  } else {
    for (int k = 1; k <= cfg_.max_iter; ++k) {
      cycle(u, b);
      const double r = residual(b, u, shift_).norm();
      rep.residual_history.push_back(r);
      rep.iterations = k;
      if (r <= cfg_.tol * r0) {
        rep.converged = true;
        break;
      }
    }
  }
  rep.rate = measured_rate(rep.residual_history);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

std::pair<GridFunction, SolveReport> multigrid_solve(const GridFunction& b, const Shift& shift,
                                                     const MultigridConfig& cfg) {
  MultigridHierarchy mg(b.grid(), shift, cfg);
  GridFunction u(b.grid());
  SolveReport rep = mg.solve(u, b);
  return {std::move(u), rep};
}

}  // namespace pdmg
