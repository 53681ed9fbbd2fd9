#include "pdmg/paradiag.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

namespace pdmg {

namespace {
constexpr double kIllCondThreshold = 1e12;

void finish_diagonalization(TimeDiagonalization& d) {
  d.V_lu.compute(d.V);
  const double rc = d.V_lu.rcond();
  d.cond_estimate = (rc > 0.0) ? 1.0 / rc : std::numeric_limits<double>::infinity();
  d.ill_conditioned = !(d.cond_estimate <= kIllCondThreshold);
}

void check_stack(const std::vector<GridFunction>& x, long expected, const char* where) {
  if (static_cast<long>(x.size()) != expected)
    throw ConfigError(std::string(where) + ": expected " + std::to_string(expected) +
                      " time slices, got " + std::to_string(x.size()));
  for (const GridFunction& g : x)
    if (g.grid() != x.front().grid()) throw ConfigError(std::string(where) + ": grid mismatch");
}

// Pack time slices as rows of a dense matrix (time index is the row).
Eigen::MatrixXcd pack(const std::vector<GridFunction>& x) {
  const long cols = x.front().size();
  Eigen::MatrixXcd X(static_cast<long>(x.size()), cols);
  for (size_t i = 0; i < x.size(); ++i)
    X.row(static_cast<long>(i)) = Eigen::Map<const Eigen::RowVectorXcd>(x[i].data(), cols);
  return X;
}

std::vector<GridFunction> unpack(const Eigen::MatrixXcd& X, const Grid2D& g) {
  std::vector<GridFunction> out(static_cast<size_t>(X.rows()), GridFunction(g));
  for (long i = 0; i < X.rows(); ++i)
    Eigen::Map<Eigen::RowVectorXcd>(out[static_cast<size_t>(i)].data(), X.cols()) = X.row(i);
  return out;
}
}  // namespace

Eigen::MatrixXd time_stepping_matrix(const TimeDiscretization& td) {
  td.validate();
  const double inv_tau = 1.0 / td.tau;
  if (td.kind == TimeSchemeKind::HeatBVM) {
    const int n = td.n;
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n - 1; ++i) {
      B(i, i + 1) = 0.5 * inv_tau;
      if (i > 0) B(i, i - 1) = -0.5 * inv_tau;
    }
    B(n - 1, n - 2) = -inv_tau;
    B(n - 1, n - 1) = inv_tau;
    return B;
  }
  // BackwardHeatQBV: backward differences plus the regularization corner.
  const int m = td.n + 1;
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    B(i, i) = inv_tau;
    if (i > 0) B(i, i - 1) = -inv_tau;
  }
  B(0, m - 1) = inv_tau / td.beta;
  return B;
}

TimeDiagonalization diagonalize_time_matrix(const Eigen::MatrixXd& B) {
  if (B.rows() != B.cols() || B.rows() < 1)
    throw ConfigError("diagonalize_time_matrix: matrix must be square and nonempty");
  Eigen::EigenSolver<Eigen::MatrixXd> es(B, /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success)
    throw EigenSolverError("diagonalize_time_matrix: eigensolver did not converge");
  TimeDiagonalization d;
  d.eigenvalues = es.eigenvalues();
  d.V = es.eigenvectors();
  finish_diagonalization(d);
  return d;
}

TimeDiagonalization diagonalize_qbv_closed_form(const TimeDiscretization& td) {
  td.validate();
  if (td.kind != TimeSchemeKind::BackwardHeatQBV)
    throw ConfigError("diagonalize_qbv_closed_form: scheme is not BackwardHeatQBV");
  const int m = td.n + 1;
  const double alpha = -1.0 / td.beta;
  // Principal m-th root of the (negative real) coupling weight:
  // gamma = |alpha|^{1/m} e^{i pi/m}.
  const double gr = std::pow(-alpha, 1.0 / m);
  const double ga = std::numbers::pi / m;
  const double wa = 2.0 * std::numbers::pi / m;  // argument of zeta
  TimeDiagonalization d;
  d.eigenvalues.resize(m);
  d.V.resize(m, m);
  // Column k diagonalizes the down-shift: V(j,k) = gamma^{-j} zeta^{jk} / m,
  // giving the shift eigenvalue gamma zeta^{-k}; columns are normalized.
  for (int k = 0; k < m; ++k) {
    d.eigenvalues(k) = (cplx(1.0, 0.0) - std::polar(gr, ga - wa * k)) / td.tau;
    for (int j = 0; j < m; ++j)
      d.V(j, k) = std::polar(std::pow(gr, -j), j * (wa * k - ga)) / static_cast<double>(m);
    d.V.col(k).normalize();
  }
  finish_diagonalization(d);
  return d;
}

std::vector<Shift> time_shifts(const TimeDiagonalization& d) {
  std::vector<Shift> out(static_cast<size_t>(d.eigenvalues.size()));
  for (long j = 0; j < d.eigenvalues.size(); ++j)
    out[static_cast<size_t>(j)] = {d.eigenvalues(j), static_cast<int>(j), ShiftKind::TimeEigenvalue};
  return out;
}

std::vector<Shift> helmholtz_shifts(double h) {
  if (!(h > 0.0) || h >= 0.5) throw ConfigError("helmholtz_shifts: need 0 < h < 1/2");
  const int jmax = std::min(128, static_cast<int>(std::floor(1.0 / (2.0 * h))));
  std::vector<Shift> out;
  out.reserve(static_cast<size_t>(jmax));
  for (int j = 1; j <= jmax; ++j) {
    const double j2 = static_cast<double>(j) * j;
    out.push_back({cplx(-j2, 0.5 * j2), j, ShiftKind::Helmholtz});
  }
  return out;
}

std::vector<GridFunction> kron_time_apply(const Eigen::MatrixXcd& M,
                                          const std::vector<GridFunction>& x) {
  check_stack(x, M.cols(), "kron_time_apply");
  return unpack(M * pack(x), x.front().grid());
}

std::vector<GridFunction> kron_time_solve(const TimeDiagonalization& d,
                                          const std::vector<GridFunction>& x) {
  check_stack(x, d.V.rows(), "kron_time_solve");
  return unpack(d.V_lu.solve(pack(x)), x.front().grid());
}

std::vector<GridFunction> all_at_once_apply(const Eigen::MatrixXd& B,
                                            const std::vector<GridFunction>& u) {
  check_stack(u, B.cols(), "all_at_once_apply");
  const Shift unshifted{};
  const size_t m = u.size();
  std::vector<GridFunction> out;
  out.reserve(m);
  for (size_t i = 0; i < m; ++i) {
    GridFunction yi = apply_shifted_laplacian(u[i], unshifted);
    for (size_t j = 0; j < m; ++j) {
      const double bij = B(static_cast<long>(i), static_cast<long>(j));
      if (bij == 0.0) continue;
      const cplx w(bij, 0.0);
      const cplx* uj = u[j].data();
      cplx* y = yi.data();
      for (long k = 0; k < yi.size(); ++k) y[k] += w * uj[k];
    }
    out.push_back(std::move(yi));
  }
  return out;
}

std::vector<GridFunction> all_at_once_residual(const Eigen::MatrixXd& B,
                                               const std::vector<GridFunction>& u,
                                               const std::vector<GridFunction>& f) {
  check_stack(f, B.rows(), "all_at_once_residual");
  std::vector<GridFunction> r = all_at_once_apply(B, u);
  for (size_t i = 0; i < r.size(); ++i) {
    GridFunction ri = f[i];
    ri -= r[i];
    r[i] = std::move(ri);
  }
  return r;
}

double stacked_norm(const std::vector<GridFunction>& v) {
  double s = 0.0;
  for (const GridFunction& g : v) {
    const double n = g.norm();
    s += n * n;
  }
  return std::sqrt(s);
}

ParadiagResult paradiag_solve(const std::vector<GridFunction>& f, const TimeDiscretization& td,
                              const MultigridConfig& cfg, int threads) {
  td.validate();
  if (threads < 1) throw ConfigError("paradiag_solve: threads must be >= 1");
  if (f.empty()) throw ConfigError("paradiag_solve: empty right-hand side");
  check_stack(f, td.dim(), "paradiag_solve");
  const auto t0 = std::chrono::steady_clock::now();
  const Grid2D grid = f.front().grid();

  const Eigen::MatrixXd B = time_stepping_matrix(td);
  const TimeDiagonalization diag = td.kind == TimeSchemeKind::BackwardHeatQBV
                                       ? diagonalize_qbv_closed_form(td)
                                       : diagonalize_time_matrix(B);

  ParadiagResult res;
  res.shifts = time_shifts(diag);
  res.time_cond_estimate = diag.cond_estimate;
  res.time_ill_conditioned = diag.ill_conditioned;

  // Step 1: transform the right-hand side, g = (V^{-1} x I) f.
  std::vector<GridFunction> g = kron_time_solve(diag, f);

  // Step 2: independent shifted solves (A + lambda_j I) w_j = g_j.
  std::vector<GridFunction> w(g.size(), GridFunction(grid));
  res.reports.resize(g.size());
  const int nw = std::min<int>(threads, static_cast<int>(g.size()));
  auto run_range = [&](size_t begin, size_t end) {
    for (size_t j = begin; j < end; ++j) {
      MultigridHierarchy mg(grid, res.shifts[j], cfg);
      res.reports[j] = mg.solve(w[j], g[j]);
    }
  };
  if (nw <= 1) {
    run_range(0, g.size());
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<size_t>(nw));
    const size_t chunk = (g.size() + nw - 1) / nw;
    for (int t = 0; t < nw; ++t) {
      const size_t b0 = t * chunk, b1 = std::min(g.size(), b0 + chunk);
      pool.emplace_back([&, t, b0, b1] {
        try {
          run_range(b0, b1);
        } catch (...) {
          errors[static_cast<size_t>(t)] = std::current_exception();
        }
      });
    }
    for (std::thread& th : pool) th.join();
    for (const std::exception_ptr& e : errors)
      if (e) std::rethrow_exception(e);
  }
  res.all_converged = true;
  for (const SolveReport& r : res.reports) res.all_converged = res.all_converged && r.converged;

  // Step 3: transform back, u = (V x I) w.
  res.u = kron_time_apply(diag.V, w);

  const double fn = stacked_norm(f);
  const double rn = stacked_norm(all_at_once_residual(B, res.u, f));
  res.relative_residual = (fn > 0.0) ? rn / fn : rn;
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

std::vector<GridFunction> manufactured_field(const Grid2D& g, int slices, double tau) {
  if (slices < 1) throw ConfigError("manufactured_field: need at least one time slice");
  const int m = g.interior_per_side();
  const double h = g.h();
  std::vector<GridFunction> out;
  out.reserve(static_cast<size_t>(slices));
  for (int s = 0; s < slices; ++s) {
    const double t = (s + 1) * tau;
    GridFunction u(g);
    for (int j = 1; j <= m; ++j)
      for (int i = 1; i <= m; ++i)
        u(i, j) = cplx(std::sin(std::numbers::pi * i * h) * std::sin(std::numbers::pi * j * h) *
                           (1.0 + t),
                       0.0);
    out.push_back(std::move(u));
  }
  return out;
}

}  // namespace pdmg
