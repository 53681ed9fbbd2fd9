#include "pdmg/dense.hpp"

#include <cmath>

namespace pdmg {

namespace {
// Dense assembly is meant for coarse levels and small oracles.
constexpr int kMaxDenseSubdivisions = 128;

void check_dense_size(const Grid2D& g, const char* where) {
  if (g.n > kMaxDenseSubdivisions)
    throw ConfigError(std::string(where) + ": dense assembly refused for n = " +
                      std::to_string(g.n) + " (limit " + std::to_string(kMaxDenseSubdivisions) + ")");
}
}  // namespace

Eigen::MatrixXcd dense_shifted_operator(const Grid2D& g, const Shift& shift) {
  check_dense_size(g, "dense_shifted_operator");
  const int m = g.interior_per_side();
  const double h = g.h();
  const double inv_h2 = 1.0 / (h * h);
  const cplx diag = (cplx(4.0, 0.0) + shift.eta(h)) * inv_h2;
  const cplx off = cplx(-inv_h2, 0.0);
  const long N = g.size();
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(N, N);
  auto idx = [m](int i, int j) { return static_cast<long>(j - 1) * m + (i - 1); };
  for (int j = 1; j <= m; ++j) {
    for (int i = 1; i <= m; ++i) {
      const long r = idx(i, j);
      A(r, r) = diag;
      if (i > 1) A(r, idx(i - 1, j)) = off;
      if (i < m) A(r, idx(i + 1, j)) = off;
      if (j > 1) A(r, idx(i, j - 1)) = off;
      if (j < m) A(r, idx(i, j + 1)) = off;
    }
  }
  return A;
}

Eigen::Matrix4cd vanka_patch_matrix(cplx eta, double h) {
  const double inv_h2 = 1.0 / (h * h);
  const cplx d = (cplx(4.0, 0.0) + eta) * inv_h2;
  const cplx o = cplx(-inv_h2, 0.0);
  Eigen::Matrix4cd L = Eigen::Matrix4cd::Zero();
  // Patch nodes ordered SW, SE, NW, NE; edges of the 4-cycle are SW-SE,
  // SW-NW, SE-NE, NW-NE (no diagonal coupling in the 5-point operator).
  L.diagonal().setConstant(d);
  L(0, 1) = L(1, 0) = o;
  L(0, 2) = L(2, 0) = o;
  L(1, 3) = L(3, 1) = o;
  L(2, 3) = L(3, 2) = o;
  return L;
}

Eigen::MatrixXcd dense_vanka_preconditioner(const Grid2D& g, const Shift& shift) {
  check_dense_size(g, "dense_vanka_preconditioner");
  const int m = g.interior_per_side();
  const double h = g.h();
  const long N = g.size();
  const Eigen::Matrix4cd Linv = vanka_patch_matrix(shift.eta(h), h).inverse();
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(N, N);
  auto idx = [m](int i, int j) { return static_cast<long>(j - 1) * m + (i - 1); };
  // Patches are indexed by their SW corner (i, j) with 0 <= i, j <= n-1, so
  // every grid cell contributes; nodes on the boundary have no interior row.
  for (int j = 0; j <= m; ++j) {
    for (int i = 0; i <= m; ++i) {
      const int pi[4] = {i, i + 1, i, i + 1};
      const int pj[4] = {j, j, j + 1, j + 1};
      for (int r = 0; r < 4; ++r) {
        if (pi[r] < 1 || pi[r] > m || pj[r] < 1 || pj[r] > m) continue;
        for (int c = 0; c < 4; ++c) {
          if (pi[c] < 1 || pi[c] > m || pj[c] < 1 || pj[c] > m) continue;
          M(idx(pi[r], pj[r]), idx(pi[c], pj[c])) += 0.25 * Linv(r, c);
        }
      }
    }
  }
  return M;
}

DenseShiftedSolver::DenseShiftedSolver(Grid2D g, const Shift& shift) : grid_(g) {
  const Eigen::MatrixXcd A = dense_shifted_operator(g, shift);
  const double scale = A.norm();  // Frobenius norm
  lu_.compute(A);
  const double min_pivot = lu_.matrixLU().diagonal().cwiseAbs().minCoeff();
  singular_ = !(min_pivot > 1e-14 * scale);
}

GridFunction DenseShiftedSolver::solve(const GridFunction& b) const {
  if (b.grid() != grid_) throw ConfigError("DenseShiftedSolver::solve: grid mismatch");
  if (singular_)
    throw SingularOperatorError("DenseShiftedSolver: operator is singular on grid n = " +
                                std::to_string(grid_.n));
  Eigen::Map<const Eigen::VectorXcd> bv(b.data(), b.size());
  Eigen::VectorXcd x = lu_.solve(bv);
  GridFunction out(grid_);
  Eigen::Map<Eigen::VectorXcd>(out.data(), out.size()) = x;
  return out;
}

GridFunction coarse_direct_solve(const GridFunction& b, const Shift& shift) {
  return DenseShiftedSolver(b.grid(), shift).solve(b);
}

}  // namespace pdmg
