#include "pdmg/grid.hpp"

#include <cmath>

namespace pdmg {

double GridFunction::norm() const {
  double s = 0.0;
  for (const cplx& z : v_) s += std::norm(z);
  return std::sqrt(s);
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
  if (grid_ != o.grid_) throw ConfigError("GridFunction +=: grid mismatch");
  for (size_t k = 0; k < v_.size(); ++k) v_[k] += o.v_[k];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& o) {
  if (grid_ != o.grid_) throw ConfigError("GridFunction -=: grid mismatch");
  for (size_t k = 0; k < v_.size(); ++k) v_[k] -= o.v_[k];
  return *this;
}

GridFunction& GridFunction::operator*=(cplx s) {
  for (cplx& z : v_) z *= s;
  return *this;
}

GridFunction apply_stencil(const Stencil3x3& s, const GridFunction& u) {
  const int m = u.grid().interior_per_side();
  GridFunction out(u.grid());
  for (int j = 1; j <= m; ++j) {
    const cplx* rm = (j > 1) ? u.row(j - 1) : nullptr;
    const cplx* rc = u.row(j);
    const cplx* rp = (j < m) ? u.row(j + 1) : nullptr;
    cplx* o = out.row(j);
    for (int i = 1; i <= m; ++i) {
      cplx acc(0.0, 0.0);
      const bool left = i > 1, right = i < m;
      if (rm) {
        if (left) acc += s.w[0][0] * rm[i - 1];
        acc += s.w[0][1] * rm[i];
        if (right) acc += s.w[0][2] * rm[i + 1];
      }
      if (left) acc += s.w[1][0] * rc[i - 1];
      acc += s.w[1][1] * rc[i];
      if (right) acc += s.w[1][2] * rc[i + 1];
      if (rp) {
        if (left) acc += s.w[2][0] * rp[i - 1];
        acc += s.w[2][1] * rp[i];
        if (right) acc += s.w[2][2] * rp[i + 1];
      }
      o[i] = s.scale * acc;
    }
  }
  return out;
}

Stencil3x3 shifted_laplacian_stencil(const Shift& shift, double h) {
  Stencil3x3 s;
  const cplx eta = shift.eta(h);
  s.w[0][1] = s.w[2][1] = s.w[1][0] = s.w[1][2] = cplx(-1.0, 0.0);
  s.w[1][1] = cplx(4.0, 0.0) + eta;
  s.scale = 1.0 / (h * h);
  return s;
}

GridFunction apply_shifted_laplacian(const GridFunction& u, const Shift& shift) {
  const int m = u.grid().interior_per_side();
  const double h = u.grid().h();
  const double inv_h2 = 1.0 / (h * h);
  const cplx diag = cplx(4.0, 0.0) + shift.eta(h);
  GridFunction out(u.grid());
  for (int j = 1; j <= m; ++j) {
    const cplx* rm = (j > 1) ? u.row(j - 1) : nullptr;
    const cplx* rc = u.row(j);
    const cplx* rp = (j < m) ? u.row(j + 1) : nullptr;
    cplx* o = out.row(j);
    for (int i = 1; i <= m; ++i) {
      cplx acc = diag * rc[i];
      if (i > 1) acc -= rc[i - 1];
      if (i < m) acc -= rc[i + 1];
      if (rm) acc -= rm[i];
      if (rp) acc -= rp[i];
      o[i] = inv_h2 * acc;
    }
  }
  return out;
}

GridFunction residual(const GridFunction& b, const GridFunction& u, const Shift& shift) {
  if (b.grid() != u.grid()) throw ConfigError("residual: grid mismatch");
  GridFunction r = apply_shifted_laplacian(u, shift);
  const long n = r.size();
  cplx* rd = r.data();
  const cplx* bd = b.data();
  for (long k = 0; k < n; ++k) rd[k] = bd[k] - rd[k];
  return r;
}

GridFunction restrict_full_weighting(const GridFunction& fine) {
  const Grid2D cg = fine.grid().coarse();
  GridFunction out(cg);
  const int mc = cg.interior_per_side();
  for (int J = 1; J <= mc; ++J) {
    const cplx* rm = fine.row(2 * J - 1);
    const cplx* rc = fine.row(2 * J);
    const cplx* rp = fine.row(2 * J + 1);
    cplx* o = out.row(J);
    for (int I = 1; I <= mc; ++I) {
      const int i = 2 * I;
      // Fine interior indices 2I-1..2I+1 lie strictly inside for all coarse
      // interior I, so no boundary checks are needed here.
      const cplx sum = rm[i - 1] + 2.0 * rm[i] + rm[i + 1] + 2.0 * rc[i - 1] + 4.0 * rc[i] +
                       2.0 * rc[i + 1] + rp[i - 1] + 2.0 * rp[i] + rp[i + 1];
      o[I] = sum * (1.0 / 16.0);
    }
  }
  return out;
}

GridFunction prolong_bilinear(const GridFunction& coarse) {
  const Grid2D cg = coarse.grid();
  const Grid2D fg(2 * cg.n);
  GridFunction out(fg);
  const int mc = cg.interior_per_side();
  const int mf = fg.interior_per_side();
  // Coarse value with Dirichlet-zero extension for I or J in {0, n_c}.
  auto cval = [&](int I, int J) -> cplx {
    if (I < 1 || I > mc || J < 1 || J > mc) return cplx(0.0, 0.0);
    return coarse(I, J);
  };
  for (int j = 1; j <= mf; ++j) {
    cplx* o = out.row(j);
    const int J = j / 2;
    const bool jeven = (j % 2 == 0);
    for (int i = 1; i <= mf; ++i) {
      const int I = i / 2;
      const bool ieven = (i % 2 == 0);
      if (ieven && jeven) {
        o[i] = cval(I, J);
      } else if (!ieven && jeven) {
        o[i] = 0.5 * (cval(I, J) + cval(I + 1, J));
      } else if (ieven && !jeven) {
        o[i] = 0.5 * (cval(I, J) + cval(I, J + 1));
      } else {
        o[i] = 0.25 * (cval(I, J) + cval(I + 1, J) + cval(I, J + 1) + cval(I + 1, J + 1));
      }
    }
  }
  return out;
}

}  // namespace pdmg
