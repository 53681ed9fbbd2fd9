#include "pdmg/smoother.hpp"

#include <cmath>

namespace pdmg {

namespace {
constexpr double kSingularTol = 1e-12;

cplx checked_inverse(cplx z, const char* what) {
  if (std::abs(z) <= kSingularTol)
    throw SingularOperatorError(std::string("vanka_coeffs: patch eigenvalue ") + what +
                                " is singular for this shift");
  return cplx(1.0, 0.0) / z;
}
}  // namespace

VankaCoeffs vanka_coeffs(cplx eta) {
  // Inverses of the three distinct eigenvalues of the h^2-scaled 2x2-patch
  // matrix (2+eta simple, 4+eta double, 6+eta simple).
  const cplx i2 = checked_inverse(cplx(2.0, 0.0) + eta, "2+eta");
  const cplx i4 = checked_inverse(cplx(4.0, 0.0) + eta, "4+eta");
  const cplx i6 = checked_inverse(cplx(6.0, 0.0) + eta, "6+eta");
  VankaCoeffs k;
  k.a = 0.25 * (i2 + 2.0 * i4 + i6);
  k.b = 0.25 * (i2 - i6);
  k.c = 0.25 * (i2 - 2.0 * i4 + i6);
  return k;
}

Stencil3x3 vanka_stencil(const Shift& shift, double h) {
  const VankaCoeffs k = vanka_coeffs(shift.eta(h));
  Stencil3x3 s;
  const cplx tb = 2.0 * k.b;
  s.w[0] = {k.c, tb, k.c};
  s.w[1] = {tb, 4.0 * k.a, tb};
  s.w[2] = {k.c, tb, k.c};
  s.scale = h * h / 4.0;
  return s;
}

cplx jacobi_weight(cplx eta, double h) {
  const cplx d = cplx(4.0, 0.0) + eta;
  if (std::abs(d) <= kSingularTol)
    throw SingularOperatorError("jacobi_weight: 4+eta is singular for this shift");
  return cplx(h * h, 0.0) / d;
}

GridFunction apply_smoother(const GridFunction& u, const GridFunction& b, const Shift& shift,
                            const SmootherConfig& cfg) {
  if (u.grid() != b.grid()) throw ConfigError("apply_smoother: grid mismatch");
  const double h = u.grid().h();
  GridFunction r = residual(b, u, shift);
  GridFunction out = u;
  if (cfg.kind == SmootherKind::Jacobi) {
    const cplx w = cfg.omega * jacobi_weight(shift.eta(h), h);
    cplx* od = out.data();
    const cplx* rd = r.data();
    const long n = out.size();
    for (long k = 0; k < n; ++k) od[k] += w * rd[k];
  } else {
    GridFunction mr = apply_stencil(vanka_stencil(shift, h), r);
    mr *= cplx(cfg.omega, 0.0);
    out += mr;
  }
  return out;
}

}  // namespace pdmg
