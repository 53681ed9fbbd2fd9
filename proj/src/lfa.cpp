#include "pdmg/lfa.hpp"

#include <cmath>
#include <functional>
#include <memory>
#include <numbers>

namespace pdmg {

namespace {

constexpr double kPi = std::numbers::pi;
// Two sampled maxima closer than this are treated as ties; the first sampled
// point wins so the reported argmax is deterministic.
constexpr double kArgmaxTieTol = 1e-12;

std::vector<double> base_thetas(const LFAConfig& lfa) {
  lfa.validate();
  const int n = lfa.samples_per_dim;
  std::vector<double> th(n);
  const double step = kPi / n;
  for (int k = 0; k < n; ++k) th[k] = -0.5 * kPi + k * step;
  return th;
}

// The three harmonic offsets that map the low-frequency quadrant onto the
// high-frequency region.
constexpr std::array<std::array<int, 2>, 3> kHighShifts = {{{1, 0}, {0, 1}, {1, 1}}};

// Enumerate the sampled high-frequency region in a fixed deterministic order:
// theta1 outer, theta2 inner, harmonic shifts (1,0), (0,1), (1,1) innermost.
void for_each_high_frequency(const LFAConfig& lfa,
                             const std::function<void(FrequencyPair)>& fn) {
  const std::vector<double> th = base_thetas(lfa);
  for (double t1 : th)
    for (double t2 : th)
      for (const auto& s : kHighShifts) fn({t1 + kPi * s[0], t2 + kPi * s[1]});
}

double spectral_radius(const Eigen::Matrix4cd& E) {
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es;
  es.compute(E, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw EigenSolverError("two-grid symbol eigensolve failed to converge");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

cplx ipow(cplx z, int n) {
  cplx r(1.0, 0.0);
  for (int k = 0; k < n; ++k) r *= z;
  return r;
}

// Shared max tracker implementing the first-maximizer tie rule.
struct MaxTracker {
  double best = -1.0;
  FrequencyPair arg{};
  void offer(double v, FrequencyPair th) {
    if (v > best + kArgmaxTieTol) {
      best = v;
      arg = th;
    }
  }
};

}  // namespace

cplx symbol_shifted_laplacian(FrequencyPair th, const Shift& shift, double h) {
  const double s = 4.0 - 2.0 * std::cos(th.t1) - 2.0 * std::cos(th.t2);
  return (cplx(s, 0.0) + shift.eta(h)) / (h * h);
}

cplx symbol_vanka(FrequencyPair th, const Shift& shift, double h) {
  const VankaCoeffs k = vanka_coeffs(shift.eta(h));
  const double c1 = std::cos(th.t1), c2 = std::cos(th.t2);
  return (h * h) * (k.a + k.b * (c1 + c2) + k.c * (c1 * c2));
}

cplx symbol_preconditioner(FrequencyPair th, const Shift& shift, double h, SmootherKind kind) {
  if (kind == SmootherKind::Jacobi) return jacobi_weight(shift.eta(h), h);
  return symbol_vanka(th, shift, h);
}

cplx symbol_smoother_error(FrequencyPair th, const Shift& shift, double h,
                           const SmootherConfig& cfg) {
  return cplx(1.0, 0.0) - cfg.omega * symbol_preconditioner(th, shift, h, cfg.kind) *
                              symbol_shifted_laplacian(th, shift, h);
}

double symbol_transfer(FrequencyPair th) {
  return 0.25 * (1.0 + std::cos(th.t1)) * (1.0 + std::cos(th.t2));
}

SmoothingReport smoothing_factor(const Shift& shift, double h, const SmootherConfig& cfg,
                                 const LFAConfig& lfa) {
  MaxTracker mt;
  for_each_high_frequency(lfa, [&](FrequencyPair th) {
    mt.offer(std::abs(symbol_smoother_error(th, shift, h, cfg)), th);
  });
  return {mt.best, mt.arg};
}

SmoothingBound smoothing_factor_bound(const Shift& shift, double h, double omega,
                                      const LFAConfig& lfa) {
  const Shift unshifted{};
  SmoothingBound out;
  for_each_high_frequency(lfa, [&](FrequencyPair th) {
    const cplx base_err = cplx(1.0, 0.0) - omega * symbol_vanka(th, unshifted, h) *
                                               symbol_shifted_laplacian(th, unshifted, h);
    out.phi_base = std::max(out.phi_base, std::abs(base_err));
    out.phi_shift =
        std::max(out.phi_shift, std::abs(omega * shift.lambda * symbol_vanka(th, shift, h)));
  });
  return out;
}

TwoGridModel::TwoGridModel(const Shift& shift, double h, SmootherKind kind, const LFAConfig& lfa) {
  const std::vector<double> th = base_thetas(lfa);
  const int n = lfa.samples_per_dim;
  bases_.reserve(static_cast<size_t>(n) * n);
  high_ml_.reserve(static_cast<size_t>(n) * n * 3);
  high_th_.reserve(static_cast<size_t>(n) * n * 3);

  for (double t1 : th) {
    for (double t2 : th) {
      // Harmonics in fixed order: base, (1,0), (0,1), (1,1).
      const std::array<FrequencyPair, 4> harm = {{{t1, t2},
                                                  {t1 + kPi, t2},
                                                  {t1, t2 + kPi},
                                                  {t1 + kPi, t2 + kPi}}};
      std::array<cplx, 4> L, ML;
      std::array<double, 4> R;
      for (int k = 0; k < 4; ++k) {
        L[k] = symbol_shifted_laplacian(harm[k], shift, h);
        ML[k] = symbol_preconditioner(harm[k], shift, h, kind) * L[k];
        R[k] = symbol_transfer(harm[k]);
      }
      for (int k = 1; k < 4; ++k) {
        high_ml_.push_back(ML[k]);
        high_th_.push_back(harm[k]);
      }
      const cplx Lc = symbol_shifted_laplacian({2.0 * t1, 2.0 * t2}, shift, 2.0 * h);
      if (std::abs(Lc) <= lfa.coarse_skip_tol) {
        ++skipped_;
        continue;
      }
      BaseEntry e;
      e.ml = ML;
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
          e.cgc(r, c) = (r == c ? cplx(1.0, 0.0) : cplx(0.0, 0.0)) - R[r] * R[c] * L[c] / Lc;
      bases_.push_back(std::move(e));
    }
  }
  if (bases_.empty())
    throw ConfigError("TwoGridModel: every sampled base frequency was skipped as singular");
}

double TwoGridModel::rho(double omega, int nu) const {
  if (nu < 1) throw ConfigError("TwoGridModel::rho: nu must be >= 1");
  double worst = 0.0;
  Eigen::Matrix4cd E;
  for (const BaseEntry& e : bases_) {
    for (int r = 0; r < 4; ++r) {
      const cplx s = ipow(cplx(1.0, 0.0) - omega * e.ml[r], nu);
      E.row(r) = s * e.cgc.row(r);
    }
    worst = std::max(worst, spectral_radius(E));
  }
  return worst;
}

SmoothingReport TwoGridModel::smoothing(double omega) const {
  MaxTracker mt;
  for (size_t k = 0; k < high_ml_.size(); ++k)
    mt.offer(std::abs(cplx(1.0, 0.0) - omega * high_ml_[k]), high_th_[k]);
  return {mt.best, mt.arg};
}

double two_grid_factor(const Shift& shift, double h, const SmootherConfig& cfg, int nu,
                       const LFAConfig& lfa) {
  return TwoGridModel(shift, h, cfg.kind, lfa).rho(cfg.omega, nu);
}

namespace {
OmegaOpt minimize_scalar(const std::function<double(double)>& f) {
  // Coarse scan.
  constexpr double lo = 0.1, hi = 1.9, step = 0.01;
  double best_w = lo, best_v = f(lo);
  const int nsteps = static_cast<int>(std::round((hi - lo) / step));
  for (int k = 1; k <= nsteps; ++k) {
    const double w = lo + k * step;
    const double v = f(w);
    if (v < best_v) {
      best_v = v;
      best_w = w;
    }
  }

  // Golden-section refinement inside the winning bracket.
  double a = std::max(lo, best_w - step), b = std::min(hi, best_w + step);
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > 1e-4) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  const double w = 0.5 * (a + b);
  return {w, f(w)};
}
}  // namespace

OmegaOpt optimize_omega(const TwoGridModel& model, OmegaObjective objective, int nu) {
  if (objective == OmegaObjective::TwoGridRho)
    return minimize_scalar([&](double w) { return model.rho(w, nu); });
  return minimize_scalar([&](double w) { return model.smoothing(w).mu; });
}

OmegaOpt optimize_omega(const Shift& shift, double h, SmootherKind kind, OmegaObjective objective,
                        int nu, const LFAConfig& lfa) {
  if (objective == OmegaObjective::TwoGridRho) {
    TwoGridModel model(shift, h, kind, lfa);
    return optimize_omega(model, objective, nu);
  }
  // Smoothing-only objective does not need the two-grid cache.
  std::vector<cplx> high_ml;
  for_each_high_frequency(lfa, [&](FrequencyPair th) {
    high_ml.push_back(symbol_preconditioner(th, shift, h, kind) *
                      symbol_shifted_laplacian(th, shift, h));
  });
  return minimize_scalar([&](double w) {
    double worst = 0.0;
    for (const cplx& ml : high_ml) worst = std::max(worst, std::abs(cplx(1.0, 0.0) - w * ml));
    return worst;
  });
}

}  // namespace pdmg
