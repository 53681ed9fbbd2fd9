#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pdmg/grid.hpp"
#include "pdmg/smoother.hpp"

namespace pdmg {

// A Fourier frequency pair (theta1, theta2), each component in radians.
struct FrequencyPair {
  double t1 = 0.0;
  double t2 = 0.0;
};

// Sampling parameters for the Fourier analysis.  The low-frequency quadrant
// [-pi/2, pi/2)^2 is sampled uniformly with samples_per_dim points per
// dimension starting at -pi/2; high frequencies are reached by shifting base
// frequencies by pi in one or both components.
struct LFAConfig {
  int samples_per_dim = 64;
  // Two-grid bases whose coarse symbol has modulus <= this are skipped.
  double coarse_skip_tol = 1e-8;

  void validate() const {
    if (samples_per_dim < 16 || samples_per_dim % 2 != 0)
      throw ConfigError("LFAConfig: samples_per_dim must be even and >= 16");
    if (!(coarse_skip_tol > 0.0)) throw ConfigError("LFAConfig: coarse_skip_tol must be positive");
  }
};

// Fourier symbol of A + lambda*I: (4 + lambda h^2 - 2cos t1 - 2cos t2)/h^2.
cplx symbol_shifted_laplacian(FrequencyPair th, const Shift& shift, double h);

// Fourier symbol of the Vanka patch preconditioner:
//   h^2 (a + b (cos t1 + cos t2) + c cos t1 cos t2).
cplx symbol_vanka(FrequencyPair th, const Shift& shift, double h);

// Symbol of the configured preconditioner (Vanka stencil or Jacobi diagonal).
cplx symbol_preconditioner(FrequencyPair th, const Shift& shift, double h, SmootherKind kind);

// Symbol of the smoothing error operator S = I - omega M (A + lambda I).
cplx symbol_smoother_error(FrequencyPair th, const Shift& shift, double h,
                           const SmootherConfig& cfg);

// Symbol of full-weighting restriction; bilinear prolongation has the same
// symbol: (1/4)(1 + cos t1)(1 + cos t2).
double symbol_transfer(FrequencyPair th);

struct SmoothingReport {
  double mu = 0.0;          // max |S| over the high-frequency region
  FrequencyPair argmax{};   // first sampled maximizer (deterministic order)
};

// Smoothing factor: the maximum modulus of the smoothing error symbol over
// the high-frequency region [-pi/2, 3pi/2)^2 \ [-pi/2, pi/2)^2.
SmoothingReport smoothing_factor(const Shift& shift, double h, const SmootherConfig& cfg,
                                 const LFAConfig& lfa = {});

// Shift-splitting upper bound for the Vanka smoothing factor: phi_base is the
// high-frequency max of |1 - omega M0 A0| with the unshifted symbols, and
// phi_shift is the high-frequency max of |omega lambda M|; the smoothing
// factor of the shifted problem is bounded by phi_base + phi_shift.
struct SmoothingBound {
  double phi_base = 0.0;
  double phi_shift = 0.0;
  double total() const { return phi_base + phi_shift; }
};
SmoothingBound smoothing_factor_bound(const Shift& shift, double h, double omega,
                                      const LFAConfig& lfa = {});

// Two-grid error propagation model in the 4-dimensional harmonic space
// spanned by theta + pi*(s1, s2), s in {0,1}^2, with re-discretized coarse
// symbol at (2 theta, mesh 2h), full-weighting restriction and bilinear
// prolongation.  Everything independent of the damping factor omega is
// precomputed at construction so omega sweeps are cheap.
class TwoGridModel {
 public:
  TwoGridModel(const Shift& shift, double h, SmootherKind kind, const LFAConfig& lfa = {});

  // Spectral radius sup over sampled bases of S^nu composed with the
  // coarse-grid correction (nu = total smoothing sweeps per cycle).
  double rho(double omega, int nu) const;

  // Smoothing factor and maximizer at the given omega (same sampling).
  SmoothingReport smoothing(double omega) const;

  int skipped_bases() const { return skipped_; }

 private:
  struct BaseEntry {
    std::array<cplx, 4> ml;   // M(theta_k) * L(theta_k) per harmonic
    Eigen::Matrix4cd cgc;     // coarse-grid correction error symbol
  };
  std::vector<BaseEntry> bases_;
  std::vector<cplx> high_ml_;            // preconditioned symbols on T^H
  std::vector<FrequencyPair> high_th_;   // matching frequencies
  int skipped_ = 0;
};

// Convenience wrapper: rho for one (omega, nu) pair.
double two_grid_factor(const Shift& shift, double h, const SmootherConfig& cfg, int nu,
                       const LFAConfig& lfa = {});

enum class OmegaObjective {
  TwoGridRho,   // minimize the two-grid factor at given nu
  SmoothingMu,  // minimize the smoothing factor
};

struct OmegaOpt {
  double omega = 0.0;
  double value = 0.0;
};

// Scan omega in [0.1, 1.9] with step 0.01, then refine the best bracket by
// golden-section search to an interval of width 1e-4.
OmegaOpt optimize_omega(const Shift& shift, double h, SmootherKind kind, OmegaObjective objective,
                        int nu = 1, const LFAConfig& lfa = {});

// Same search against an existing model (avoids rebuilding the symbol cache
// when the model is also needed for follow-up evaluations).
OmegaOpt optimize_omega(const TwoGridModel& model, OmegaObjective objective, int nu = 1);

}  // namespace pdmg
