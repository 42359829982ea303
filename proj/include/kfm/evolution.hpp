#ifndef KFM_EVOLUTION_HPP
#define KFM_EVOLUTION_HPP

#include <functional>
#include <memory>
#include <vector>

#include "kfm/spectral.hpp"

namespace kfm {

enum class Equation { Wave, Heat, Schrodinger };

struct Norms {
  double mu;
  double dom_e;
  double dual;  // zero modes excluded
};

Norms norms(const CoefVec& c);
/// E_alpha norm: sqrt(sum over lambda>0 of lambda^alpha |a|^2), plus the
/// zero-mode contribution when alpha = 0. Rejects alpha < 0.
double ealpha_norm(const CoefVec& c, double alpha);

/** Forcing f(t) in coefficient space: zero, a constant coefficient vector,
 *  or snapshots on a strictly increasing time grid, piecewise-linear in t. */
class ForcingTerm {
 public:
  static ForcingTerm zero();
  static ForcingTerm constant(CoefVec c);
  static ForcingTerm sampled(std::vector<double> times, std::vector<CoefVec> values);

  bool is_zero() const { return kind_ == Kind::Zero; }
  /// Coefficient vector at time t (clamped to the sample span for Sampled).
  std::vector<Complex> coefficients(int n_modes, double t) const;
  std::shared_ptr<const SpectralBasis> basis() const;
  const char* describe() const;

 private:
  enum class Kind { Zero, Constant, Sampled };
  Kind kind_ = Kind::Zero;
  CoefVec constant_;
  std::vector<double> times_;
  std::vector<CoefVec> values_;
};

struct Trajectory {
  std::shared_ptr<const SpectralBasis> basis;
  Equation equation = Equation::Heat;
  std::vector<double> times;
  std::vector<CoefVec> states;
  std::vector<CoefVec> velocities;  // wave only
  std::vector<double> norm_mu;
  std::vector<double> norm_dom_e;
  std::vector<double> energy;             // wave only: 1/2 |du|_mu^2 + 1/2 |u|_domE^2
  std::vector<double> velocity_norm_mu;   // wave only; the zero mode contributes here
  std::vector<double> velocity_norm_dual; // wave only; zero modes excluded by convention
};

/** Wave evolution by per-mode closed form: c_k(t) = alpha_k cos(w t)
 *  + beta_k sin(w t)/w + (1/w) int_0^t sin(w (t-s)) gamma_k(s) ds, w = sqrt(lambda_k);
 *  the zero mode uses the limit alpha + beta t + int (t-s) gamma(s) ds.
 *  Duhamel integrals use fourth-order prefix quadrature on a half-step grid. */
Trajectory wave_evolve(const CoefVec& g, const CoefVec& h, const ForcingTerm& f, double T, int steps);

/// Second time derivative K(t) in (dom E)': f(t) - lambda_k c_k(t) per mode.
CoefVec wave_accel(const CoefVec& g, const CoefVec& h, const ForcingTerm& f, double t);

/// Heat evolution: c_k(t) = b_k e^{-lambda_k t} + int_0^t e^{-lambda_k(t-s)} beta_k(s) ds.
Trajectory heat_evolve(const CoefVec& g, const ForcingTerm& f, double T, int steps);

/// Schrodinger evolution: c_k(t) = b_k e^{-i lambda_k t} - i int_0^t e^{-i lambda_k(t-s)} beta_k(s) ds.
Trajectory schrodinger_evolve(const CoefVec& g, const ForcingTerm& f, double T, int steps);

/** Max over interior grid times of the weak-form residual tested against
 *  eigenfunction k, with time derivatives replaced by centered differences. */
double weak_residual(const Trajectory& traj, Equation eq, const ForcingTerm& f, int test_index);

/// Fourth-order prefix quadrature over uniform samples: integral of the first q intervals.
Complex prefix_integral(std::span<const Complex> samples, double dt, int q);

struct GridEvolution {
  std::vector<std::vector<Complex>> states;      // [grid index][mode]
  std::vector<std::vector<Complex>> velocities;  // wave only
};

/** Per-mode propagation on a uniform grid with forcing given by samples on the
 *  same grid (empty = zero forcing). States are produced at every grid index;
 *  this is the workhorse behind the public evolvers and the Picard iteration. */
GridEvolution evolve_sampled(Equation eq, const CoefVec& g, const std::vector<Complex>& h,
                             const std::vector<std::vector<Complex>>& forcing_samples, double dt,
                             int steps);

}  // namespace kfm

#endif
