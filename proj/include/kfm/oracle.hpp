#ifndef KFM_ORACLE_HPP
#define KFM_ORACLE_HPP

#include <complex>
#include <vector>

#include "kfm/evolution.hpp"

namespace kfm {

enum class ClosedFormSetting {
  HalfCircleDirichletDirac,  // arc (-pi/2, pi/2), point mass at theta = 0
  FullCircleTwoDirac,        // full circle, point masses at theta = 0 and pi
};

/** Closed-form eigenpairs on the circle: the tent eigenfunction with
 *  lambda = 4/pi, plus the constant mode in the boundaryless case. */
struct ClosedFormProblem {
  ClosedFormSetting setting;
  std::vector<double> eigenvalues;   // exact: {4/pi} or {0, 4/pi}

  /// Eigenfunction in the paper's normalization (tent peak value 1).
  double eigenfunction(int k, double theta) const;
  /// ||phi_k||_mu in that normalization.
  double mu_norm(int k) const;
  /// Eigenfunction scaled to unit mu-norm.
  double eigenfunction_mu_normalized(int k, double theta) const;
};

ClosedFormProblem oracle_eigen(ClosedFormSetting setting);

struct OracleParams {
  double c = 0.0;   // heat forcing constant
  double c1 = 0.0;  // constant-mode initial coefficient (two-Dirac heat)
  double c2 = 0.0;  // tent-mode initial coefficient
};

/** Exact solution value at (t, theta) for the closed-form runs:
 *  half-circle: wave (phi/4)cos(2t/sqrt(pi)), heat (phi/4)(e^{-4t/pi}(1-c pi)+c pi),
 *  Schrodinger (phi/4)e^{-i4t/pi}; two-Dirac: same with phi_2, heat with
 *  c1 + phi_2(e^{-4t/pi}(c2 - pi c/4) + pi c/4). */
Complex oracle_solution(ClosedFormSetting setting, Equation eq, const OracleParams& params,
                        double t, double theta);

}  // namespace kfm

#endif
