#include "kfm/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace kfm {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// Tent profile peaking at 1 over theta = 0 with feet at +-half_width.
double tent(double theta, double half_width) {
  double v = 1.0 - std::fabs(theta) / half_width;
  return v > 0.0 ? v : 0.0;
}

}  // namespace

double ClosedFormProblem::eigenfunction(int k, double theta) const {
  if (setting == ClosedFormSetting::HalfCircleDirichletDirac) {
    if (k != 0) throw std::invalid_argument("oracle: half-circle problem has a single eigenfunction");
    return tent(theta, kPi / 2);
  }
  if (k == 0) return 1.0;
  if (k == 1) return 1.0 - 2.0 * std::fabs(theta) / kPi;  // 1 at theta = 0, -1 at +-pi
  throw std::invalid_argument("oracle: two-Dirac problem has two eigenfunctions");
}

double ClosedFormProblem::mu_norm(int k) const {
  if (setting == ClosedFormSetting::HalfCircleDirichletDirac) {
    if (k != 0) throw std::invalid_argument("oracle: eigenfunction index out of range");
    return 1.0;  // |phi(0)| = 1 at the single atom
  }
  if (k != 0 && k != 1) throw std::invalid_argument("oracle: eigenfunction index out of range");
  return std::sqrt(2.0);  // values (1, 1) resp. (1, -1) at the two atoms
}

double ClosedFormProblem::eigenfunction_mu_normalized(int k, double theta) const {
  return eigenfunction(k, theta) / mu_norm(k);
}

ClosedFormProblem oracle_eigen(ClosedFormSetting setting) {
  ClosedFormProblem p;
  p.setting = setting;
  if (setting == ClosedFormSetting::HalfCircleDirichletDirac)
    p.eigenvalues = {4.0 / kPi};
  else
    p.eigenvalues = {0.0, 4.0 / kPi};
  return p;
}

Complex oracle_solution(ClosedFormSetting setting, Equation eq, const OracleParams& params,
                        double t, double theta) {
  ClosedFormProblem p = oracle_eigen(setting);
  const double lambda = 4.0 / kPi;
  const Complex i_unit(0.0, 1.0);

  if (setting == ClosedFormSetting::HalfCircleDirichletDirac) {
    const double phi = p.eigenfunction(0, theta);
    switch (eq) {
      case Equation::Wave:
        return phi / 4.0 * std::cos(2.0 * t / std::sqrt(kPi));
      case Equation::Heat:
        return phi / 4.0 * (std::exp(-lambda * t) * (1.0 - params.c * kPi) + params.c * kPi);
      case Equation::Schrodinger:
        return phi / 4.0 * std::exp(-i_unit * lambda * t);
    }
  } else {
    const double phi2 = p.eigenfunction(1, theta);
    switch (eq) {
      case Equation::Wave:
        return phi2 / 4.0 * std::cos(2.0 * t / std::sqrt(kPi));
      case Equation::Heat:
        return params.c1 +
               phi2 * (std::exp(-lambda * t) * (params.c2 - kPi / 4.0 * params.c) +
                       kPi / 4.0 * params.c);
      case Equation::Schrodinger:
        return phi2 / 4.0 * std::exp(-i_unit * lambda * t);
    }
  }
  throw std::invalid_argument("oracle_solution: unknown setting/equation combination");
}

}  // namespace kfm
