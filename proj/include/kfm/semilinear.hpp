#ifndef KFM_SEMILINEAR_HPP
#define KFM_SEMILINEAR_HPP

#include <optional>
#include <string>

#include "kfm/evolution.hpp"

namespace kfm {

/** Lipschitz nonlinearity F acting through nodal values at atom nodes.
 *  Linear(c) is u -> c*u; the named pointwise maps are sin and tanh. */
struct Nonlinearity {
  enum class Kind { Linear, Pointwise };
  Kind kind = Kind::Linear;
  double linear_c = 0.0;
  std::string name;                      // "sin" | "tanh" for Pointwise
  double lipschitz_bound = 0.0;          // advisory

  static Nonlinearity linear(double c);
  static Nonlinearity pointwise(const std::string& name);

  Complex apply(Complex u) const;
};

struct PicardConfig {
  double tol = 1e-9;          // sup-in-t iteration metric on successive differences
  int max_iter = 30;
  int time_slices = 1;        // initial interval subdivision
  int quad_steps = 128;       // trajectory/quadrature steps per slice
  int max_bisections = 12;    // slice halvings allowed on stagnation
};

struct PicardReport {
  bool converged = false;
  int total_iterations = 0;
  int slices_used = 0;
  std::vector<double> difference_norms;   // per accepted iteration, all slices concatenated
  std::vector<double> contraction_ratios; // ratios of consecutive difference norms
  bool expansion_seen = false;            // some ratio reached 1 or more
};

/** Picard iteration on the Duhamel representation of the semi-linear equation:
 *  u^{m+1} = linear part + kernel-integral of <F(u^m), phi_k>_mu. F is evaluated
 *  by reconstructing nodal values at atom nodes and projecting back. On
 *  stagnation the current slice is bisected and the solution is continued
 *  slice-by-slice from the end state. */
std::pair<Trajectory, PicardReport> picard_solve(Equation eq, const CoefVec& g,
                                                 const std::optional<CoefVec>& h,
                                                 const Nonlinearity& f_map, double T,
                                                 const PicardConfig& cfg);

/// Ratios d_{m+1}/d_m of successive difference norms; needs >= 2 entries.
std::vector<double> contraction_report(std::span<const double> difference_norms);

}  // namespace kfm

#endif
