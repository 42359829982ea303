#include "kfm/semilinear.hpp"

#include <cmath>
#include <stdexcept>

namespace kfm {

Nonlinearity Nonlinearity::linear(double c) {
  Nonlinearity f;
  f.kind = Kind::Linear;
  f.linear_c = c;
  f.lipschitz_bound = std::fabs(c);
  return f;
}

Nonlinearity Nonlinearity::pointwise(const std::string& name) {
  if (name != "sin" && name != "tanh")
    throw std::invalid_argument("nonlinearity: unknown pointwise map '" + name + "'");
  Nonlinearity f;
  f.kind = Kind::Pointwise;
  f.name = name;
  f.lipschitz_bound = 1.0;
  return f;
}

Complex Nonlinearity::apply(Complex u) const {
  if (kind == Kind::Linear) return linear_c * u;
  if (name == "sin") return std::sin(u);
  return std::tanh(u);
}

std::vector<double> contraction_report(std::span<const double> difference_norms) {
  if (difference_norms.size() < 2)
    throw std::invalid_argument("contraction_report: need at least two iterations");
  std::vector<double> ratios;
  for (size_t m = 1; m < difference_norms.size(); ++m) {
    double prev = difference_norms[m - 1];
    ratios.push_back(prev > 0.0 ? difference_norms[m] / prev : 0.0);
  }
  return ratios;
}

namespace {

/// Sup-in-t iteration metric: dom E norm, plus the mu norm of the zero modes.
double iteration_metric(const SpectralBasis& basis, const std::vector<Complex>& a,
                        const std::vector<Complex>& b) {
  double dom = 0.0, zero = 0.0;
  for (size_t k = 0; k < a.size(); ++k) {
    double d2 = std::norm(a[k] - b[k]);
    if (basis.eigenvalues[k] > 0.0)
      dom += basis.eigenvalues[k] * d2;
    else
      zero += d2;
  }
  return std::sqrt(dom) + std::sqrt(zero);
}

std::vector<std::vector<Complex>> forcing_from_iterate(const SpectralBasis& basis,
                                                       const Nonlinearity& f_map,
                                                       const std::vector<std::vector<Complex>>& states) {
  const int n_modes = basis.count();
  const size_t n_atoms = basis.atom_nodes.size();
  std::vector<std::vector<Complex>> forcing(states.size(), std::vector<Complex>(n_modes));
  std::vector<Complex> nodal(n_atoms);
  for (size_t q = 0; q < states.size(); ++q) {
    for (size_t a = 0; a < n_atoms; ++a) {
      Complex u(0, 0);
      for (int k = 0; k < n_modes; ++k)
        u += states[q][k] * basis.vectors[k][basis.atom_nodes[a]];
      nodal[a] = f_map.apply(u);
    }
    for (int k = 0; k < n_modes; ++k) {
      Complex s(0, 0);
      for (size_t a = 0; a < n_atoms; ++a)
        s += basis.atom_weights[a] * basis.vectors[k][basis.atom_nodes[a]] * nodal[a];
      forcing[q][k] = s;
    }
  }
  return forcing;
}

struct SliceResult {
  bool converged = false;
  GridEvolution evolution;
  std::vector<double> diffs;
  int iterations = 0;
};

SliceResult picard_slice(Equation eq, const CoefVec& g0, const std::vector<Complex>& h0,
                         const Nonlinearity& f_map, double len, const PicardConfig& cfg) {
  const SpectralBasis& basis = *g0.basis;
  const int steps = cfg.quad_steps;
  const double dt = len / steps;

  SliceResult r;
  GridEvolution current = evolve_sampled(eq, g0, h0, {}, dt, steps);  // F == 0 start
  for (int m = 0; m < cfg.max_iter; ++m) {
    auto forcing = forcing_from_iterate(basis, f_map, current.states);
    GridEvolution next = evolve_sampled(eq, g0, h0, forcing, dt, steps);
    double diff = 0.0;
    for (int q = 0; q <= steps; ++q)
      diff = std::max(diff, iteration_metric(basis, next.states[q], current.states[q]));
    current = std::move(next);
    r.diffs.push_back(diff);
    ++r.iterations;
    if (diff < cfg.tol) {
      r.converged = true;
      break;
    }
  }
  r.evolution = std::move(current);
  return r;
}

}  // namespace

std::pair<Trajectory, PicardReport> picard_solve(Equation eq, const CoefVec& g,
                                                 const std::optional<CoefVec>& h,
                                                 const Nonlinearity& f_map, double T,
                                                 const PicardConfig& cfg) {
  if (!g.basis) throw std::invalid_argument("picard_solve: initial data has no basis");
  if ((eq == Equation::Wave) != h.has_value())
    throw std::invalid_argument("picard_solve: velocity data must be given exactly for the wave equation");
  if (!(T > 0.0)) throw std::invalid_argument("picard_solve: horizon must be positive");
  if (!(cfg.tol > 0.0) || cfg.max_iter < 1 || cfg.time_slices < 1 || cfg.quad_steps < 2)
    throw std::invalid_argument("picard_solve: invalid configuration");

  Trajectory traj;
  traj.basis = g.basis;
  traj.equation = eq;
  PicardReport report;

  CoefVec state = g;
  std::vector<Complex> velocity =
      h ? h->a : std::vector<Complex>(static_cast<size_t>(g.size()), Complex(0, 0));

  struct Segment {
    double t0, len;
    int bisections;
  };
  std::vector<Segment> pending;
  const double base_len = T / cfg.time_slices;
  for (int s = cfg.time_slices - 1; s >= 0; --s)
    pending.push_back({s * base_len, base_len, 0});

  auto push_state = [&](double t, const std::vector<Complex>& a, const std::vector<Complex>& v) {
    CoefVec c;
    c.basis = traj.basis;
    c.a = a;
    Norms nm = norms(c);
    traj.times.push_back(t);
    traj.norm_mu.push_back(nm.mu);
    traj.norm_dom_e.push_back(nm.dom_e);
    if (eq == Equation::Wave) {
      CoefVec w;
      w.basis = traj.basis;
      w.a = v;
      Norms nv = norms(w);
      traj.energy.push_back(0.5 * nv.mu * nv.mu + 0.5 * nm.dom_e * nm.dom_e);
      traj.velocity_norm_mu.push_back(nv.mu);
      traj.velocity_norm_dual.push_back(nv.dual);
      traj.velocities.push_back(std::move(w));
    }
    traj.states.push_back(std::move(c));
  };

  push_state(0.0, state.a, velocity);

  while (!pending.empty()) {
    Segment seg = pending.back();
    pending.pop_back();
    SliceResult sr = picard_slice(eq, state, eq == Equation::Wave ? velocity : std::vector<Complex>{},
                                  f_map, seg.len, cfg);
    report.total_iterations += sr.iterations;
    if (!sr.converged) {
      if (seg.bisections >= cfg.max_bisections)
        throw std::runtime_error(
            "picard_solve: no contraction on the smallest allowed time slice; "
            "the nonlinearity is too stiff for this horizon");
      pending.push_back({seg.t0 + seg.len / 2, seg.len / 2, seg.bisections + 1});
      pending.push_back({seg.t0, seg.len / 2, seg.bisections + 1});
      continue;
    }
    report.difference_norms.insert(report.difference_norms.end(), sr.diffs.begin(), sr.diffs.end());
    ++report.slices_used;
    const double dt = seg.len / cfg.quad_steps;
    for (int q = 1; q <= cfg.quad_steps; ++q)
      push_state(seg.t0 + q * dt, sr.evolution.states[q],
                 eq == Equation::Wave ? sr.evolution.velocities[q] : std::vector<Complex>{});
    state.a = sr.evolution.states.back();
    if (eq == Equation::Wave) velocity = sr.evolution.velocities.back();
  }

  report.converged = true;
  if (report.difference_norms.size() >= 2) {
    report.contraction_ratios = contraction_report(report.difference_norms);
    for (double r : report.contraction_ratios)
      if (r >= 1.0) report.expansion_seen = true;
  }
  return {std::move(traj), std::move(report)};
}

}  // namespace kfm
