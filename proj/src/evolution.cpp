#include "kfm/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kfm {

namespace {

void require_basis(const CoefVec& c) {
  if (!c.basis) throw std::invalid_argument("coefficient vector has no basis");
  if (c.size() != c.basis->count())
    throw std::invalid_argument("coefficient vector length does not match the basis");
}

void require_shared(const CoefVec& a, const CoefVec& b, const char* op) {
  if (a.basis != b.basis) throw std::invalid_argument(std::string(op) + ": inputs on different bases");
}

std::vector<double> mode_terms_mu(const CoefVec& c) {
  std::vector<double> t(c.a.size());
  for (size_t k = 0; k < c.a.size(); ++k) t[k] = std::norm(c.a[k]);
  return t;
}

}  // namespace

Norms norms(const CoefVec& c) {
  require_basis(c);
  const auto& lambda = c.basis->eigenvalues;
  std::vector<double> mu_terms = mode_terms_mu(c);
  std::vector<double> dom_terms(c.a.size()), dual_terms;
  for (size_t k = 0; k < c.a.size(); ++k) {
    dom_terms[k] = lambda[k] * mu_terms[k];
    if (lambda[k] > 0.0) dual_terms.push_back(mu_terms[k] / lambda[k]);
  }
  return Norms{std::sqrt(pairwise_sum(mu_terms)), std::sqrt(pairwise_sum(dom_terms)),
               std::sqrt(pairwise_sum(dual_terms))};
}

double ealpha_norm(const CoefVec& c, double alpha) {
  require_basis(c);
  if (alpha < 0.0) throw std::invalid_argument("ealpha_norm: alpha must be nonnegative");
  const auto& lambda = c.basis->eigenvalues;
  std::vector<double> terms;
  terms.reserve(c.a.size());
  for (size_t k = 0; k < c.a.size(); ++k) {
    if (lambda[k] > 0.0)
      terms.push_back(std::pow(lambda[k], alpha) * std::norm(c.a[k]));
    else if (alpha == 0.0)
      terms.push_back(std::norm(c.a[k]));  // E_0 = L^2 keeps the zero modes
  }
  return std::sqrt(pairwise_sum(terms));
}

ForcingTerm ForcingTerm::zero() { return ForcingTerm{}; }

ForcingTerm ForcingTerm::constant(CoefVec c) {
  require_basis(c);
  ForcingTerm f;
  f.kind_ = Kind::Constant;
  f.constant_ = std::move(c);
  return f;
}

ForcingTerm ForcingTerm::sampled(std::vector<double> times, std::vector<CoefVec> values) {
  if (times.size() < 2 || times.size() != values.size())
    throw std::invalid_argument("forcing: need matching time and value grids with at least 2 samples");
  for (size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw std::invalid_argument("forcing: sample times must be strictly increasing");
  for (const CoefVec& v : values) require_basis(v);
  for (size_t i = 1; i < values.size(); ++i) require_shared(values[0], values[i], "forcing");
  ForcingTerm f;
  f.kind_ = Kind::Sampled;
  f.times_ = std::move(times);
  f.values_ = std::move(values);
  return f;
}

std::vector<Complex> ForcingTerm::coefficients(int n_modes, double t) const {
  if (kind_ == Kind::Zero) return std::vector<Complex>(n_modes, Complex(0, 0));
  if (kind_ == Kind::Constant) {
    if (constant_.size() != n_modes) throw std::invalid_argument("forcing: mode count mismatch");
    return constant_.a;
  }
  if (values_.front().size() != n_modes) throw std::invalid_argument("forcing: mode count mismatch");
  if (t <= times_.front()) return values_.front().a;
  if (t >= times_.back()) return values_.back().a;
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  size_t hi = static_cast<size_t>(it - times_.begin());
  size_t lo = hi - 1;
  double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
  std::vector<Complex> out(n_modes);
  for (int k = 0; k < n_modes; ++k)
    out[k] = (1.0 - w) * values_[lo].a[k] + w * values_[hi].a[k];
  return out;
}

std::shared_ptr<const SpectralBasis> ForcingTerm::basis() const {
  if (kind_ == Kind::Constant) return constant_.basis;
  if (kind_ == Kind::Sampled) return values_.front().basis;
  return nullptr;
}

const char* ForcingTerm::describe() const {
  switch (kind_) {
    case Kind::Zero: return "zero";
    case Kind::Constant: return "constant";
    case Kind::Sampled: return "sampled";
  }
  return "unknown";
}

Complex prefix_integral(std::span<const Complex> samples, double dt, int q) {
  const int n_avail = static_cast<int>(samples.size());
  if (q < 0 || q + 1 > n_avail) throw std::invalid_argument("prefix_integral: not enough samples");
  if (q == 0) return Complex(0, 0);
  if (q == 1) {
    if (n_avail >= 3)  // quadratic through the first three samples, integrated over [0, dt]
      return dt * (5.0 / 12.0 * samples[0] + 8.0 / 12.0 * samples[1] - 1.0 / 12.0 * samples[2]);
    return dt * 0.5 * (samples[0] + samples[1]);
  }
  Complex total(0, 0);
  int even_end = (q % 2 == 0) ? q : q - 3;
  for (int i = 0; i + 2 <= even_end; i += 2)
    total += dt / 3.0 * (samples[i] + 4.0 * samples[i + 1] + samples[i + 2]);
  if (q % 2 != 0) {
    const int i = q - 3;  // three-eighths rule over the last three intervals
    total += 3.0 * dt / 8.0 *
             (samples[i] + 3.0 * samples[i + 1] + 3.0 * samples[i + 2] + samples[i + 3]);
  }
  return total;
}

namespace {

using EvolveResult = GridEvolution;

/** Per-mode exact-in-time propagation on a uniform grid; the Duhamel term is a
 *  prefix quadrature of kernel(t_s - tau) * gamma(tau) over the same grid. */
EvolveResult evolve_on_grid(Equation eq, const SpectralBasis& basis,
                            const std::vector<Complex>& alpha, const std::vector<Complex>& beta,
                            const std::vector<std::vector<Complex>>& forcing, double dt, int steps) {
  const int n_modes = basis.count();
  EvolveResult r;
  r.states.assign(steps + 1, std::vector<Complex>(n_modes));
  if (eq == Equation::Wave) r.velocities.assign(steps + 1, std::vector<Complex>(n_modes));

  std::vector<Complex> integrand(steps + 1);
  std::vector<Complex> integrand_vel(steps + 1);
  const Complex i_unit(0.0, 1.0);

  for (int k = 0; k < n_modes; ++k) {
    const double lambda = basis.eigenvalues[k];
    const double omega = std::sqrt(std::max(lambda, 0.0));
    for (int s = 0; s <= steps; ++s) {
      const double t = s * dt;
      Complex hom, hom_vel;
      switch (eq) {
        case Equation::Wave:
          if (lambda > 0.0) {
            hom = alpha[k] * std::cos(omega * t) + beta[k] * std::sin(omega * t) / omega;
            hom_vel = -alpha[k] * omega * std::sin(omega * t) + beta[k] * std::cos(omega * t);
          } else {  // zero mode: the omega -> 0 limit
            hom = alpha[k] + beta[k] * t;
            hom_vel = beta[k];
          }
          break;
        case Equation::Heat:
          hom = alpha[k] * std::exp(-lambda * t);
          break;
        case Equation::Schrodinger:
          hom = alpha[k] * std::exp(-i_unit * lambda * t);
          break;
      }

      Complex duhamel(0, 0), duhamel_vel(0, 0);
      if (!forcing.empty() && s > 0) {
        // the first-interval rule reads one sample past the prefix
        const int idx_hi = (s == 1 && steps >= 2) ? 2 : s;
        for (int q = 0; q <= idx_hi; ++q) {
          const double gap = (s - q) * dt;
          const Complex gamma = forcing[q][k];
          switch (eq) {
            case Equation::Wave:
              if (lambda > 0.0) {
                integrand[q] = std::sin(omega * gap) / omega * gamma;
                integrand_vel[q] = std::cos(omega * gap) * gamma;
              } else {
                integrand[q] = gap * gamma;
                integrand_vel[q] = gamma;
              }
              break;
            case Equation::Heat:
              integrand[q] = std::exp(-lambda * gap) * gamma;
              break;
            case Equation::Schrodinger:
              integrand[q] = -i_unit * std::exp(-i_unit * lambda * gap) * gamma;
              break;
          }
        }
        duhamel = prefix_integral(std::span<const Complex>(integrand.data(), idx_hi + 1), dt, s);
        if (eq == Equation::Wave)
          duhamel_vel =
              prefix_integral(std::span<const Complex>(integrand_vel.data(), idx_hi + 1), dt, s);
      }

      r.states[s][k] = hom + duhamel;
      if (eq == Equation::Wave) r.velocities[s][k] = hom_vel + duhamel_vel;
    }
  }
  return r;
}

std::vector<std::vector<Complex>> sample_forcing(const ForcingTerm& f, int n_modes, double dt,
                                                 int steps) {
  if (f.is_zero()) return {};
  std::vector<std::vector<Complex>> samples(steps + 1);
  for (int q = 0; q <= steps; ++q) samples[q] = f.coefficients(n_modes, q * dt);
  return samples;
}

Trajectory assemble_trajectory(Equation eq, std::shared_ptr<const SpectralBasis> basis,
                               const EvolveResult& fine, double dt_fine, int stride, int out_steps) {
  Trajectory traj;
  traj.basis = basis;
  traj.equation = eq;
  for (int s = 0; s <= out_steps; ++s) {
    const int q = s * stride;
    traj.times.push_back(q * dt_fine);
    CoefVec state;
    state.basis = basis;
    state.a = fine.states[q];
    Norms nm = norms(state);
    traj.norm_mu.push_back(nm.mu);
    traj.norm_dom_e.push_back(nm.dom_e);
    if (eq == Equation::Wave) {
      CoefVec vel;
      vel.basis = basis;
      vel.a = fine.velocities[q];
      Norms nv = norms(vel);
      traj.energy.push_back(0.5 * nv.mu * nv.mu + 0.5 * nm.dom_e * nm.dom_e);
      traj.velocity_norm_mu.push_back(nv.mu);
      traj.velocity_norm_dual.push_back(nv.dual);
      traj.velocities.push_back(std::move(vel));
    }
    traj.states.push_back(std::move(state));
  }
  return traj;
}

void validate_evolve_args(const CoefVec& g, const ForcingTerm& f, double T, int steps) {
  require_basis(g);
  if (!(T > 0.0)) throw std::invalid_argument("evolve: horizon T must be positive");
  if (steps < 1) throw std::invalid_argument("evolve: need at least one step");
  if (auto fb = f.basis(); fb && fb != g.basis)
    throw std::invalid_argument("evolve: forcing uses a different basis");
}

}  // namespace

GridEvolution evolve_sampled(Equation eq, const CoefVec& g, const std::vector<Complex>& h,
                             const std::vector<std::vector<Complex>>& forcing_samples, double dt,
                             int steps) {
  require_basis(g);
  if (eq == Equation::Wave && static_cast<int>(h.size()) != g.size())
    throw std::invalid_argument("evolve_sampled: wave needs velocity coefficients");
  if (!forcing_samples.empty() && static_cast<int>(forcing_samples.size()) != steps + 1)
    throw std::invalid_argument("evolve_sampled: forcing samples do not match the grid");
  return evolve_on_grid(eq, *g.basis, g.a, h, forcing_samples, dt, steps);
}

Trajectory wave_evolve(const CoefVec& g, const CoefVec& h, const ForcingTerm& f, double T,
                       int steps) {
  validate_evolve_args(g, f, T, steps);
  require_basis(h);
  require_shared(g, h, "wave_evolve");
  const int fine_steps = 2 * steps;
  const double dt = T / fine_steps;
  auto forcing = sample_forcing(f, g.size(), dt, fine_steps);
  auto fine = evolve_on_grid(Equation::Wave, *g.basis, g.a, h.a, forcing, dt, fine_steps);
  return assemble_trajectory(Equation::Wave, g.basis, fine, dt, 2, steps);
}

Trajectory heat_evolve(const CoefVec& g, const ForcingTerm& f, double T, int steps) {
  validate_evolve_args(g, f, T, steps);
  const int fine_steps = 2 * steps;
  const double dt = T / fine_steps;
  auto forcing = sample_forcing(f, g.size(), dt, fine_steps);
  auto fine =
      evolve_on_grid(Equation::Heat, *g.basis, g.a, {}, forcing, dt, fine_steps);
  return assemble_trajectory(Equation::Heat, g.basis, fine, dt, 2, steps);
}

Trajectory schrodinger_evolve(const CoefVec& g, const ForcingTerm& f, double T, int steps) {
  validate_evolve_args(g, f, T, steps);
  const int fine_steps = 2 * steps;
  const double dt = T / fine_steps;
  auto forcing = sample_forcing(f, g.size(), dt, fine_steps);
  auto fine = evolve_on_grid(Equation::Schrodinger, *g.basis, g.a, {}, forcing, dt, fine_steps);
  return assemble_trajectory(Equation::Schrodinger, g.basis, fine, dt, 2, steps);
}

CoefVec wave_accel(const CoefVec& g, const CoefVec& h, const ForcingTerm& f, double t) {
  require_basis(g);
  require_basis(h);
  require_shared(g, h, "wave_accel");
  if (t < 0.0) throw std::invalid_argument("wave_accel: negative time");
  CoefVec state = g;
  if (t > 0.0) {
    Trajectory traj = wave_evolve(g, h, f, t, 256);
    state = traj.states.back();
  }
  std::vector<Complex> gamma = f.coefficients(g.size(), t);
  CoefVec k = zero_coefvec(g.basis);
  for (int m = 0; m < g.size(); ++m)
    k.a[m] = gamma[m] - g.basis->eigenvalues[m] * state.a[m];
  return k;
}

double weak_residual(const Trajectory& traj, Equation eq, const ForcingTerm& f, int test_index) {
  const int n_times = static_cast<int>(traj.times.size());
  if (n_times < 3) throw std::invalid_argument("weak_residual: need at least three grid times");
  if (test_index < 0 || test_index >= traj.basis->count())
    throw std::invalid_argument("weak_residual: test index out of range");
  const double dt = traj.times[1] - traj.times[0];
  for (int s = 1; s < n_times; ++s)
    if (std::fabs(traj.times[s] - traj.times[s - 1] - dt) > 1e-12 * std::max(1.0, std::fabs(dt)))
      throw std::invalid_argument("weak_residual: non-uniform time grid");

  const double lambda = traj.basis->eigenvalues[test_index];
  const Complex i_unit(0.0, 1.0);
  double worst = 0.0;
  for (int s = 1; s + 1 < n_times; ++s) {
    const Complex c_prev = traj.states[s - 1].a[test_index];
    const Complex c_mid = traj.states[s].a[test_index];
    const Complex c_next = traj.states[s + 1].a[test_index];
    const Complex forcing_k = f.coefficients(traj.basis->count(), traj.times[s])[test_index];
    Complex residual;
    switch (eq) {
      case Equation::Wave:  // <u_tt, phi_k> + E(u, phi_k) - <f, phi_k>
        residual = (c_next - 2.0 * c_mid + c_prev) / (dt * dt) + lambda * c_mid - forcing_k;
        break;
      case Equation::Heat:  // <u_t, phi_k> + E(u, phi_k) - <f, phi_k>
        residual = (c_next - c_prev) / (2.0 * dt) + lambda * c_mid - forcing_k;
        break;
      case Equation::Schrodinger:  // <i u_t, phi_k> - E(u, phi_k) - <f, phi_k>
        residual = i_unit * (c_next - c_prev) / (2.0 * dt) - lambda * c_mid - forcing_k;
        break;
    }
    worst = std::max(worst, std::abs(residual));
  }
  return worst;
}

}  // namespace kfm
