#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "kfm/oracle.hpp"

using namespace kfm;

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("half-circle eigenpair") {
  ClosedFormProblem p = oracle_eigen(ClosedFormSetting::HalfCircleDirichletDirac);
  REQUIRE(p.eigenvalues.size() == 1);
  CHECK(p.eigenvalues[0] == doctest::Approx(4.0 / kPi).epsilon(1e-16));
  CHECK(p.eigenfunction(0, 0.0) == 1.0);
  CHECK(p.eigenfunction(0, kPi / 2) == doctest::Approx(0.0));
  CHECK(p.eigenfunction(0, -kPi / 2) == doctest::Approx(0.0));
  CHECK(p.mu_norm(0) == 1.0);
  // slope magnitude 2/pi away from the atom
  double d = (p.eigenfunction(0, 0.3 + 1e-6) - p.eigenfunction(0, 0.3)) / 1e-6;
  CHECK(d == doctest::Approx(-2.0 / kPi).epsilon(1e-6));
  double d2 = (p.eigenfunction(0, -0.3 + 1e-6) - p.eigenfunction(0, -0.3)) / 1e-6;
  CHECK(d2 == doctest::Approx(2.0 / kPi).epsilon(1e-6));
}

TEST_CASE("two-Dirac eigenpairs") {
  ClosedFormProblem p = oracle_eigen(ClosedFormSetting::FullCircleTwoDirac);
  REQUIRE(p.eigenvalues.size() == 2);
  CHECK(p.eigenvalues[0] == 0.0);
  CHECK(p.eigenvalues[1] == doctest::Approx(4.0 / kPi).epsilon(1e-16));
  CHECK(p.eigenfunction(0, 1.234) == 1.0);
  CHECK(p.eigenfunction(1, 0.0) == 1.0);
  CHECK(p.eigenfunction(1, kPi) == doctest::Approx(-1.0));
  CHECK(p.eigenfunction(1, -kPi) == doctest::Approx(-1.0));
  CHECK(p.mu_norm(0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(p.mu_norm(1) == doctest::Approx(std::sqrt(2.0)));
  CHECK(p.eigenfunction_mu_normalized(1, 0.0) == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("kink condition at the atom") {
  // the slope jump at the point mass equals -lambda * value
  for (auto setting : {ClosedFormSetting::HalfCircleDirichletDirac,
                       ClosedFormSetting::FullCircleTwoDirac}) {
    ClosedFormProblem p = oracle_eigen(setting);
    int k = setting == ClosedFormSetting::HalfCircleDirichletDirac ? 0 : 1;
    double lambda = p.eigenvalues[k];
    double eps = 1e-7;
    double slope_right = (p.eigenfunction(k, eps) - p.eigenfunction(k, 0.0)) / eps;
    double slope_left = (p.eigenfunction(k, 0.0) - p.eigenfunction(k, -eps)) / eps;
    CHECK(slope_right - slope_left == doctest::Approx(-lambda * p.eigenfunction(k, 0.0)).epsilon(1e-6));
  }
}

TEST_CASE("sampled oracle eigenfunctions satisfy the discrete pencil") {
  for (bool half : {true, false}) {
    auto setting = half ? ClosedFormSetting::HalfCircleDirichletDirac
                        : ClosedFormSetting::FullCircleTwoDirac;
    ClosedFormProblem oracle = oracle_eigen(setting);
    DiscreteMeasure mu =
        half ? dirac_measure(std::vector<ChartPoint>{ChartPoint::circle(0.0)},
                             std::vector<double>{1.0})
             : dirac_measure(std::vector<ChartPoint>{ChartPoint::circle(0.0), ChartPoint::circle(kPi)},
                             std::vector<double>{1.0, 1.0});
    Domain domain = half ? Domain(ArcDomain{-kPi / 2, kPi / 2}) : Domain(FullCircleDomain{});
    std::vector<double> required;
    for (const Atom& a : mu.atoms()) required.push_back(a.point.c0);
    Mesh1D mesh = build_mesh(domain, 10, required);
    PencilMatrices p = assemble(mesh, mu);

    for (size_t k = 0; k < oracle.eigenvalues.size(); ++k) {
      std::vector<double> x(p.free_nodes.size());
      for (size_t f = 0; f < p.free_nodes.size(); ++f)
        x[f] = oracle.eigenfunction(static_cast<int>(k), mesh.nodes[p.free_nodes[f]]);
      std::vector<double> kx = p.stiffness.multiply(x);
      std::vector<double> mx = p.mass.multiply(x);
      for (size_t f = 0; f < x.size(); ++f)
        CHECK(std::fabs(kx[f] - oracle.eigenvalues[k] * mx[f]) <= 1e-12);
    }
  }
}

TEST_CASE("closed-form solution values") {
  OracleParams none;
  // initial data
  CHECK(oracle_solution(ClosedFormSetting::HalfCircleDirichletDirac, Equation::Wave, none, 0.0, 0.0)
            .real() == doctest::Approx(0.25));
  // heat equilibrium at c = 1/8 approaches phi * pi / 32
  OracleParams heat;
  heat.c = 1.0 / 8.0;
  Complex late = oracle_solution(ClosedFormSetting::HalfCircleDirichletDirac, Equation::Heat, heat,
                                 100.0, 0.0);
  CHECK(late.real() == doctest::Approx(kPi / 32.0).epsilon(1e-12));
  // two-Dirac heat with unit coefficients at t = pi/4
  OracleParams combo;
  combo.c1 = 1.0;
  combo.c2 = 1.0;
  Complex quarter = oracle_solution(ClosedFormSetting::FullCircleTwoDirac, Equation::Heat, combo,
                                    kPi / 4.0, 0.0);
  CHECK(quarter.real() == doctest::Approx(1.0 + std::exp(-1.0)).epsilon(1e-14));
  // Schrodinger phases: -i phi/4 at pi^2/8 and -phi/4 at pi^2/4
  Complex at8 = oracle_solution(ClosedFormSetting::HalfCircleDirichletDirac, Equation::Schrodinger,
                                none, kPi * kPi / 8.0, 0.0);
  CHECK(std::abs(at8 - Complex(0, -0.25)) <= 1e-14);
  Complex at4 = oracle_solution(ClosedFormSetting::HalfCircleDirichletDirac, Equation::Schrodinger,
                                none, kPi * kPi / 4.0, 0.0);
  CHECK(std::abs(at4 - Complex(-0.25, 0)) <= 1e-14);
}

TEST_CASE("oracle trajectories pass the weak-form residual under refinement") {
  auto basis = [&] {
    DiscreteMeasure mu = dirac_measure(std::vector<ChartPoint>{ChartPoint::circle(0.0)},
                                       std::vector<double>{1.0});
    Mesh1D mesh = build_mesh(ArcDomain{-kPi / 2, kPi / 2}, 16, std::vector<double>{0.0});
    return std::make_shared<const SpectralBasis>(solve_pencil(assemble(mesh, mu), 1.0));
  }();
  // build trajectories by sampling the closed form into coefficient space
  auto sampled_traj = [&](Equation eq, int steps) {
    Trajectory traj;
    traj.basis = basis;
    traj.equation = eq;
    OracleParams none;
    for (int s = 0; s <= steps; ++s) {
      double t = 2.0 * s / steps;
      traj.times.push_back(t);
      CoefVec c = zero_coefvec(basis);
      c.a[0] = oracle_solution(ClosedFormSetting::HalfCircleDirichletDirac, eq, none, t, 0.0);
      traj.states.push_back(std::move(c));
    }
    return traj;
  };
  for (Equation eq : {Equation::Wave, Equation::Heat, Equation::Schrodinger}) {
    double coarse = weak_residual(sampled_traj(eq, 64), eq, ForcingTerm::zero(), 0);
    double fine = weak_residual(sampled_traj(eq, 128), eq, ForcingTerm::zero(), 0);
    CHECK(fine < coarse);
    CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.2));
  }
}

TEST_CASE("unknown combinations are rejected") {
  ClosedFormProblem p = oracle_eigen(ClosedFormSetting::HalfCircleDirichletDirac);
  CHECK_THROWS_AS(static_cast<void>(p.eigenfunction(1, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(static_cast<void>(p.mu_norm(2)), std::invalid_argument);
}

}  // TEST_SUITE
