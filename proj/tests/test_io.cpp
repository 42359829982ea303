#include <doctest.h>

#include <stdexcept>

#include <charconv>
#include <cmath>
#include <random>

#include "kfm/io.hpp"

using namespace kfm;

namespace {

constexpr double kPi = 3.14159265358979323846;

Trajectory small_trajectory() {
  DiscreteMeasure mu = dirac_measure(
      std::vector<ChartPoint>{ChartPoint::circle(0.0), ChartPoint::circle(kPi)},
      std::vector<double>{1.0, 1.0});
  Mesh1D mesh = build_mesh(FullCircleDomain{}, 8, std::vector<double>{0.0, kPi});
  auto basis = std::make_shared<const SpectralBasis>(solve_pencil(assemble(mesh, mu), 1.0));
  CoefVec g = zero_coefvec(basis);
  g.a[0] = Complex(0.3, 0.1);
  g.a[1] = Complex(-0.2, 0.7);
  return schrodinger_evolve(g, ForcingTerm::zero(), 1.0, 12);
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("shortest round-trip decimals") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 500; ++i) {
    double x = u(rng) * std::pow(10.0, static_cast<int>(u(rng)) % 12);
    std::string s = format_double(x);
    double back = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), back);
    REQUIRE(ec == std::errc{});
    CHECK(back == x);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
}

TEST_CASE("trajectory csv round trip") {
  Trajectory traj = small_trajectory();
  std::string csv = trajectory_to_csv(traj);
  ParsedTrajectory parsed = trajectory_from_csv(csv);
  REQUIRE(parsed.times.size() == traj.times.size());
  for (size_t s = 0; s < traj.times.size(); ++s) {
    CHECK(parsed.times[s] == traj.times[s]);
    for (int k = 0; k < traj.basis->count(); ++k)
      CHECK(parsed.coefficients[s][k] == traj.states[s].a[k]);  // exact round trip
    // norm columns reproduce the recomputed coefficient norms
    CoefVec c;
    c.basis = traj.basis;
    c.a = parsed.coefficients[s];
    Norms n = norms(c);
    CHECK(std::fabs(parsed.norm_mu[s] - n.mu) <= 1e-12);
    CHECK(std::fabs(parsed.norm_dom_e[s] - n.dom_e) <= 1e-12);
  }
  CHECK(parsed.energy.empty());  // not a wave run
}

TEST_CASE("csv parser rejects malformed input") {
  CHECK_THROWS_AS(static_cast<void>(trajectory_from_csv("")), std::runtime_error);
  CHECK_THROWS_AS(static_cast<void>(trajectory_from_csv("t,re_a0,im_a0,mu,domE\n1,2\n")),
                  std::runtime_error);
  CHECK_THROWS_AS(static_cast<void>(trajectory_from_csv("t,re_a0,im_a0,mu,domE\n1,x,0,0,0\n")),
                  std::runtime_error);
}

}  // TEST_SUITE
