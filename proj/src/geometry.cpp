#include "kfm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace kfm {

namespace {

constexpr double kPi = 3.14159265358979323846;

double clamp_unit(double x) { return std::min(1.0, std::max(-1.0, x)); }

void require_manifold(const ChartPoint& p, const ChartPoint& q, Manifold m, const char* op) {
  if (p.manifold != m || q.manifold != m)
    throw std::domain_error(std::string(op) + ": points are not on the expected manifold");
}

double wrap_unit(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r -= 1.0;  // guards x = -eps rounding to 1.0
  return r;
}

}  // namespace

ChartPoint ChartPoint::circle(double theta) {
  if (!std::isfinite(theta)) throw std::invalid_argument("circle point: non-finite coordinate");
  // wrap into (-pi, pi]
  double t = std::remainder(theta, 2.0 * kPi);
  if (t <= -kPi) t = kPi;
  return ChartPoint{Manifold::Circle, t, 0.0};
}

ChartPoint ChartPoint::sphere(double phi, double theta) {
  if (!std::isfinite(phi) || !std::isfinite(theta))
    throw std::invalid_argument("sphere point: non-finite coordinate");
  if (phi < -1e-12 || phi > kPi / 2 + 1e-12)
    throw std::invalid_argument("sphere point: polar angle outside [0, pi/2]");
  phi = std::min(kPi / 2, std::max(0.0, phi));
  double t = theta - 2.0 * kPi * std::floor(theta / (2.0 * kPi));
  if (t >= 2.0 * kPi) t = 0.0;
  if (phi == 0.0) t = 0.0;  // pole canonicalization
  return ChartPoint{Manifold::UpperSphere, phi, t};
}

ChartPoint ChartPoint::torus(double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y))
    throw std::invalid_argument("torus point: non-finite coordinate");
  return ChartPoint{Manifold::Torus, wrap_unit(x), wrap_unit(y)};
}

bool same_point(const ChartPoint& p, const ChartPoint& q, double tol) {
  if (p.manifold != q.manifold) return false;
  return distance(p, q) <= tol;
}

SphereAngles sphere_angles(const ChartPoint& p, const ChartPoint& q) {
  require_manifold(p, q, Manifold::UpperSphere, "sphere_angles");
  double phi1 = std::max(p.c0, q.c0);
  double phi2 = std::min(p.c0, q.c0);
  return SphereAngles{kPi / 2 - phi1, kPi / 2 - phi2, std::fabs(p.c1 - q.c1)};
}

double sphere_distance_trig(double sa, double ca, double sb, double cb, double dtheta) {
  return std::acos(clamp_unit(sa * sb + ca * cb * std::cos(std::fabs(dtheta))));
}

double sphere_distance(const ChartPoint& p, const ChartPoint& q) {
  SphereAngles g = sphere_angles(p, q);
  // arccos loses half the digits near coincident points; canonicalized equality
  // must come out as exactly zero
  if (p.c0 == q.c0 && p.c1 == q.c1) return 0.0;
  return sphere_distance_trig(std::sin(g.a), std::cos(g.a), std::sin(g.b), std::cos(g.b), g.alpha);
}

double torus_distance(const ChartPoint& p, const ChartPoint& q) {
  require_manifold(p, q, Manifold::Torus, "torus_distance");
  double best = std::numeric_limits<double>::infinity();
  for (int kx = -1; kx <= 1; ++kx)
    for (int ky = -1; ky <= 1; ++ky) {
      double dx = p.c0 - q.c0 + kx;
      double dy = p.c1 - q.c1 + ky;
      best = std::min(best, std::hypot(dx, dy));
    }
  return best;
}

double circle_distance(const ChartPoint& p, const ChartPoint& q) {
  require_manifold(p, q, Manifold::Circle, "circle_distance");
  double d = std::fabs(p.c0 - q.c0);
  return std::min(d, 2.0 * kPi - d);
}

double distance(const ChartPoint& p, const ChartPoint& q) {
  if (p.manifold != q.manifold) throw std::domain_error("distance: mismatched manifolds");
  switch (p.manifold) {
    case Manifold::Circle: return circle_distance(p, q);
    case Manifold::UpperSphere: return sphere_distance(p, q);
    case Manifold::Torus: return torus_distance(p, q);
  }
  throw std::logic_error("distance: unknown manifold");
}

ChartPoint sphere_halving_map(const ChartPoint& p) {
  if (p.manifold != Manifold::UpperSphere)
    throw std::domain_error("sphere_halving_map: point not on the upper sphere");
  return ChartPoint::sphere(p.c0 / 2.0, p.c1);
}

std::array<double, 3> sphere_to_euclidean(const ChartPoint& p) {
  if (p.manifold != Manifold::UpperSphere)
    throw std::domain_error("sphere_to_euclidean: point not on the upper sphere");
  double sp = std::sin(p.c0), cp = std::cos(p.c0);
  return {sp * std::cos(p.c1), sp * std::sin(p.c1), cp};
}

ChartPoint sphere_from_euclidean(const std::array<double, 3>& v) {
  double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  if (n == 0.0) throw std::invalid_argument("sphere_from_euclidean: zero vector");
  double z = v[2] / n;
  if (z < -1e-12) throw std::domain_error("sphere_from_euclidean: point leaves the upper hemisphere");
  double phi = std::acos(clamp_unit(z));
  double theta = std::atan2(v[1], v[0]);
  if (theta < 0) theta += 2.0 * kPi;
  if (std::sin(phi) < 1e-15) {  // pole
    phi = 0.0;
    theta = 0.0;
  }
  return ChartPoint::sphere(phi, theta);
}

ChartPoint rotate(const ChartPoint& p, Axis axis, double angle) {
  auto v = sphere_to_euclidean(p);
  double c = std::cos(angle), s = std::sin(angle);
  std::array<double, 3> w;
  if (axis == Axis::X) {
    w = {v[0], c * v[1] - s * v[2], s * v[1] + c * v[2]};
  } else {
    w = {c * v[0] + s * v[2], v[1], -s * v[0] + c * v[2]};
  }
  if (w[2] < -1e-12) throw std::domain_error("rotate: image leaves the upper-hemisphere chart");
  if (w[2] < 0) w[2] = 0.0;
  return sphere_from_euclidean(w);
}

}  // namespace kfm
