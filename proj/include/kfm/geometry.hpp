#ifndef KFM_GEOMETRY_HPP
#define KFM_GEOMETRY_HPP

#include <array>

namespace kfm {

enum class Manifold { Circle, UpperSphere, Torus };

/** A point on one of the three model manifolds, in chart coordinates.
 *
 *  Circle:      theta in [-pi, pi] (endpoints identified);
 *  UpperSphere: polar phi in [0, pi/2], azimuth theta in [0, 2*pi), with
 *               theta canonicalized to 0 at the pole phi = 0;
 *  Torus:       (x, y) in [0,1)^2, coordinates reduced mod 1.
 */
struct ChartPoint {
  Manifold manifold;
  double c0 = 0.0;  // Circle: theta; UpperSphere: phi; Torus: x
  double c1 = 0.0;  // UpperSphere: theta; Torus: y

  static ChartPoint circle(double theta);
  static ChartPoint sphere(double phi, double theta);
  static ChartPoint torus(double x, double y);
};

bool same_point(const ChartPoint& p, const ChartPoint& q, double tol = 0.0);

/** Colatitude complements and azimuth gap of a sphere pair: a = pi/2 - phi1
 *  for the point with the larger polar angle, b >= a, alpha = |theta1 - theta2|. */
struct SphereAngles {
  double a;      // in [0, pi/2]
  double b;      // in [a, pi/2]
  double alpha;  // in [0, 2*pi)
};

SphereAngles sphere_angles(const ChartPoint& p, const ChartPoint& q);

/// Geodesic distance on the unit sphere, arccos(sin a sin b + cos a cos b cos alpha).
double sphere_distance(const ChartPoint& p, const ChartPoint& q);

/// Same formula from precomputed sin/cos of the colatitude complements.
double sphere_distance_trig(double sa, double ca, double sb, double cb, double dtheta);

/// Flat-torus distance: min over integer shifts in {-1,0,1}^2 of the lifted Euclidean distance.
double torus_distance(const ChartPoint& p, const ChartPoint& q);

/// Arc-length distance on the unit circle.
double circle_distance(const ChartPoint& p, const ChartPoint& q);

/// Distance dispatch for points on a common manifold.
double distance(const ChartPoint& p, const ChartPoint& q);

/// Polar-angle halving contraction (phi, theta) -> (phi/2, theta) on the upper sphere.
ChartPoint sphere_halving_map(const ChartPoint& p);

enum class Axis { X, Y };

/** Rotation about the x- or y-axis applied in R^3 and mapped back to the chart.
 *  Throws if the image leaves the upper hemisphere (z < 0). */
ChartPoint rotate(const ChartPoint& p, Axis axis, double angle);

std::array<double, 3> sphere_to_euclidean(const ChartPoint& p);
ChartPoint sphere_from_euclidean(const std::array<double, 3>& v);

}  // namespace kfm

#endif
