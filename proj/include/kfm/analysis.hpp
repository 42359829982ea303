#ifndef KFM_ANALYSIS_HPP
#define KFM_ANALYSIS_HPP

#include <vector>

#include "kfm/gifs.hpp"
#include "kfm/measure.hpp"

namespace kfm {

/** ln sup-ball-mass against ln radius on a geometric ladder, with the
 *  least-squares slope standing in for the L-infinity dimension liminf. */
struct DimensionEstimate {
  std::vector<double> radii;
  std::vector<double> sup_masses;
  std::vector<double> pointwise_slopes;  // incremental log-log ratios
  double slope = 0.0;
  double slope_stderr = 0.0;
  double min_pointwise_slope = 0.0;
  bool gate = false;        // slope - stderr > n - 2
  bool degenerate = false;  // all ladder masses equal
  double ladder_floor = 0.0;  // min atom gap for depth approximations, else 0
  int levels_used = 0;
};

DimensionEstimate estimate_dim_infinity(const DiscreteMeasure& m, double delta0, double rho,
                                        int levels, int manifold_dim, int threads = 1);

struct GridPoint {
  double a, b, alpha;
};

/** Two-sided distortion bounds of the polar halving map, scanned over the
 *  colatitude-complement grid a in [0,pi/2], b in [a,pi/2], alpha in [0,2pi),
 *  with pairs closer than the cutoff excluded. */
struct BiLipschitzReport {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  GridPoint argmin{}, argmax{};
  double checkpoint_origin = 0.0;     // a,b,alpha -> 0 along a meridian
  double checkpoint_pole = 0.0;       // a = b -> pi/2
  double checkpoint_mixed = 0.0;      // a = 0, b = pi/2
  long pairs_evaluated = 0;
};

BiLipschitzReport bilipschitz_scan(int na, int nb, int nalpha, double cutoff, int threads = 1);

struct ConnectivityReport {
  bool strongly_connected = false;
  std::vector<int> witness_walk;  // closed walk visiting every vertex, when connected
};

ConnectivityReport gifs_strongly_connected(const GIFSSpec& spec);
/// Same check on a bare adjacency list (0-based), for cross-validation.
ConnectivityReport strongly_connected(const std::vector<std::vector<int>>& adjacency);

struct SRegularityViolation {
  int center_index;
  double radius;
  double mass;
  double bound;
};

struct SRegularityReport {
  double s = 0.0;
  double big_c = 0.0;
  bool vacuous = false;  // t(1-p) >= 1 makes s <= 0; no scan performed
  std::vector<SRegularityViolation> violations;
};

/** Upper s-regularity scan with s = ln(t - t p)/ln c and C = r0^{-s}:
 *  reports every atom-centered ladder ball with mu(B(x,r)) > C r^s. */
SRegularityReport s_regularity_check(const DiscreteMeasure& m, double c, double p, int t,
                                     std::span<const double> radii);

}  // namespace kfm

#endif
