#ifndef KFM_MEASURE_HPP
#define KFM_MEASURE_HPP

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "kfm/geometry.hpp"

namespace kfm {

struct Atom {
  ChartPoint point;
  double weight;
};

enum class ProvenanceKind { Atomic, IFSDepth, GIFSDepth };

struct Provenance {
  ProvenanceKind kind = ProvenanceKind::Atomic;
  int depth = 0;
  double normalization = 1.0;  // mass divided out after construction (GIFS union: 12)
};

/** Weighted atom cloud approximating a finite positive Borel measure.
 *  Exact for Dirac combinations; depth-L word expansion for IFS/GIFS measures. */
class DiscreteMeasure {
 public:
  DiscreteMeasure(std::vector<Atom> atoms, Provenance prov);

  const std::vector<Atom>& atoms() const { return atoms_; }
  double total_mass() const { return total_mass_; }
  Manifold manifold() const { return manifold_; }
  const Provenance& provenance() const { return prov_; }

  /// Smallest nonzero pairwise atom distance; 0 when fewer than two atoms.
  double min_atom_gap() const;

 private:
  std::vector<Atom> atoms_;
  double total_mass_;
  Manifold manifold_;
  Provenance prov_;
};

DiscreteMeasure dirac_measure(std::span<const ChartPoint> points, std::span<const double> weights);

/// One IFS branch: the polar halving map followed by an optional axis rotation.
struct IfsMap {
  std::optional<std::pair<Axis, double>> rotation;
  ChartPoint apply(const ChartPoint& p) const;
};

struct IFSSpec {
  std::vector<IfsMap> maps;
  std::vector<double> probabilities;  // strictly positive, sums to 1
  void validate() const;
};

/// The three-branch quarter-sphere system: halving, then R_y(pi/4) or R_x(-pi/4).
IFSSpec quarter_sphere_ifs(std::vector<double> probabilities = {});

/** Depth-L word expansion of the IFS invariant measure: one atom per word
 *  tau = (i_1,...,i_L) in lexicographic order, at f_{i_1}(...f_{i_L}(seed)),
 *  with weight p_{i_1}...p_{i_L}. */
DiscreteMeasure ifs_invariant_measure(const IFSSpec& spec, const ChartPoint& seed, int depth);

struct BallQuery {
  ChartPoint center;
  double radius;  // > 0
};

/// Total weight of atoms at strict distance < radius from the center (open ball).
double ball_mass(const DiscreteMeasure& m, const BallQuery& q);

/// Max of ball_mass over the candidate centers.
double sup_ball_mass(const DiscreteMeasure& m, double radius, std::span<const ChartPoint> centers);

}  // namespace kfm

#endif
