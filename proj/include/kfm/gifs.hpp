#ifndef KFM_GIFS_HPP
#define KFM_GIFS_HPP

#include <array>
#include <string>
#include <vector>

#include "kfm/measure.hpp"
#include "kfm/rational.hpp"

namespace kfm {

/// Axis-aligned rectangle [x0,x1]x[y0,y1] on the unit torus, exact corners.
struct TorusRect {
  Rat x0, x1, y0, y1;
  bool contains(const Rat& x, const Rat& y) const;          // literal membership
  bool contains_mod1(const Rat& x, const Rat& y) const;     // up to integer shifts
};

/** Directed edge src -> dst carrying the similitude S_e(x) = x/2 + d,
 *  which maps the dst cell into the src cell. */
struct GifsEdge {
  int src = 0;  // 1-based vertex ids
  int dst = 0;
  Rat dx, dy;
};

struct GIFSSpec {
  std::vector<TorusRect> cells;            // W_1..W_t
  std::vector<GifsEdge> edges;
  std::vector<Rat> edge_probabilities;     // aligned with edges

  int vertex_count() const { return static_cast<int>(cells.size()); }
  std::vector<int> out_edges(int vertex) const;  // edge indices, ascending

  /** Checks per-vertex probability row sums (exact), probability positivity,
   *  and that every edge image S_e(W_dst) lies inside W_src (exact corners).
   *  Throws with a description of the first violation. */
  void validate() const;
};

/** The 12-cell / 48-edge torus GIFS refining the four half-scale overlapping
 *  maps x/2 + {(0,1/4),(1/4,1/4),(1/2,1/4),(1/4,3/4)} mod 1, with uniform
 *  per-out-edge probabilities. */
GIFSSpec torus_gifs();

/// Rebuilds the edge table from the four overlapping maps; used to pin the shipped data.
std::vector<GifsEdge> derive_torus_edges();

struct GifsMeasures {
  std::vector<DiscreteMeasure> per_vertex;  // each mass 1
  DiscreteMeasure combined;                 // union, normalized to mass 1
};

/** Depth-L unrolling of mu_i = sum_j sum_{e in E^{i,j}} p_e mu_j o S_e^{-1},
 *  seeded with unit atoms at the cell centers. */
GifsMeasures gifs_invariant_measure(const GIFSSpec& spec, int depth);

/// Serialization of the spec as numerator/denominator pairs (the shipped data format).
std::string gifs_to_json(const GIFSSpec& spec);
GIFSSpec gifs_from_json(const std::string& text);

}  // namespace kfm

#endif
