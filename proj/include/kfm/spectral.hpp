#ifndef KFM_SPECTRAL_HPP
#define KFM_SPECTRAL_HPP

#include <complex>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "kfm/dense.hpp"
#include "kfm/measure.hpp"

namespace kfm {

/// Open arc (lo, hi) on the circle with homogeneous Dirichlet ends.
struct ArcDomain {
  double lo;
  double hi;
};

/// The whole circle; no boundary.
struct FullCircleDomain {};

using Domain = std::variant<ArcDomain, FullCircleDomain>;

/** 1-D mesh of theta nodes. Arc meshes include both endpoints; full-circle
 *  meshes list nodes in [-pi, pi) with the last element joined back to the first. */
struct Mesh1D {
  Domain domain;
  bool periodic = false;
  std::vector<double> nodes;  // strictly increasing

  int element_count() const;
  /// Index of the node matching theta (full-circle: up to the 2*pi wrap), or -1.
  int find_node(double theta, double tol = 1e-12) const;
};

Mesh1D build_mesh(const Domain& domain, int resolution, std::span<const double> required_nodes);

/** Stiffness/mass pencil of the measure Laplacian on the mesh: K from the
 *  piecewise-linear Dirichlet form in arc length, M from atom point masses.
 *  Rows/columns of Dirichlet boundary nodes are removed. */
struct PencilMatrices {
  Matrix stiffness;            // K, free nodes only
  Matrix mass;                 // M, diagonal atom weights on free nodes
  std::vector<int> free_nodes; // free index -> mesh node index
  std::vector<int> atom_nodes; // distinct mesh node indices carrying mass, ascending
  std::vector<double> atom_weights;  // aligned with atom_nodes
  Mesh1D mesh;
};

PencilMatrices assemble(const Mesh1D& mesh, const DiscreteMeasure& mu);

/** Eigenpairs (lambda_k, x_k) of K x = lambda M x with x^T M x = 1, ascending.
 *  Vectors are stored as nodal values on all mesh nodes (zeros at Dirichlet ends). */
struct SpectralBasis {
  std::vector<double> eigenvalues;
  std::vector<std::vector<double>> vectors;  // vectors[k][node]
  Mesh1D mesh;
  std::vector<int> atom_nodes;
  std::vector<double> atom_weights;

  int count() const { return static_cast<int>(eigenvalues.size()); }
  int zero_modes() const;  // eigenvalues snapped to exactly 0

  /// max_k ||K x_k - lambda_k M x_k||_inf / ||K||_inf for the retained pairs.
  double residual(const PencilMatrices& p) const;
};

/** Shift-invert reduction: A = K + sigma*M is factored A = L L^T, the
 *  congruent B = L^{-1} M L^{-T} is diagonalized by cyclic Jacobi, and
 *  eigenvalues nu of B above the cut 1e-8 * max(nu) map to lambda = 1/nu - sigma.
 *  The retained count must equal the number of distinct atom nodes. */
SpectralBasis solve_pencil(const PencilMatrices& p, double sigma = 1.0);

using Complex = std::complex<double>;

/// Coefficient expansion of a mu-measurable function in a spectral basis.
struct CoefVec {
  std::shared_ptr<const SpectralBasis> basis;
  std::vector<Complex> a;

  int size() const { return static_cast<int>(a.size()); }
};

CoefVec zero_coefvec(std::shared_ptr<const SpectralBasis> basis);

/// a_k = x_k^T M g, the measure inner product against each eigenvector.
CoefVec project(std::shared_ptr<const SpectralBasis> basis, std::span<const double> nodal_values);
CoefVec project(std::shared_ptr<const SpectralBasis> basis, std::span<const Complex> nodal_values);

/// Nodal values sum_k a_k x_k at every mesh node.
std::vector<Complex> reconstruct(const CoefVec& c);
/// Nodal values at atom nodes only (mu-a.e. determination).
std::vector<Complex> reconstruct_at_atoms(const CoefVec& c);

std::string basis_to_json(const SpectralBasis& basis);

}  // namespace kfm

#endif
