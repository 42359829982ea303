#include "kfm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace kfm {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNodeTol = 1e-12;
constexpr double kNuCutFactor = 1e-8;
constexpr double kZeroSnap = 1e-9;

double wrap_to_halfopen(double theta) {
  // into [-pi, pi)
  double t = std::remainder(theta, 2.0 * kPi);
  if (t >= kPi) t -= 2.0 * kPi;
  if (t < -kPi) t += 2.0 * kPi;
  return t;
}

}  // namespace

int Mesh1D::element_count() const {
  return periodic ? static_cast<int>(nodes.size()) : static_cast<int>(nodes.size()) - 1;
}

int Mesh1D::find_node(double theta, double tol) const {
  double t = periodic ? wrap_to_halfopen(theta) : theta;
  int best = -1;
  double best_gap = tol;
  for (size_t i = 0; i < nodes.size(); ++i) {
    double gap = std::fabs(nodes[i] - t);
    if (gap <= best_gap) {
      best = static_cast<int>(i);
      best_gap = gap;
    }
  }
  if (best >= 0) return best;
  // full-circle seam: theta = pi matches the node at -pi
  if (periodic && std::fabs(t - kPi) <= tol && std::fabs(nodes.front() + kPi) <= tol) return 0;
  return -1;
}

Mesh1D build_mesh(const Domain& domain, int resolution, std::span<const double> required_nodes) {
  if (resolution < 2) throw std::invalid_argument("build_mesh: resolution must be at least 2");
  Mesh1D mesh;
  mesh.domain = domain;
  std::vector<double> nodes;

  if (const auto* arc = std::get_if<ArcDomain>(&domain)) {
    if (!(arc->lo < arc->hi)) throw std::invalid_argument("build_mesh: empty arc");
    for (int k = 0; k <= resolution; ++k)
      nodes.push_back(arc->lo + (arc->hi - arc->lo) * k / resolution);
    for (double r : required_nodes) {
      if (!(r > arc->lo + kNodeTol && r < arc->hi - kNodeTol))
        throw std::invalid_argument("build_mesh: required node outside the open arc");
      nodes.push_back(r);
    }
    mesh.periodic = false;
  } else {
    for (int k = 0; k < resolution; ++k) nodes.push_back(-kPi + 2.0 * kPi * k / resolution);
    for (double r : required_nodes) nodes.push_back(wrap_to_halfopen(r));
    mesh.periodic = true;
  }

  std::sort(nodes.begin(), nodes.end());
  std::vector<double> unique;
  for (double t : nodes)
    if (unique.empty() || t - unique.back() > kNodeTol) unique.push_back(t);
  // a required node may coincide with the seam at +pi on the full circle
  if (mesh.periodic && unique.size() > 1 && (unique.back() - unique.front()) >= 2.0 * kPi - kNodeTol)
    unique.pop_back();
  mesh.nodes = std::move(unique);
  if (static_cast<int>(mesh.nodes.size()) < 2) throw std::invalid_argument("build_mesh: degenerate mesh");
  return mesh;
}

PencilMatrices assemble(const Mesh1D& mesh, const DiscreteMeasure& mu) {
  if (mu.manifold() != Manifold::Circle)
    throw std::invalid_argument("assemble: measure must live on the circle");
  const int n_nodes = static_cast<int>(mesh.nodes.size());

  PencilMatrices p;
  p.mesh = mesh;
  if (mesh.periodic) {
    p.free_nodes.resize(n_nodes);
    for (int i = 0; i < n_nodes; ++i) p.free_nodes[i] = i;
  } else {
    for (int i = 1; i < n_nodes - 1; ++i) p.free_nodes.push_back(i);
  }
  std::vector<int> node_to_free(n_nodes, -1);
  for (size_t f = 0; f < p.free_nodes.size(); ++f) node_to_free[p.free_nodes[f]] = static_cast<int>(f);

  const int n = static_cast<int>(p.free_nodes.size());
  p.stiffness = Matrix(n);
  p.mass = Matrix(n);

  // hat-function stiffness: each element of length h contributes the 1/h stencil
  const int n_elems = mesh.element_count();
  for (int e = 0; e < n_elems; ++e) {
    int a = e;
    int b = (e + 1) % n_nodes;
    double h = mesh.nodes[(e + 1) % n_nodes] - mesh.nodes[e];
    if (b == 0) h = mesh.nodes.front() + 2.0 * kPi - mesh.nodes.back();
    if (!(h > 0.0)) throw std::invalid_argument("assemble: nonpositive element length");
    int fa = node_to_free[a], fb = node_to_free[b];
    if (fa >= 0) p.stiffness(fa, fa) += 1.0 / h;
    if (fb >= 0) p.stiffness(fb, fb) += 1.0 / h;
    if (fa >= 0 && fb >= 0) {
      p.stiffness(fa, fb) -= 1.0 / h;
      p.stiffness(fb, fa) -= 1.0 / h;
    }
  }

  // measure mass: hat functions are nodal, so atoms sitting on nodes give a diagonal
  std::map<int, double> node_mass;
  for (const Atom& a : mu.atoms()) {
    int node = mesh.find_node(a.point.c0, 1e-9);
    if (node < 0)
      throw std::invalid_argument(
          "assemble: measure atom is not a mesh node; rebuild the mesh with the atom "
          "locations as required nodes");
    if (node_to_free[node] < 0)
      throw std::invalid_argument("assemble: measure atom sits on a Dirichlet boundary node");
    node_mass[node] += a.weight;
  }
  for (const auto& [node, w] : node_mass) {
    p.mass(node_to_free[node], node_to_free[node]) += w;
    p.atom_nodes.push_back(node);
    p.atom_weights.push_back(w);
  }
  return p;
}

int SpectralBasis::zero_modes() const {
  int z = 0;
  for (double lambda : eigenvalues)
    if (lambda == 0.0) ++z;
  return z;
}

double SpectralBasis::residual(const PencilMatrices& p) const {
  const int n = static_cast<int>(p.free_nodes.size());
  double knorm = p.stiffness.inf_norm();
  if (knorm == 0.0) knorm = 1.0;
  double worst = 0.0;
  for (int k = 0; k < count(); ++k) {
    std::vector<double> x(n);
    for (int f = 0; f < n; ++f) x[f] = vectors[k][p.free_nodes[f]];
    std::vector<double> kx = p.stiffness.multiply(x);
    std::vector<double> mx = p.mass.multiply(x);
    for (int f = 0; f < n; ++f)
      worst = std::max(worst, std::fabs(kx[f] - eigenvalues[k] * mx[f]));
  }
  return worst / knorm;
}

SpectralBasis solve_pencil(const PencilMatrices& p, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("solve_pencil: shift must be positive");
  const int n = static_cast<int>(p.free_nodes.size());
  if (n == 0) throw std::invalid_argument("solve_pencil: empty pencil");

  Matrix a(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = p.stiffness(i, j) + sigma * p.mass(i, j);
  Matrix l;
  try {
    l = cholesky_factor(a);
  } catch (const std::runtime_error&) {
    throw std::runtime_error(
        "solve_pencil: K + sigma*M is not positive definite; the pencil is misconfigured");
  }

  // B = L^{-1} M L^{-T}, built column by column
  Matrix b(n);
  for (int j = 0; j < n; ++j) {
    std::vector<double> col(n);
    for (int i = 0; i < n; ++i) col[i] = p.mass(i, j);
    col = solve_lower(l, std::move(col));
    for (int i = 0; i < n; ++i) b(i, j) = col[i];
  }
  for (int i = 0; i < n; ++i) {
    std::vector<double> row(n);
    for (int j = 0; j < n; ++j) row[j] = b(i, j);
    row = solve_lower(l, std::move(row));
    for (int j = 0; j < n; ++j) b(i, j) = row[j];
  }
  // symmetrize roundoff
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double avg = 0.5 * (b(i, j) + b(j, i));
      b(i, j) = avg;
      b(j, i) = avg;
    }

  EigenResult eig = jacobi_eigensymmetric(std::move(b), 1e-13);

  const double nu_max = eig.values.empty() ? 0.0 : eig.values.front();
  if (!(nu_max > 0.0)) throw std::runtime_error("solve_pencil: measure mass matrix has no range");
  const double nu_cut = kNuCutFactor * nu_max;
  int retained = 0;
  while (retained < n && eig.values[retained] > nu_cut) ++retained;

  const int expected = static_cast<int>(p.atom_nodes.size());
  if (retained != expected) {
    std::ostringstream msg;
    msg << "solve_pencil: retained " << retained << " finite modes but the measure has " << expected
        << " distinct atom nodes; the nu-cut is ambiguous";
    throw std::runtime_error(msg.str());
  }
  if (retained < n && eig.values[retained] > 0.1 * eig.values[retained - 1]) {
    throw std::runtime_error("solve_pencil: eigenvalue cluster straddles the nu-cut");
  }

  SpectralBasis basis;
  basis.mesh = p.mesh;
  basis.atom_nodes = p.atom_nodes;
  basis.atom_weights = p.atom_weights;
  const int n_nodes = static_cast<int>(p.mesh.nodes.size());

  struct Pair {
    double lambda;
    std::vector<double> x;  // free-node values, x^T M x = 1
  };
  std::vector<Pair> pairs;
  for (int k = 0; k < retained; ++k) {
    double nu = eig.values[k];
    double lambda = 1.0 / nu - sigma;
    if (std::fabs(lambda) < kZeroSnap) lambda = 0.0;
    std::vector<double> x = solve_lower_transposed(l, eig.vectors[k]);
    double scale = 1.0 / std::sqrt(nu);  // x^T M x = nu before rescaling
    for (double& xi : x) xi *= scale;
    pairs.push_back({lambda, std::move(x)});
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const Pair& u, const Pair& v) { return u.lambda < v.lambda; });

  // re-orthonormalize numerically multiple clusters in index order (M-Gram-Schmidt)
  auto m_dot = [&](const std::vector<double>& u, const std::vector<double>& v) {
    std::vector<double> mv = p.mass.multiply(v);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += u[i] * mv[i];
    return s;
  };
  for (size_t k = 0; k < pairs.size(); ++k) {
    for (size_t j = 0; j < k; ++j) {
      if (std::fabs(pairs[k].lambda - pairs[j].lambda) >
          1e-9 * std::max(1.0, std::fabs(pairs[k].lambda)))
        continue;
      double proj = m_dot(pairs[j].x, pairs[k].x);
      for (int i = 0; i < n; ++i) pairs[k].x[i] -= proj * pairs[j].x[i];
    }
    double nrm = std::sqrt(m_dot(pairs[k].x, pairs[k].x));
    for (int i = 0; i < n; ++i) pairs[k].x[i] /= nrm;
  }

  for (Pair& pr : pairs) {
    // sign convention: entry of largest magnitude is positive
    int arg = 0;
    for (int i = 1; i < n; ++i)
      if (std::fabs(pr.x[i]) > std::fabs(pr.x[arg])) arg = i;
    if (pr.x[arg] < 0)
      for (double& xi : pr.x) xi = -xi;

    basis.eigenvalues.push_back(pr.lambda);
    std::vector<double> full(n_nodes, 0.0);
    for (int f = 0; f < n; ++f) full[p.free_nodes[f]] = pr.x[f];
    basis.vectors.push_back(std::move(full));
  }

  double res = basis.residual(p);
  if (res > 1e-9) {
    std::ostringstream msg;
    msg << "solve_pencil: pencil residual " << res << " exceeds 1e-9";
    throw std::runtime_error(msg.str());
  }
  return basis;
}

CoefVec zero_coefvec(std::shared_ptr<const SpectralBasis> basis) {
  CoefVec c;
  c.a.assign(basis->count(), Complex(0.0, 0.0));
  c.basis = std::move(basis);
  return c;
}

namespace {

template <typename T>
CoefVec project_impl(std::shared_ptr<const SpectralBasis> basis, std::span<const T> nodal) {
  if (static_cast<int>(nodal.size()) != static_cast<int>(basis->mesh.nodes.size()))
    throw std::invalid_argument("project: nodal vector does not match the mesh");
  CoefVec c = zero_coefvec(basis);
  for (int k = 0; k < basis->count(); ++k) {
    Complex s(0.0, 0.0);
    for (size_t a = 0; a < basis->atom_nodes.size(); ++a) {
      int node = basis->atom_nodes[a];
      s += basis->atom_weights[a] * basis->vectors[k][node] * Complex(nodal[node]);
    }
    c.a[k] = s;
  }
  return c;
}

}  // namespace

CoefVec project(std::shared_ptr<const SpectralBasis> basis, std::span<const double> nodal_values) {
  return project_impl<double>(std::move(basis), nodal_values);
}

CoefVec project(std::shared_ptr<const SpectralBasis> basis, std::span<const Complex> nodal_values) {
  return project_impl<Complex>(std::move(basis), nodal_values);
}

std::vector<Complex> reconstruct(const CoefVec& c) {
  const SpectralBasis& basis = *c.basis;
  std::vector<Complex> out(basis.mesh.nodes.size(), Complex(0.0, 0.0));
  for (int k = 0; k < basis.count(); ++k)
    for (size_t i = 0; i < out.size(); ++i) out[i] += c.a[k] * basis.vectors[k][i];
  return out;
}

std::vector<Complex> reconstruct_at_atoms(const CoefVec& c) {
  const SpectralBasis& basis = *c.basis;
  std::vector<Complex> out(basis.atom_nodes.size(), Complex(0.0, 0.0));
  for (int k = 0; k < basis.count(); ++k)
    for (size_t a = 0; a < out.size(); ++a)
      out[a] += c.a[k] * basis.vectors[k][basis.atom_nodes[a]];
  return out;
}

std::string basis_to_json(const SpectralBasis& basis) {
  nlohmann::ordered_json doc;
  if (std::holds_alternative<ArcDomain>(basis.mesh.domain)) {
    const auto& arc = std::get<ArcDomain>(basis.mesh.domain);
    doc["domain"] = {{"kind", "arc"}, {"lo", arc.lo}, {"hi", arc.hi}};
  } else {
    doc["domain"] = {{"kind", "full_circle"}};
  }
  doc["mesh_nodes"] = basis.mesh.nodes;
  doc["eigenvalues"] = basis.eigenvalues;
  doc["vectors"] = basis.vectors;
  return doc.dump(2) + "\n";
}

}  // namespace kfm
