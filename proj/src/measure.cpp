#include "kfm/measure.hpp"

#include <cmath>
#include <stdexcept>

namespace kfm {

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms, Provenance prov)
    : atoms_(std::move(atoms)), prov_(prov) {
  if (atoms_.empty()) throw std::invalid_argument("measure: no atoms");
  manifold_ = atoms_.front().point.manifold;
  double mass = 0.0;
  for (const Atom& a : atoms_) {
    if (a.point.manifold != manifold_)
      throw std::invalid_argument("measure: atoms on mixed manifolds");
    if (!(a.weight > 0.0)) throw std::invalid_argument("measure: nonpositive atom weight");
    mass += a.weight;
  }
  total_mass_ = mass;
}

double DiscreteMeasure::min_atom_gap() const {
  double gap = 0.0;
  bool found = false;
  for (size_t i = 0; i < atoms_.size(); ++i)
    for (size_t j = i + 1; j < atoms_.size(); ++j) {
      double d = distance(atoms_[i].point, atoms_[j].point);
      if (d > 0.0 && (!found || d < gap)) {
        gap = d;
        found = true;
      }
    }
  return gap;
}

DiscreteMeasure dirac_measure(std::span<const ChartPoint> points, std::span<const double> weights) {
  if (points.empty()) throw std::invalid_argument("dirac_measure: empty input");
  if (points.size() != weights.size())
    throw std::invalid_argument("dirac_measure: length mismatch");
  std::vector<Atom> atoms;
  atoms.reserve(points.size());
  for (size_t i = 0; i < points.size(); ++i) atoms.push_back({points[i], weights[i]});
  return DiscreteMeasure(std::move(atoms), Provenance{ProvenanceKind::Atomic, 0, 1.0});
}

ChartPoint IfsMap::apply(const ChartPoint& p) const {
  ChartPoint q = sphere_halving_map(p);
  if (rotation) q = rotate(q, rotation->first, rotation->second);
  return q;
}

void IFSSpec::validate() const {
  if (maps.empty()) throw std::invalid_argument("ifs: no maps");
  if (maps.size() != probabilities.size())
    throw std::invalid_argument("ifs: probabilities do not match maps");
  double sum = 0.0;
  for (double p : probabilities) {
    if (!(p > 0.0)) throw std::invalid_argument("ifs: nonpositive probability");
    sum += p;
  }
  if (std::fabs(sum - 1.0) > 1e-12) throw std::invalid_argument("ifs: probabilities do not sum to 1");
}

IFSSpec quarter_sphere_ifs(std::vector<double> probabilities) {
  constexpr double kPi = 3.14159265358979323846;
  IFSSpec spec;
  spec.maps = {IfsMap{std::nullopt},
               IfsMap{std::make_pair(Axis::Y, kPi / 4)},
               IfsMap{std::make_pair(Axis::X, -kPi / 4)}};
  spec.probabilities =
      probabilities.empty() ? std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3} : std::move(probabilities);
  spec.validate();
  return spec;
}

DiscreteMeasure ifs_invariant_measure(const IFSSpec& spec, const ChartPoint& seed, int depth) {
  spec.validate();
  if (depth < 0) throw std::invalid_argument("ifs_invariant_measure: negative depth");
  if (seed.manifold != Manifold::UpperSphere)
    throw std::invalid_argument("ifs_invariant_measure: seed must lie on the upper sphere");
  const long m = static_cast<long>(spec.maps.size());
  constexpr long kAtomCap = 20'000'000;
  long count = 1;
  for (int l = 0; l < depth; ++l) {
    count *= m;
    if (count > kAtomCap)
      throw std::invalid_argument("ifs_invariant_measure: depth produces too many atoms");
  }
  // Atoms ordered lexicographically by word (i_1,...,i_L), outermost digit
  // first, so the depth-(L+1) children of a depth-L word are consecutive.
  std::vector<Atom> atoms;
  atoms.reserve(count);
  std::vector<int> digits(depth);
  for (long rank = 0; rank < count; ++rank) {
    long r = rank;
    for (int l = depth - 1; l >= 0; --l) {
      digits[l] = static_cast<int>(r % m);
      r /= m;
    }
    ChartPoint p = seed;
    double w = 1.0;
    for (int l = depth - 1; l >= 0; --l) p = spec.maps[digits[l]].apply(p);
    for (int l = 0; l < depth; ++l) w *= spec.probabilities[digits[l]];
    atoms.push_back({p, w});
  }
  return DiscreteMeasure(std::move(atoms), Provenance{ProvenanceKind::IFSDepth, depth, 1.0});
}

double ball_mass(const DiscreteMeasure& m, const BallQuery& q) {
  if (q.center.manifold != m.manifold())
    throw std::domain_error("ball_mass: center on the wrong manifold");
  if (!(q.radius > 0.0)) throw std::invalid_argument("ball_mass: radius must be positive");
  double mass = 0.0;
  for (const Atom& a : m.atoms())
    if (distance(a.point, q.center) < q.radius) mass += a.weight;
  return mass;
}

double sup_ball_mass(const DiscreteMeasure& m, double radius, std::span<const ChartPoint> centers) {
  if (centers.empty()) throw std::invalid_argument("sup_ball_mass: no candidate centers");
  double best = 0.0;
  for (const ChartPoint& c : centers) best = std::max(best, ball_mass(m, BallQuery{c, radius}));
  return best;
}

}  // namespace kfm
