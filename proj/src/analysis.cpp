#include "kfm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <thread>

namespace kfm {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct SphereTrig {
  double sa, ca, theta;  // a = pi/2 - phi
};

/// Pair distance matching sphere_distance bit for bit (same formula and clamps).
double cached_sphere_distance(const SphereTrig& u, const SphereTrig& v) {
  return sphere_distance_trig(u.sa, u.ca, v.sa, v.ca, u.theta - v.theta);
}

}  // namespace

DimensionEstimate estimate_dim_infinity(const DiscreteMeasure& m, double delta0, double rho,
                                        int levels, int manifold_dim, int threads) {
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("dim estimate: rho must lie in (0,1)");
  if (levels < 3) throw std::invalid_argument("dim estimate: need at least three ladder levels");
  if (!(delta0 > 0.0)) throw std::invalid_argument("dim estimate: delta0 must be positive");
  threads = std::max(1, threads);

  const auto& atoms = m.atoms();
  const int n_atoms = static_cast<int>(atoms.size());
  std::vector<double> radii(levels);
  for (int j = 0; j < levels; ++j) radii[j] = delta0 * std::pow(rho, j);

  const bool sphere = m.manifold() == Manifold::UpperSphere;
  std::vector<SphereTrig> trig;
  if (sphere) {
    trig.resize(n_atoms);
    for (int i = 0; i < n_atoms; ++i) {
      double a = kPi / 2 - atoms[i].point.c0;
      trig[i] = {std::sin(a), std::cos(a), atoms[i].point.c1};
    }
  }

  // one distance pass per center covers every ladder level and the atom gap
  auto scan_chunk = [&](int begin, int end, std::vector<double>& level_max, double& gap) {
    std::vector<double> dist(n_atoms);
    for (int c = begin; c < end; ++c) {
      for (int i = 0; i < n_atoms; ++i)
        dist[i] = sphere ? cached_sphere_distance(trig[c], trig[i])
                         : distance(atoms[c].point, atoms[i].point);
      for (int j = 0; j < levels; ++j) {
        double mass = 0.0;
        for (int i = 0; i < n_atoms; ++i)
          if (dist[i] < radii[j]) mass += atoms[i].weight;
        level_max[j] = std::max(level_max[j], mass);
      }
      for (int i = c + 1; i < n_atoms; ++i)
        if (dist[i] > 0.0 && (gap == 0.0 || dist[i] < gap)) gap = dist[i];
    }
  };

  std::vector<std::vector<double>> partial_max(threads, std::vector<double>(levels, 0.0));
  std::vector<double> partial_gap(threads, 0.0);
  if (threads == 1) {
    scan_chunk(0, n_atoms, partial_max[0], partial_gap[0]);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (n_atoms + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      int b = t * chunk, e = std::min(n_atoms, b + chunk);
      if (b >= e) continue;
      pool.emplace_back([&, t, b, e] { scan_chunk(b, e, partial_max[t], partial_gap[t]); });
    }
    for (auto& th : pool) th.join();
  }

  DimensionEstimate est;
  est.sup_masses.assign(levels, 0.0);
  for (int t = 0; t < threads; ++t) {
    for (int j = 0; j < levels; ++j)
      est.sup_masses[j] = std::max(est.sup_masses[j], partial_max[t][j]);
    if (partial_gap[t] > 0.0 && (est.ladder_floor == 0.0 || partial_gap[t] < est.ladder_floor))
      est.ladder_floor = partial_gap[t];
  }
  est.radii = radii;

  // below the atom gap a depth approximation is purely atomic; truncate there
  int used = levels;
  if (m.provenance().kind != ProvenanceKind::Atomic && est.ladder_floor > 0.0) {
    used = 0;
    while (used < levels && radii[used] > est.ladder_floor) ++used;
  } else {
    est.ladder_floor = 0.0;
  }
  est.levels_used = used;
  est.radii.resize(used);
  est.sup_masses.resize(used);

  est.degenerate = true;
  for (int j = 1; j < used; ++j)
    if (est.sup_masses[j] != est.sup_masses[0]) est.degenerate = false;

  if (used >= 2) {
    std::vector<double> lx(used), ly(used);
    for (int j = 0; j < used; ++j) {
      lx[j] = std::log(est.radii[j]);
      ly[j] = std::log(est.sup_masses[j]);
    }
    double mx = 0, my = 0;
    for (int j = 0; j < used; ++j) {
      mx += lx[j];
      my += ly[j];
    }
    mx /= used;
    my /= used;
    double sxx = 0, sxy = 0;
    for (int j = 0; j < used; ++j) {
      sxx += (lx[j] - mx) * (lx[j] - mx);
      sxy += (lx[j] - mx) * (ly[j] - my);
    }
    est.slope = sxy / sxx;
    double ss_res = 0;
    for (int j = 0; j < used; ++j) {
      double fit = my + est.slope * (lx[j] - mx);
      ss_res += (ly[j] - fit) * (ly[j] - fit);
    }
    est.slope_stderr = used > 2 ? std::sqrt(ss_res / (used - 2) / sxx) : 0.0;
    est.pointwise_slopes.resize(used - 1);
    for (int j = 0; j + 1 < used; ++j)
      est.pointwise_slopes[j] = (ly[j + 1] - ly[j]) / (lx[j + 1] - lx[j]);
    est.min_pointwise_slope =
        *std::min_element(est.pointwise_slopes.begin(), est.pointwise_slopes.end());
  }
  est.gate = (est.slope - est.slope_stderr) > static_cast<double>(manifold_dim - 2);
  return est;
}

namespace {

double halving_ratio(double a, double b, double alpha, double cutoff) {
  ChartPoint p = ChartPoint::sphere(kPi / 2 - a, 0.0);
  ChartPoint q = ChartPoint::sphere(kPi / 2 - b, alpha);
  double d = sphere_distance(p, q);
  if (d <= cutoff) return -1.0;
  return sphere_distance(sphere_halving_map(p), sphere_halving_map(q)) / d;
}

}  // namespace

BiLipschitzReport bilipschitz_scan(int na, int nb, int nalpha, double cutoff, int threads) {
  if (na < 8 || nb < 8 || nalpha < 8)
    throw std::invalid_argument("bilipschitz_scan: grid resolutions must be at least 8");
  if (!(cutoff > 0.0)) throw std::invalid_argument("bilipschitz_scan: cutoff must be positive");
  threads = std::max(1, threads);

  struct Extreme {
    double ratio;
    long idx;  // linear grid index, breaks ties deterministically across threads
    GridPoint at;
  };
  std::vector<Extreme> mins(threads, {2.0, -1, {}});
  std::vector<Extreme> maxs(threads, {-1.0, -1, {}});
  std::vector<long> counts(threads, 0);

  auto scan_rows = [&](int t0, int stride, int slot) {
    for (int ia = t0; ia < na; ia += stride) {
      double a = (kPi / 2) * ia / (na - 1);
      for (int ib = 0; ib < nb; ++ib) {
        double b = (kPi / 2) * ib / (nb - 1);
        if (b < a) continue;
        for (int ik = 0; ik < nalpha; ++ik) {
          double alpha = 2.0 * kPi * ik / nalpha;
          double r = halving_ratio(a, b, alpha, cutoff);
          if (r < 0.0) continue;
          ++counts[slot];
          long idx = (static_cast<long>(ia) * nb + ib) * nalpha + ik;
          if (r < mins[slot].ratio) mins[slot] = {r, idx, {a, b, alpha}};
          if (r > maxs[slot].ratio) maxs[slot] = {r, idx, {a, b, alpha}};
        }
      }
    }
  };

  if (threads == 1) {
    scan_rows(0, 1, 0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back([&, t] { scan_rows(t, threads, t); });
    for (auto& th : pool) th.join();
  }

  BiLipschitzReport rep;
  Extreme best_min{2.0, -1, {}}, best_max{-1.0, -1, {}};
  long total = 0;
  for (int t = 0; t < threads; ++t) {
    total += counts[t];
    if (mins[t].ratio < best_min.ratio ||
        (mins[t].ratio == best_min.ratio && mins[t].idx >= 0 && mins[t].idx < best_min.idx))
      best_min = mins[t];
    if (maxs[t].ratio > best_max.ratio ||
        (maxs[t].ratio == best_max.ratio && maxs[t].idx >= 0 &&
         (best_max.idx < 0 || maxs[t].idx < best_max.idx)))
      best_max = maxs[t];
  }
  rep.min_ratio = best_min.ratio;
  rep.max_ratio = best_max.ratio;
  rep.argmin = best_min.at;
  rep.argmax = best_max.at;
  rep.pairs_evaluated = total;

  // degenerate corners of the ratio: along a meridian, near the pole, and the
  // equator-to-pole pair, where the halving ratio tends to exactly one half
  rep.checkpoint_origin = halving_ratio(1e-4, 3e-4, 0.0, 0.0);
  rep.checkpoint_pole = halving_ratio(kPi / 2 - 1e-4, kPi / 2 - 1e-4, kPi / 3, 0.0);
  rep.checkpoint_mixed = halving_ratio(0.0, kPi / 2, 1.0, 0.0);

  if (!(rep.min_ratio > 0.0 && rep.max_ratio < 1.0 && rep.min_ratio <= rep.max_ratio))
    throw std::runtime_error("bilipschitz_scan: counterexample to the two-sided contraction bounds");
  return rep;
}

ConnectivityReport strongly_connected(const std::vector<std::vector<int>>& adjacency) {
  const int n = static_cast<int>(adjacency.size());
  ConnectivityReport rep;
  if (n == 0) return rep;

  std::vector<std::vector<int>> reverse(n);
  for (int u = 0; u < n; ++u)
    for (int v : adjacency[u]) reverse[v].push_back(u);

  auto reach_all = [n](const std::vector<std::vector<int>>& adj, int start) {
    std::vector<char> seen(n, 0);
    std::deque<int> queue{start};
    seen[start] = 1;
    int found = 1;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int v : adj[u])
        if (!seen[v]) {
          seen[v] = 1;
          ++found;
          queue.push_back(v);
        }
    }
    return found == n;
  };
  rep.strongly_connected = reach_all(adjacency, 0) && reach_all(reverse, 0);
  if (!rep.strongly_connected) return rep;

  // closed walk through all vertices: chain BFS shortest paths 0 -> 1 -> ... -> 0
  auto bfs_path = [&](int from, int to) {
    std::vector<int> prev(n, -1);
    std::deque<int> queue{from};
    std::vector<char> seen(n, 0);
    seen[from] = 1;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      if (u == to) break;
      for (int v : adjacency[u])
        if (!seen[v]) {
          seen[v] = 1;
          prev[v] = u;
          queue.push_back(v);
        }
    }
    std::vector<int> path{to};
    while (path.back() != from) path.push_back(prev[path.back()]);
    std::reverse(path.begin(), path.end());
    return path;
  };
  rep.witness_walk.push_back(0);
  for (int v = 1; v <= n; ++v) {
    auto leg = bfs_path(rep.witness_walk.back(), v % n);
    rep.witness_walk.insert(rep.witness_walk.end(), leg.begin() + 1, leg.end());
  }
  return rep;
}

ConnectivityReport gifs_strongly_connected(const GIFSSpec& spec) {
  std::vector<std::vector<int>> adj(spec.vertex_count());
  for (const GifsEdge& e : spec.edges) adj[e.src - 1].push_back(e.dst - 1);
  ConnectivityReport rep = strongly_connected(adj);
  for (int& v : rep.witness_walk) ++v;  // report 1-based vertex ids
  return rep;
}

SRegularityReport s_regularity_check(const DiscreteMeasure& m, double c, double p, int t,
                                     std::span<const double> radii) {
  if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("s_regularity: c must lie in (0,1)");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("s_regularity: p must lie in (0,1)");
  if (t < 1) throw std::invalid_argument("s_regularity: t must be a positive integer");
  if (radii.empty()) throw std::invalid_argument("s_regularity: empty radius ladder");

  SRegularityReport rep;
  const double base = t * (1.0 - p);
  rep.s = std::log(base) / std::log(c);
  if (base >= 1.0) {  // s <= 0: the bound says nothing, do not scan
    rep.vacuous = true;
    return rep;
  }
  const double r0 = *std::max_element(radii.begin(), radii.end());
  rep.big_c = std::pow(r0, -rep.s);

  for (size_t ci = 0; ci < m.atoms().size(); ++ci) {
    for (double r : radii) {
      double mass = ball_mass(m, BallQuery{m.atoms()[ci].point, r});
      double bound = rep.big_c * std::pow(r, rep.s);
      if (mass > bound * (1.0 + 1e-12))
        rep.violations.push_back({static_cast<int>(ci), r, mass, bound});
    }
  }
  return rep;
}

}  // namespace kfm
