#include "kfm/gifs.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace kfm {

namespace {

using json = nlohmann::ordered_json;

/// The 12 quarter-cells W_1..W_12 of the unit torus (four corner cells omitted).
std::vector<TorusRect> torus_cells() {
  auto r = [](int x0, int x1, int y0, int y1) {
    return TorusRect{Rat(x0, 4), Rat(x1, 4), Rat(y0, 4), Rat(y1, 4)};
  };
  return {r(1, 2, 3, 4), r(2, 3, 3, 4), r(0, 1, 2, 3), r(1, 2, 2, 3),
          r(2, 3, 2, 3), r(3, 4, 2, 3), r(0, 1, 1, 2), r(1, 2, 1, 2),
          r(2, 3, 1, 2), r(3, 4, 1, 2), r(1, 2, 0, 1), r(2, 3, 0, 1)};
}

/// Translations of the four overlapping half-scale maps on the torus.
std::vector<std::pair<Rat, Rat>> overlap_map_translations() {
  return {{Rat(0), Rat(1, 4)}, {Rat(1, 4), Rat(1, 4)}, {Rat(1, 2), Rat(1, 4)}, {Rat(1, 4), Rat(3, 4)}};
}

bool fits_with_shift(const Rat& lo, const Rat& hi, const Rat& s0, const Rat& s1, int& shift) {
  for (int k = -1; k <= 1; ++k) {
    Rat kk(k);
    if (lo <= s0 + kk && s1 + kk <= hi) {
      shift = k;
      return true;
    }
  }
  return false;
}

}  // namespace

bool TorusRect::contains(const Rat& x, const Rat& y) const {
  return x0 <= x && x <= x1 && y0 <= y && y <= y1;
}

bool TorusRect::contains_mod1(const Rat& x, const Rat& y) const {
  bool okx = false, oky = false;
  for (int k = -1; k <= 1 && !okx; ++k) okx = (x0 <= x + Rat(k) && x + Rat(k) <= x1);
  for (int k = -1; k <= 1 && !oky; ++k) oky = (y0 <= y + Rat(k) && y + Rat(k) <= y1);
  return okx && oky;
}

std::vector<GifsEdge> derive_torus_edges() {
  const auto cells = torus_cells();
  const auto maps = overlap_map_translations();
  std::vector<GifsEdge> edges;
  // Each half-scale image of a cell lands inside exactly one cell; the edge
  // src -> dst records that the dst cell maps into the src cell.
  for (int src = 1; src <= static_cast<int>(cells.size()); ++src) {
    for (int dst = 1; dst <= static_cast<int>(cells.size()); ++dst) {
      const TorusRect& wd = cells[dst - 1];
      const TorusRect& ws = cells[src - 1];
      for (const auto& [mx, my] : maps) {
        Rat half(1, 2);
        Rat ix0 = wd.x0 * half + mx, ix1 = wd.x1 * half + mx;
        Rat iy0 = wd.y0 * half + my, iy1 = wd.y1 * half + my;
        int kx = 0, ky = 0;
        if (fits_with_shift(ws.x0, ws.x1, ix0, ix1, kx) &&
            fits_with_shift(ws.y0, ws.y1, iy0, iy1, ky)) {
          edges.push_back(GifsEdge{src, dst, mx + Rat(kx), my + Rat(ky)});
        }
      }
    }
  }
  return edges;
}

GIFSSpec torus_gifs() {
  GIFSSpec spec;
  spec.cells = torus_cells();
  spec.edges = derive_torus_edges();
  // uniform probability across the out-edges of each vertex
  std::vector<int> out_degree(spec.cells.size() + 1, 0);
  for (const GifsEdge& e : spec.edges) ++out_degree[e.src];
  spec.edge_probabilities.reserve(spec.edges.size());
  for (const GifsEdge& e : spec.edges)
    spec.edge_probabilities.push_back(Rat(1, out_degree[e.src]));
  spec.validate();
  return spec;
}

std::vector<int> GIFSSpec::out_edges(int vertex) const {
  std::vector<int> out;
  for (size_t k = 0; k < edges.size(); ++k)
    if (edges[k].src == vertex) out.push_back(static_cast<int>(k));
  return out;
}

void GIFSSpec::validate() const {
  if (cells.empty()) throw std::invalid_argument("gifs: no cells");
  if (edges.empty()) throw std::invalid_argument("gifs: no edges");
  if (edges.size() != edge_probabilities.size())
    throw std::invalid_argument("gifs: probabilities do not match edges");
  const int t = vertex_count();
  std::vector<Rat> row_sum(t + 1, Rat(0));
  for (size_t k = 0; k < edges.size(); ++k) {
    const GifsEdge& e = edges[k];
    if (e.src < 1 || e.src > t || e.dst < 1 || e.dst > t)
      throw std::invalid_argument("gifs: edge endpoint out of range");
    const Rat& p = edge_probabilities[k];
    if (!(Rat(0) < p && p < Rat(1)))
      throw std::invalid_argument("gifs: edge probability outside (0,1)");
    row_sum[e.src] = row_sum[e.src] + p;
    // the image of every dst corner must land in the src cell
    const TorusRect& wd = cells[e.dst - 1];
    const TorusRect& ws = cells[e.src - 1];
    const Rat half(1, 2);
    for (const Rat& cx : {wd.x0, wd.x1})
      for (const Rat& cy : {wd.y0, wd.y1}) {
        Rat ix = cx * half + e.dx, iy = cy * half + e.dy;
        if (!ws.contains(ix, iy)) {
          std::ostringstream msg;
          msg << "gifs: edge " << k + 1 << " (" << e.src << "->" << e.dst
              << ") maps a corner of the dst cell outside the src cell";
          throw std::invalid_argument(msg.str());
        }
      }
  }
  for (int i = 1; i <= t; ++i)
    if (row_sum[i] != Rat(1)) {
      std::ostringstream msg;
      msg << "gifs: out-edge probabilities of vertex " << i << " sum to " << row_sum[i].num << "/"
          << row_sum[i].den << ", not 1";
      throw std::invalid_argument(msg.str());
    }
}

namespace {

struct RatPoint {
  Rat x, y;
};

void expand_vertex(const GIFSSpec& spec, const std::vector<std::vector<int>>& out,
                   const std::vector<RatPoint>& centers, int vertex, int depth, Rat weight,
                   std::vector<const GifsEdge*>& stack, std::vector<Atom>& atoms) {
  if (depth == 0) {
    // apply the stacked edge maps innermost-first to the seed of this vertex
    RatPoint p = centers[vertex - 1];
    for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
      p.x = p.x * Rat(1, 2) + (*it)->dx;
      p.y = p.y * Rat(1, 2) + (*it)->dy;
    }
    atoms.push_back({ChartPoint::torus(p.x.value(), p.y.value()), weight.value()});
    return;
  }
  for (int k : out[vertex]) {
    const GifsEdge& e = spec.edges[k];
    stack.push_back(&e);
    expand_vertex(spec, out, centers, e.dst, depth - 1, weight * spec.edge_probabilities[k], stack,
                  atoms);
    stack.pop_back();
  }
}

}  // namespace

GifsMeasures gifs_invariant_measure(const GIFSSpec& spec, int depth) {
  spec.validate();
  if (depth < 0) throw std::invalid_argument("gifs_invariant_measure: negative depth");
  const int t = spec.vertex_count();
  std::vector<std::vector<int>> out(t + 1);
  for (int i = 1; i <= t; ++i) out[i] = spec.out_edges(i);

  // path counting caps the expansion before anything is allocated
  constexpr double kAtomCap = 2e7;
  std::vector<double> paths(t + 1, 1.0);
  for (int l = 0; l < depth; ++l) {
    std::vector<double> next(t + 1, 0.0);
    for (int i = 1; i <= t; ++i)
      for (int k : out[i]) next[i] += paths[spec.edges[k].dst];
    paths = std::move(next);
    double total = 0.0;
    for (int i = 1; i <= t; ++i) total += paths[i];
    if (total > kAtomCap)
      throw std::invalid_argument("gifs_invariant_measure: depth produces too many atoms");
  }
  std::vector<RatPoint> centers;
  centers.reserve(t);
  for (const TorusRect& w : spec.cells)
    centers.push_back({(w.x0 + w.x1) / Rat(2), (w.y0 + w.y1) / Rat(2)});

  GifsMeasures result{{}, DiscreteMeasure({{ChartPoint::torus(0, 0), 1.0}}, {})};
  std::vector<Atom> all;
  result.per_vertex.reserve(t);
  std::vector<const GifsEdge*> stack;
  for (int i = 1; i <= t; ++i) {
    std::vector<Atom> atoms;
    expand_vertex(spec, out, centers, i, depth, Rat(1), stack, atoms);
    all.insert(all.end(), atoms.begin(), atoms.end());
    result.per_vertex.emplace_back(std::move(atoms),
                                   Provenance{ProvenanceKind::GIFSDepth, depth, 1.0});
  }
  const double mass = static_cast<double>(t);
  for (Atom& a : all) a.weight /= mass;
  result.combined =
      DiscreteMeasure(std::move(all), Provenance{ProvenanceKind::GIFSDepth, depth, mass});
  return result;
}

std::string gifs_to_json(const GIFSSpec& spec) {
  json doc;
  doc["format"] = "kfm-gifs";
  doc["version"] = 1;
  auto rat = [](const Rat& r) { return json::array({r.num, r.den}); };
  json cells = json::array();
  for (const TorusRect& w : spec.cells)
    cells.push_back(json{{"x0", rat(w.x0)}, {"x1", rat(w.x1)}, {"y0", rat(w.y0)}, {"y1", rat(w.y1)}});
  doc["cells"] = cells;
  json edges = json::array();
  for (size_t k = 0; k < spec.edges.size(); ++k) {
    const GifsEdge& e = spec.edges[k];
    edges.push_back(json{{"src", e.src},
                         {"dst", e.dst},
                         {"d", json::array({rat(e.dx), rat(e.dy)})},
                         {"p", rat(spec.edge_probabilities[k])}});
  }
  doc["edges"] = edges;
  return doc.dump(2) + "\n";
}

GIFSSpec gifs_from_json(const std::string& text) {
  json doc = json::parse(text);
  auto rat = [](const json& j) { return Rat(j.at(0).get<std::int64_t>(), j.at(1).get<std::int64_t>()); };
  GIFSSpec spec;
  for (const json& c : doc.at("cells"))
    spec.cells.push_back(TorusRect{rat(c.at("x0")), rat(c.at("x1")), rat(c.at("y0")), rat(c.at("y1"))});
  for (const json& e : doc.at("edges")) {
    spec.edges.push_back(
        GifsEdge{e.at("src").get<int>(), e.at("dst").get<int>(), rat(e.at("d").at(0)), rat(e.at("d").at(1))});
    spec.edge_probabilities.push_back(rat(e.at("p")));
  }
  spec.validate();
  return spec;
}

}  // namespace kfm
