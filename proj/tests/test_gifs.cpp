#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <map>
#include <set>

#include "kfm/gifs.hpp"
#include "kfm/io.hpp"

using namespace kfm;

namespace {

// published 48-edge structure of the torus GIFS, (src, dst) per edge index
const std::pair<int, int> kKnownEdges[48] = {
    {1, 7},  {1, 8},  {1, 11}, {2, 9},  {2, 10}, {2, 12}, {3, 1},  {3, 3},  {3, 4},  {4, 1},
    {4, 2},  {4, 3},  {4, 4},  {4, 5},  {4, 6},  {5, 1},  {5, 2},  {5, 3},  {5, 4},  {5, 5},
    {5, 6},  {6, 2},  {6, 5},  {6, 6},  {7, 7},  {7, 8},  {7, 11}, {8, 7},  {8, 8},  {8, 9},
    {8, 10}, {8, 11}, {8, 12}, {9, 7},  {9, 8},  {9, 9},  {9, 10}, {9, 11}, {9, 12}, {10, 9},
    {10, 10}, {10, 12}, {11, 1}, {11, 3}, {11, 4}, {12, 2}, {12, 5}, {12, 6}};

}  // namespace

TEST_SUITE("gifs") {

TEST_CASE("derived edge table matches the published structure") {
  GIFSSpec g = torus_gifs();
  REQUIRE(g.edges.size() == 48);
  REQUIRE(g.cells.size() == 12);
  std::multiset<std::pair<int, int>> expected(std::begin(kKnownEdges), std::end(kKnownEdges));
  std::multiset<std::pair<int, int>> actual;
  for (const GifsEdge& e : g.edges) actual.insert({e.src, e.dst});
  CHECK(actual == expected);

  std::map<int, int> out_degree;
  for (const GifsEdge& e : g.edges) ++out_degree[e.src];
  const std::map<int, int> expected_degree{{1, 3}, {2, 3}, {3, 3}, {4, 6},  {5, 6},  {6, 3},
                                           {7, 3}, {8, 6}, {9, 6}, {10, 3}, {11, 3}, {12, 3}};
  CHECK(out_degree == expected_degree);
}

TEST_CASE("probability rows sum to one exactly") {
  GIFSSpec g = torus_gifs();
  std::map<int, Rat> row;
  for (size_t k = 0; k < g.edges.size(); ++k) {
    auto it = row.find(g.edges[k].src);
    if (it == row.end())
      row[g.edges[k].src] = g.edge_probabilities[k];
    else
      it->second = it->second + g.edge_probabilities[k];
  }
  for (const auto& [vertex, sum] : row) {
    CAPTURE(vertex);
    CHECK(sum == Rat(1));
  }
}

TEST_CASE("edge images stay inside their source cell") {
  GIFSSpec g = torus_gifs();
  CHECK_NOTHROW(g.validate());
  // corner check with plain doubles, the acceptance-level tolerance
  for (size_t k = 0; k < g.edges.size(); ++k) {
    const GifsEdge& e = g.edges[k];
    const TorusRect& wd = g.cells[e.dst - 1];
    const TorusRect& ws = g.cells[e.src - 1];
    for (const Rat& cx : {wd.x0, wd.x1})
      for (const Rat& cy : {wd.y0, wd.y1}) {
        double ix = cx.value() / 2 + e.dx.value();
        double iy = cy.value() / 2 + e.dy.value();
        CHECK(ix >= ws.x0.value() - 1e-12);
        CHECK(ix <= ws.x1.value() + 1e-12);
        CHECK(iy >= ws.y0.value() - 1e-12);
        CHECK(iy <= ws.y1.value() + 1e-12);
      }
  }
}

TEST_CASE("validation rejects broken data") {
  GIFSSpec g = torus_gifs();
  // deleting an edge breaks its source row sum
  GIFSSpec missing = g;
  missing.edges.erase(missing.edges.begin());
  missing.edge_probabilities.erase(missing.edge_probabilities.begin());
  CHECK_THROWS_AS(missing.validate(), std::invalid_argument);

  // nudging a translation pushes a corner outside the source cell
  GIFSSpec shifted = g;
  shifted.edges[0].dx = shifted.edges[0].dx + Rat(1, 4);
  CHECK_THROWS_AS(shifted.validate(), std::invalid_argument);

  GIFSSpec bad_prob = g;
  bad_prob.edge_probabilities[0] = Rat(2, 1);
  CHECK_THROWS_AS(bad_prob.validate(), std::invalid_argument);
}

TEST_CASE("depth zero seeds the cell centers") {
  GifsMeasures gm = gifs_invariant_measure(torus_gifs(), 0);
  REQUIRE(gm.per_vertex.size() == 12);
  GIFSSpec g = torus_gifs();
  for (int i = 0; i < 12; ++i) {
    REQUIRE(gm.per_vertex[i].atoms().size() == 1);
    CHECK(gm.per_vertex[i].atoms()[0].weight == 1.0);
    double cx = (g.cells[i].x0.value() + g.cells[i].x1.value()) / 2;
    double cy = (g.cells[i].y0.value() + g.cells[i].y1.value()) / 2;
    CHECK(same_point(gm.per_vertex[i].atoms()[0].point, ChartPoint::torus(cx, cy), 1e-14));
  }
  CHECK(gm.combined.atoms().size() == 12);
  CHECK(gm.combined.total_mass() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(gm.combined.provenance().normalization == doctest::Approx(12.0));
}

TEST_CASE("depth one unrolls the measure recursion at vertex 1") {
  GIFSSpec g = torus_gifs();
  GifsMeasures gm = gifs_invariant_measure(g, 1);
  const DiscreteMeasure& mu1 = gm.per_vertex[0];
  REQUIRE(mu1.atoms().size() == 3);  // out-degree of vertex 1
  auto out = g.out_edges(1);
  REQUIRE(out.size() == 3);
  for (size_t j = 0; j < 3; ++j) {
    const GifsEdge& e = g.edges[out[j]];
    CHECK(mu1.atoms()[j].weight == doctest::Approx(1.0 / 3).epsilon(1e-15));
    const TorusRect& wd = g.cells[e.dst - 1];
    double cx = (wd.x0.value() + wd.x1.value()) / 2;
    double cy = (wd.y0.value() + wd.y1.value()) / 2;
    ChartPoint image = ChartPoint::torus(cx / 2 + e.dx.value(), cy / 2 + e.dy.value());
    CHECK(same_point(mu1.atoms()[j].point, image, 1e-14));
  }
  // edges out of vertex 1 pull from cells 7, 8, 11
  std::multiset<int> dsts;
  for (int k : out) dsts.insert(g.edges[k].dst);
  CHECK(dsts == std::multiset<int>{7, 8, 11});
}

TEST_CASE("per-vertex mass is conserved at every depth") {
  GIFSSpec g = torus_gifs();
  for (int depth = 0; depth <= 3; ++depth) {
    GifsMeasures gm = gifs_invariant_measure(g, depth);
    for (int i = 0; i < 12; ++i)
      CHECK(gm.per_vertex[i].total_mass() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gm.combined.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("atoms of a vertex measure stay in its cell") {
  GIFSSpec g = torus_gifs();
  GifsMeasures gm = gifs_invariant_measure(g, 3);
  for (int i = 0; i < 12; ++i) {
    const TorusRect& w = g.cells[i];
    for (const Atom& a : gm.per_vertex[i].atoms()) {
      CHECK(a.point.c0 >= w.x0.value() - 1e-12);
      CHECK(a.point.c0 <= w.x1.value() + 1e-12);
      // the cell top edge y1 = 1 wraps to coordinate 0
      bool y_in = a.point.c1 >= w.y0.value() - 1e-12 && a.point.c1 <= w.y1.value() + 1e-12;
      bool y_wrap = w.y1 == Rat(1) && a.point.c1 <= 1e-12;
      CHECK((y_in || y_wrap));
    }
  }
}

TEST_CASE("oversized depth is rejected before allocation") {
  CHECK_THROWS_AS(static_cast<void>(gifs_invariant_measure(torus_gifs(), 16)),
                  std::invalid_argument);
}

TEST_CASE("json round trip") {
  GIFSSpec g = torus_gifs();
  GIFSSpec back = gifs_from_json(gifs_to_json(g));
  REQUIRE(back.edges.size() == g.edges.size());
  for (size_t k = 0; k < g.edges.size(); ++k) {
    CHECK(back.edges[k].src == g.edges[k].src);
    CHECK(back.edges[k].dst == g.edges[k].dst);
    CHECK(back.edges[k].dx == g.edges[k].dx);
    CHECK(back.edges[k].dy == g.edges[k].dy);
    CHECK(back.edge_probabilities[k] == g.edge_probabilities[k]);
  }
}

TEST_CASE("shipped data file matches the built-in table") {
  GIFSSpec g = torus_gifs();
  GIFSSpec shipped = gifs_from_json(read_file(std::string(KFM_SOURCE_DIR) + "/data/gifs_torus_v1.json"));
  REQUIRE(shipped.edges.size() == g.edges.size());
  for (size_t k = 0; k < g.edges.size(); ++k) {
    CHECK(shipped.edges[k].src == g.edges[k].src);
    CHECK(shipped.edges[k].dst == g.edges[k].dst);
    CHECK(shipped.edges[k].dx == g.edges[k].dx);
    CHECK(shipped.edges[k].dy == g.edges[k].dy);
  }
}

}  // TEST_SUITE
