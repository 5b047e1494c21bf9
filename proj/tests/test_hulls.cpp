#include <doctest.h>

#include "support.hpp"

using namespace veering;
using namespace veering::test;

TEST_CASE("hulls of tau-edges are the edges themselves") {
  auto g = golden();
  for (const auto& e : enumerate_tau_edges(*g, Scalar(3), Scalar(3))) {
    const RectHullResult h = rect_hull(*g, e.sc);
    REQUIRE(h.edges.size() == 1);
    CHECK(h.edges.front().key() == e.key());
    const auto r = retract_to_tau(*g, ArcPath{{e.sc}});
    REQUIRE(r.size() == 1);
    CHECK(r.front().key() == e.key());
    CHECK(saddle_decompose(*g, ArcPath{{e.sc}}).size() == 1);
  }
}

TEST_CASE("long connections have staircase hulls") {
  auto g = golden();
  long staircases = 0;
  for (const auto& sc : enumerate_saddle_connections(*g, Scalar(6), Scalar(6))) {
    if (is_tau_edge(*g, sc)) continue;
    const RectHullResult h = rect_hull(*g, sc);
    CHECK(h.edges.size() >= 2);
    staircases += h.edges.size() >= 2;
    CHECK(section_violations(*g, extend_to_section(*g, h.edges).edges()).empty());
  }
  CHECK(staircases > 0);
}

TEST_CASE("triangle hull polygons are sound on both sides") {
  auto g = golden();
  long polygons = 0;
  for (const auto& sc : enumerate_saddle_connections(*g, Scalar(5), Scalar(5)))
    for (int side : {1, -1}) {
      const TriHullResult h = tri_hull(*g, sc, side);
      CHECK(polygon_violations(*g, h).empty());
      if (h.degenerate()) {
        REQUIRE(h.path.size() == 1);
        CHECK(h.path.front().same_as(sc));
      } else {
        ++polygons;
        CHECK(h.points.front().is_zero());
        CHECK(h.points.back() == sc.hol);
      }
    }
  CHECK(polygons > 0);
}

TEST_CASE("pushing a hull path again is the identity") {
  auto g = golden();
  for (const auto& sc : enumerate_saddle_connections(*g, Scalar(4), Scalar(4))) {
    const TriHullResult h = tri_hull(*g, sc, 1);
    const auto again = thull_push(*g, h.path, 1);
    REQUIRE(again.size() == h.path.size());
    for (size_t i = 0; i < again.size(); ++i) CHECK(again[i].same_as(h.path[i]));
  }
}

TEST_CASE("cylinder curves decompose into the cylinder boundary") {
  auto g = golden();
  const ClosedCurve c{g->locate(PointRef{0, {Scalar::rational(1, 4), Scalar::rational(1, 8)}}), vec(1, 1)};
  const MaximalCylinder cyl = maximal_cylinder(*g, c);
  CHECK(cyl.modulus().sign() > 0);
  CHECK_FALSE(cyl.boundary.empty());
  const auto parts = saddle_decompose(*g, c);
  REQUIRE(parts.size() == cyl.boundary.size());
  for (const auto& p : parts) {
    bool found = false;
    for (const auto& b : cyl.boundary) found = found || b.same_as(p);
    CHECK(found);
  }
  // the parts are boundary connections, so they never cross the core
  for (const auto& p : parts) CHECK_FALSE(crosses_curve(*g, p, c.point, c.holonomy));
}

TEST_CASE("retractions of disjoint arcs stay disjoint") {
  auto g = golden();
  const auto scs = enumerate_saddle_connections(*g, Scalar(5), Scalar(5));
  long pairs = 0;
  for (size_t i = 0; i < scs.size(); ++i)
    for (size_t j = i + 1; j < scs.size(); ++j) {
      if (scs[i].same_as(scs[j]) || crosses(*g, scs[i], scs[j])) continue;
      ++pairs;
      auto a = retract_to_tau(*g, ArcPath{{scs[i]}});
      auto b = retract_to_tau(*g, ArcPath{{scs[j]}});
      for (const auto& x : a)
        for (const auto& y : b) CHECK_FALSE(crosses(*g, x.sc, y.sc));
    }
  CHECK(pairs > 0);
}
