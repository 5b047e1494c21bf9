#include <doctest.h>

#include "support.hpp"

using namespace veering;
using namespace veering::test;

TEST_CASE("tau-edge recognition") {
  auto g = golden();
  const auto scs = enumerate_saddle_connections(*g, Scalar(2), Scalar(2));
  const SaddleConnection* shortest = &scs.front();
  for (const auto& sc : scs)
    if (dot(sc.hol, sc.hol) < dot(shortest->hol, shortest->hol)) shortest = &sc;
  CHECK(is_tau_edge(*g, *shortest));

  auto sq = square();
  for (const auto& sc : enumerate_saddle_connections(*sq, Scalar(1), Scalar(1)))
    if (sc.hol.y.is_zero() || sc.hol.x.is_zero()) CHECK_FALSE(is_tau_edge(*sq, sc));

  // a connection whose box holds another cone point is not a tau-edge
  for (const auto& sc : enumerate_saddle_connections(*g, Scalar(3), Scalar(3))) {
    auto e = is_tau_edge(*g, sc);
    CHECK(e.has_value() == is_singularity_free(*g, spanning_rectangle(*g, sc)));
  }
}

TEST_CASE("tetrahedra on tau-edges") {
  auto g = golden();
  for (const auto& e : enumerate_tau_edges(*g, Scalar(3), Scalar(3))) {
    const Tetrahedron below = tetrahedron_from_edge(*g, e, TetraMode::below);
    const Tetrahedron above = tetrahedron_from_edge(*g, e, TetraMode::above);
    CHECK(below.top_edge.key() == e.key());
    CHECK(above.bottom_edge.key() == e.key());
    CHECK(slope_order(below.top_edge.sc, below.bottom_edge.sc) == 1);
    for (int c = 0; c < 4; ++c)
      for (int d = c + 1; d < 4; ++d) CHECK(below.corners[c].pos != below.corners[d].pos);
  }
}

TEST_CASE("slope comparison of crossing edges") {
  auto g = golden();
  const auto es = enumerate_tau_edges(*g, Scalar(3), Scalar(3));
  long pairs = 0;
  for (size_t i = 0; i < es.size(); ++i)
    for (size_t j = 0; j < es.size(); ++j) {
      if (i == j || !crosses(*g, es[i].sc, es[j].sc)) continue;
      ++pairs;
      const int c = slope_compare(*g, es[i], es[j]);
      CHECK(c == -slope_compare(*g, es[j], es[i]));
      const bool steeper = abs(es[i].sc.hol.y) * abs(es[j].sc.hol.x) > abs(es[j].sc.hol.y) * abs(es[i].sc.hol.x);
      CHECK((c == 1) == steeper);
    }
  CHECK(pairs > 0);
}

TEST_CASE("edge links close into a circle") {
  auto g = golden();
  const TauEdge e = enumerate_tau_edges(*g, Scalar(2), Scalar(2)).front();
  for (auto side : {LinkSide::left, LinkSide::right}) {
    const EdgeLink link = edge_link(*g, e, side);
    REQUIRE(link.tets.size() >= 2);
    CHECK(link.faces.size() + 1 == link.tets.size());
    CHECK(link.tets.front().top_edge.key() == e.key());
    CHECK(link.tets.back().bottom_edge.key() == e.key());
  }
}

TEST_CASE("axis connections violate the standing hypothesis") {
  CHECK(find_axis_connection(*square(), Scalar(2), Scalar(2)));
  CHECK_FALSE(find_axis_connection(*golden(), Scalar(4), Scalar(4)));
}
