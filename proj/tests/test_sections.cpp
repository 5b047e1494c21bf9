#include <doctest.h>

#include <algorithm>
#include <set>

#include "support.hpp"

using namespace veering;
using namespace veering::test;

TEST_CASE("initial sections are valid") {
  for (auto s : {golden(), pillowcase(), bundle("RRL")}) {
    const Section t = initial_section(*s);
    const int chi = -s->euler_char();
    CHECK(t.edges().size() == static_cast<size_t>(3 * chi));
    CHECK(t.faces().size() == static_cast<size_t>(2 * chi));
    CHECK(section_violations(*s, t.edges()).empty());
  }
}

TEST_CASE("widest and tallest edges") {
  auto g = golden();
  const Section t = initial_section(*g);
  for (size_t f = 0; f < t.faces().size(); ++f) {
    const int w = t.widest(static_cast<int>(f));
    const int h = t.tallest(static_cast<int>(f));
    CHECK(w != h);
  }
  CHECK_FALSE(flippable_edges(t, FlipDir::up).empty());
  CHECK_FALSE(flippable_edges(t, FlipDir::down).empty());
  for (int e : flippable_edges(t, FlipDir::up)) {
    const auto down = flippable_edges(t, FlipDir::down);
    CHECK(std::find(down.begin(), down.end(), e) == down.end());
  }
}

TEST_CASE("flips undo each other") {
  auto g = golden();
  const Section t = initial_section(*g);
  for (int e : flippable_edges(t, FlipDir::up)) {
    auto [up, move] = flip(*g, t, e, FlipDir::up);
    CHECK(slope_order(move.new_edge.sc, move.old_edge.sc) == 1);
    const int back = up.find(move.new_edge.key());
    REQUIRE(back >= 0);
    auto [down, undo] = flip(*g, up, back, FlipDir::down);
    CHECK(down == t);
    CHECK(undo.new_edge.key() == move.old_edge.key());
  }
}

TEST_CASE("extension to sections") {
  auto g = golden();
  const Section t = initial_section(*g);
  CHECK(extend_to_section(*g, t.edges()) == t);
  const Section empty = extend_to_section(*g, {});
  CHECK(section_violations(*g, empty.edges()).empty());
  for (const auto& e : enumerate_tau_edges(*g, Scalar(3), Scalar(3))) CHECK(extend_to_section(*g, {e}).contains(e.key()));
}

TEST_CASE("pockets between sections") {
  auto g = golden();
  const Section t = initial_section(*g);
  CHECK(pockets_between(*g, t, t).empty());
  auto [up, move] = flip(*g, t, flippable_edges(t, FlipDir::up).front(), FlipDir::up);
  auto ps = pockets_between(*g, t, up);
  REQUIRE(ps.size() == 1);
  CHECK(ps[0].tet_count == 1);
  CHECK(ps[0].orientation == 1);
  auto back = pockets_between(*g, up, t);
  REQUIRE(back.size() == 1);
  CHECK(back[0].orientation == -1);
}

TEST_CASE("sweeps stop after the requested flips") {
  auto g = golden();
  const Section t = initial_section(*g);
  auto r = sweep(*g, t, FlipDir::up, [](const Section&, size_t n) { return n >= 5; });
  CHECK(r.moves.size() == 5);
  CHECK(r.sections.size() == 6);
  std::set<TetraKey> seen;
  for (const auto& m : r.moves) CHECK(seen.insert(m.tet).second);
}

TEST_CASE("top and bottom sections of a full edge set") {
  auto g = golden();
  const Section t = initial_section(*g);
  auto [lo, hi] = top_bottom_sections(*g, t.keys(), t);
  CHECK(lo == t);
  CHECK(hi == t);
}

TEST_CASE("one period of flips") {
  auto g = golden();
  const Monodromy& f = *g->monodromy();
  const Section t = initial_section(*g);
  CHECK(period_tet_count(*g, t, f) == 2);
  CHECK(std::abs(period_tet_count(*g, t, f)) == std::abs(period_tet_count(*g, apply_monodromy(*g, f, t), f)));
  auto b = bundle("RRL");
  CHECK(period_tet_count(*b, initial_section(*b), *b->monodromy()) == 3);
  // a different starting section gives the same count
  auto moved = sweep(*g, t, FlipDir::up, [](const Section&, size_t n) { return n >= 3; }).sections.back();
  CHECK(period_tet_count(*g, moved, f) == 2);
}
