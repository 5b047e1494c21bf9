#include <doctest.h>

#include <cmath>
#include <map>
#include <queue>

#include "support.hpp"

using namespace veering;
using namespace veering::test;

namespace {

// Breadth-first search over reduced fractions with bounded terms.
long farey_bfs(long p1, long q1, long p2, long q2, long bound) {
  std::vector<std::pair<long, long>> verts;
  for (long q = 0; q <= bound; ++q)
    for (long p = -bound; p <= bound; ++p)
      if (std::gcd(p, q) == 1 && (q > 0 || p == 1)) verts.emplace_back(p, q);
  std::map<std::pair<long, long>, long> dist;
  std::queue<std::pair<long, long>> todo;
  dist[{p1, q1}] = 0;
  todo.push({p1, q1});
  while (!todo.empty()) {
    auto [p, q] = todo.front();
    todo.pop();
    if (p == p2 && q == q2) return dist[{p, q}];
    for (const auto& [r, s] : verts)
      if (std::abs(p * s - q * r) == 1 && !dist.count({r, s})) {
        dist[{r, s}] = dist[{p, q}] + 1;
        todo.push({r, s});
      }
  }
  return -1;
}

// Relative twisting of the eigendirections of R^n L across the curve R fixes.
double twist_oracle(int n) {
  const double t = n + 2, mu = (t + std::sqrt(t * t - 4)) / 2;
  const double a = 1 + n, b = n, d = 1;
  return std::abs(b / (mu - a) - b / (d - mu));
}

}  // namespace

TEST_CASE("Farey distances") {
  CHECK(farey_distance(0, 1, 1, 0) == 1);
  CHECK(farey_distance(0, 1, 2, 5) == 2);
  CHECK(farey_distance(3, 7, 3, 7) == 0);
  CHECK(farey_distance(3, 7, -3, -7) == 0);
  for (long p1 = -4; p1 <= 4; ++p1)
    for (long q1 = 1; q1 <= 4; ++q1)
      for (long p2 = -5; p2 <= 5; ++p2)
        for (long q2 = 1; q2 <= 5; ++q2) {
          if (std::gcd(p1, q1) != 1 || std::gcd(p2, q2) != 1) continue;
          CHECK(farey_distance(p1, q1, p2, q2) == farey_bfs(p1, q1, p2, q2, 12));
        }
}

TEST_CASE("twisting distance of R^n L equals n + 2") {
  for (int n = 3; n <= 7; ++n) {
    auto s = bundle(std::string(n, 'R') + "L");
    const SubsurfaceSpec y = subsurfaces(*s).front();
    const MaximalCylinder cyl = maximal_cylinder(*s, *y.core);
    const ProjectionReport d = annular_distance(cyl);
    // the twist A = (sqrt(n^2 + 4n) + n) / 2 lies in (n, n + 1), so d = floor(A) + 2
    CHECK(d.lo == n + 2);
    CHECK(d.hi == n + 2);
    CHECK(d.twist == doctest::Approx(twist_oracle(n)).epsilon(1e-9));
    CHECK(std::abs(d.distance - n) <= 4);
  }
}

TEST_CASE("annular distance is symmetric and small for parallel leaves") {
  auto s = bundle("RRRRL");
  const SubsurfaceSpec y = subsurfaces(*s).front();
  const MaximalCylinder cyl = maximal_cylinder(*s, *y.core);
  const ProjectionReport ab = annular_distance(cyl, vertical(), horizontal());
  const ProjectionReport ba = annular_distance(cyl, horizontal(), vertical());
  CHECK(ab.lo == ba.lo);
  CHECK(ab.hi == ba.hi);
  CHECK(annular_distance(cyl, vertical(), vertical()).hi <= 1);
}

TEST_CASE("low-complexity distance on the golden torus is Farey distance") {
  auto g = golden();
  const auto es = enumerate_tau_edges(*g, Scalar(4), Scalar(4));
  for (size_t i = 0; i < es.size(); ++i)
    for (size_t j = 0; j < es.size(); ++j) {
      const Slope a = torus_slope(*g, es[i].sc), b = torus_slope(*g, es[j].sc);
      const ProjectionReport r = low_complexity_distance(*g, es[i].sc, es[j].sc);
      CHECK(r.distance == farey_distance(a.p, a.q, b.p, b.q));
      if (i == j) CHECK(r.distance == 0);
    }
}

TEST_CASE("arc graph distances on a ladder agree with Farey distances") {
  auto g = golden();
  TorusLadder ladder(*g, 20);
  const auto& es = ladder.edges();
  REQUIRE(es.size() >= 20);
  for (size_t i = 0; i < es.size(); ++i) {
    const auto d = ladder.distances_from(i);
    for (size_t j = 0; j < es.size(); ++j)
      CHECK(d[j] == farey_distance(es[i].slope.p, es[i].slope.q, es[j].slope.p, es[j].slope.q));
  }
}

TEST_CASE("bound checker constants and self-test") {
  ProjectionReport d;
  d.distance = d.lo = d.hi = 30;
  const BoundVerdict bad = check_projection_bound(true, 0, d, 5);
  CHECK_FALSE(bad.holds);
  d.distance = d.lo = d.hi = 9;
  const BoundVerdict vac = check_projection_bound(true, 0, d, 1);
  CHECK(vac.vacuous);
  CHECK(vac.holds);
  const BoundVerdict non = check_projection_bound(false, 2, d, 4);
  CHECK(non.alpha == 6);
  CHECK(non.beta == 8);
  CHECK(non.margin == 4 - 6);
  CHECK(check_bound_selftest().passed());
}

TEST_CASE("isolated pocket of a strongly twisted annulus") {
  auto s = bundle("RRRRRRRRRL");
  const SubsurfaceSpec y = subsurfaces(*s).front();
  const MaximalCylinder cyl = maximal_cylinder(*s, *y.core);
  const ProjectionReport d = annular_distance(cyl);
  REQUIRE(d.lo > 10);
  const YPocket u = y_pocket(*s, y);
  CHECK(u.pocket.tet_count > 0);
  const IsolatedPocketResult r = isolated_pocket(*s, u, y);
  REQUIRE(r.pocket);
  const IsolatedPocket& v = *r.pocket;
  CHECK(isolated_pocket_violations(*s, cyl, v).empty());
  CHECK(v.span.lo >= d.hi - 10);
  CHECK(v.tet_count() >= v.span.hi);
  CHECK(check_pocket_embedding(*s, v, *s->monodromy(), 3).ok());
}

TEST_CASE("no isolated pocket below the threshold") {
  auto s = bundle("RRRL");
  const SubsurfaceSpec y = subsurfaces(*s).front();
  const IsolatedPocketResult r = isolated_pocket(*s, y_pocket(*s, y), y);
  CHECK_FALSE(r.pocket);
  CHECK_FALSE(r.reason.empty());
}
