#include <doctest.h>

#include <set>

#include "support.hpp"

using namespace veering;
using namespace veering::test;

namespace {

using Holonomies = std::set<std::pair<double, double>>;

// Rational holonomies, each normalised to point right or up.
Holonomies holonomies_up_to_sign(const std::vector<Vec2>& hs) {
  Holonomies out;
  for (Vec2 h : hs) {
    if (h.x.sign() < 0 || (h.x.sign() == 0 && h.y.sign() < 0)) h = -h;
    out.insert({h.x.to_double(), h.y.to_double()});
  }
  return out;
}

Holonomies holonomies_up_to_sign(const std::vector<SaddleConnection>& scs) {
  std::vector<Vec2> hs;
  for (const auto& sc : scs) hs.push_back(sc.hol);
  return holonomies_up_to_sign(hs);
}

}  // namespace

TEST_CASE("loading computes cone angles and Euler characteristic") {
  auto sq = square();
  REQUIRE(sq->cone_points().size() == 1);
  CHECK(sq->cone_points()[0].angle_pi == 2);
  CHECK(sq->cone_points()[0].puncture);
  CHECK(sq->euler_char() == -1);

  auto g = golden();
  REQUIRE(g->cone_points().size() == 1);
  CHECK(g->cone_points()[0].angle_pi == 2);
  CHECK(g->euler_char() == -1);
  CHECK_FALSE(g->half_translation());
  REQUIRE(g->monodromy());

  auto p = pillowcase();
  CHECK(p->cone_points().size() == 4);
  for (const auto& c : p->cone_points()) CHECK(c.angle_pi == 1);
  CHECK(p->half_translation());
  CHECK(p->euler_char() == -2);
}

TEST_CASE("unglued edges are rejected") {
  const std::string text = R"({"schema": "veering-surface/1", "name": "open",
    "field": {"min_poly": [-1, -1, 1], "interval": ["1", "2"]},
    "polygons": [{"vertices": [["[0]", "[0]"], ["[1]", "[0]"], ["[1]", "[1]"], ["[0]", "[1]"]]}],
    "gluings": [{"a": [0, 0], "b": [0, 2], "kind": "translation"}], "fully_punctured": true})";
  CHECK_THROWS_AS(load_surface(text), SurfaceError);
  CHECK_THROWS(load_surface("{"));
}

TEST_CASE("straight traces on the square torus") {
  auto s = square();
  const SurfacePoint origin = s->locate(PointRef{0, vec(0, 0)});
  auto hit = develop_segment(*s, origin, vec(1, 1));
  CHECK(hit.status == TraceResult::Status::reached_vertex);
  auto open = develop_segment(*s, origin, {Scalar::rational(1, 2), Scalar(0)});
  CHECK(open.status == TraceResult::Status::ended_inside);
}

TEST_CASE("saddle connections in a box") {
  auto sq = square();
  const auto unit = holonomies_up_to_sign(enumerate_saddle_connections(*sq, Scalar(1), Scalar(1)));
  const Holonomies want{{1, 0}, {0, 1}, {1, 1}, {1, -1}};
  CHECK(unit == want);

  // lattice vectors of the square torus in a 3 x 3 box are the primitive ones
  long primitive = 0;
  for (long x = 0; x <= 3; ++x)
    for (long y = -3; y <= 3; ++y)
      if ((x > 0 || y > 0) && std::gcd(x, y) == 1) ++primitive;
  CHECK(holonomies_up_to_sign(enumerate_saddle_connections(*sq, Scalar(3), Scalar(3))).size() ==
        static_cast<size_t>(primitive));

  auto g = golden();
  CHECK(enumerate_saddle_connections(*g, Scalar::rational(1, 10), Scalar::rational(1, 10)).empty());
}

TEST_CASE("enumeration respects the symmetries of the square torus") {
  auto sq = square();
  const auto scs = enumerate_saddle_connections(*sq, Scalar(3), Scalar(3));
  std::vector<Vec2> turned, mirrored;
  for (const auto& sc : scs) {
    turned.push_back({-sc.hol.y, sc.hol.x});
    mirrored.push_back({sc.hol.x, -sc.hol.y});
  }
  const Holonomies all = holonomies_up_to_sign(scs);
  CHECK(holonomies_up_to_sign(turned) == all);
  CHECK(holonomies_up_to_sign(mirrored) == all);
}

TEST_CASE("singularity-free rectangles") {
  auto s = square();
  const Copy seed{s->locate(PointRef{0, {Scalar::rational(1, 2), Scalar::rational(1, 4)}}).tri, Transform{}};
  CHECK(is_singularity_free(*s, ImmersedRectangle{seed, Scalar(0), Scalar(1), Scalar(0), Scalar(1)}));
  // shifted down by half a unit, the 2 x 1 box wraps around the cone point at (1, 0)
  CHECK_FALSE(is_singularity_free(
      *s, ImmersedRectangle{seed, Scalar(0), Scalar(2), Scalar::rational(-1, 2), Scalar::rational(1, 2)}));
  CHECK(is_singularity_free(*s, ImmersedRectangle{seed, Scalar(0), Scalar(0), Scalar(0), Scalar(1)}));
}

TEST_CASE("rectangle extension") {
  auto g = golden();
  const auto es = enumerate_tau_edges(*g, Scalar(2), Scalar(2));
  REQUIRE_FALSE(es.empty());
  const ImmersedRectangle thin = spanning_rectangle(*g, es.front().sc);
  const Extension up = extend_rectangle(*g, thin, Side::up);
  CHECK(thin.y1 < up.rect.y1);
  const Extension again = extend_rectangle(*g, up.rect, Side::up);
  CHECK(again.rect.y1 == up.rect.y1);
  CHECK(again.blocker.cone == up.blocker.cone);

  auto s = square();
  const Copy seed{s->locate(PointRef{0, {Scalar::rational(1, 2), Scalar::rational(1, 2)}}).tri, Transform{}};
  const ImmersedRectangle strip{seed, Scalar::rational(1, 4), Scalar::rational(3, 4), Scalar::rational(1, 2),
                                Scalar::rational(1, 2)};
  CHECK_THROWS_AS(extend_rectangle(*s, strip, Side::right), UnboundedError);
}

TEST_CASE("monodromy acts affinely on connections") {
  auto g = golden();
  const Monodromy& f = *g->monodromy();
  const Scalar t = Scalar::generator(g->field());
  CHECK(f.matrix[0][0] == t * t);
  CHECK(f.matrix[1][1] == (t * t).inverse());
  const auto scs = enumerate_saddle_connections(*g, Scalar(2), Scalar(2));
  REQUIRE_FALSE(scs.empty());
  const Monodromy id = identity_monodromy(*g);
  const Monodromy f2 = compose(*g, f, f);
  const Monodromy finv = inverse(*g, f);
  for (const auto& sc : scs) {
    CHECK(apply_monodromy(*g, id, sc).same_as(sc));
    const SaddleConnection once = apply_monodromy(*g, f, sc);
    CHECK(once.hol == f.apply_linear(sc.hol));
    CHECK(apply_monodromy(*g, f, once).same_as(apply_monodromy(*g, f2, sc)));
    CHECK(apply_monodromy(*g, finv, once).same_as(sc));
  }
}

TEST_CASE("word matrices multiply R and L left to right") {
  const IntMatrix rl = word_matrix("RL");
  CHECK(rl[0][0] == 2);
  CHECK(rl[0][1] == 1);
  CHECK(rl[1][0] == 1);
  CHECK(rl[1][1] == 1);
  const IntMatrix r2l = word_matrix("RRL");
  CHECK(r2l[0][0] == 3);
  CHECK(r2l[0][1] == 2);
  CHECK(r2l[1][0] == 1);
  CHECK(r2l[1][1] == 1);
}

TEST_CASE("surface documents round trip") {
  auto g = golden();
  const std::string text = serialize_surface_document(g->document());
  auto again = load_surface(text);
  CHECK(again->triangles().size() == g->triangles().size());
  CHECK(serialize_surface_document(again->document()) == text);
}
