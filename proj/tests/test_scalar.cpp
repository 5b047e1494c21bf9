#include <doctest.h>

#include "support.hpp"

using namespace veering;
using namespace veering::test;

TEST_CASE("golden field arithmetic reduces by the minimal polynomial") {
  const FieldPtr f = golden_field();
  const Scalar t = Scalar::generator(f);
  const Scalar half = Scalar::rational(1, 2);
  CHECK((half + t) + (half - t) == Scalar(1));
  CHECK(t * t == t + Scalar(1));
  CHECK((t - Scalar(1)) * t == Scalar(1));
  CHECK(t * t.inverse() == Scalar(1));
  CHECK((t * t - t - Scalar(1)).is_zero());
}

TEST_CASE("signs are exact") {
  const Scalar t = Scalar::generator(golden_field());
  CHECK(Scalar(0).sign() == 0);
  CHECK((t - Scalar::rational(8, 5)).sign() == 1);
  CHECK((t - Scalar::rational(13, 8)).sign() == -1);
  CHECK((t * t - t - Scalar(1)).sign() == 0);
  // Fibonacci convergents straddle theta ever more closely
  CHECK((Scalar(832040) * t - Scalar(1346269)).sign() == -1);
  CHECK((Scalar(514229) * t - Scalar(832040)).sign() == 1);
}

TEST_CASE("cubic field signs use the isolating interval") {
  const FieldPtr f = make_field({-2, 0, 0, 1}, 1, 2);
  const Scalar t = Scalar::generator(f);
  CHECK(t * t * t == Scalar(2));
  CHECK((t - Scalar::rational(125, 100)).sign() == 1);
  CHECK((t - Scalar::rational(126, 100)).sign() == -1);
  CHECK((t * t - Scalar::rational(158, 100)).sign() == 1);
  CHECK((t * t.inverse()) == Scalar(1));
}

TEST_CASE("floor and parsing") {
  const FieldPtr f = golden_field();
  const Scalar t = Scalar::generator(f);
  CHECK(t.floor() == 1);
  CHECK((-t).floor() == -2);
  CHECK((Scalar(10) * t).floor() == 16);
  CHECK(Scalar(3).floor() == 3);
  const Scalar p = parse_scalar("[1/2, 3]", f);
  CHECK(p == Scalar::rational(1, 2) + Scalar(3) * t);
  CHECK(parse_scalar(p.to_string(), f) == p);
  CHECK_THROWS_AS(parse_scalar("[1, x]", f), FieldError);
}

TEST_CASE("geometry predicates") {
  CHECK(segments_cross_properly(vec(0, 0), vec(2, 2), vec(0, 2), vec(2, 0)));
  CHECK_FALSE(segments_cross_properly(vec(0, 0), vec(1, 1), vec(1, 1), vec(2, 0)));
  const std::vector<Vec2> a{vec(0, 0), vec(2, 0), vec(0, 2)};
  const std::vector<Vec2> b{vec(1, 1), vec(3, 1), vec(1, 3)};
  const std::vector<Vec2> c{vec(2, 0), vec(4, 0), vec(2, 2)};
  CHECK_FALSE(convex_interiors_meet(a, b));
  CHECK_FALSE(convex_interiors_meet(a, c));
  const std::vector<Vec2> d{vec(0, 0), vec(3, 0), vec(0, 3)};
  CHECK(convex_interiors_meet(d, b));
}
