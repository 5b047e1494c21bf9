#pragma once

#include <span>
#include <vector>

#include "veering/scalar.hpp"

namespace veering {

struct Vec2 {
  Scalar x, y;

  Vec2() = default;
  Vec2(Scalar x_, Scalar y_) : x(std::move(x_)), y(std::move(y_)) {}

  Vec2 operator-() const { return {-x, -y}; }
  Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  Vec2& operator-=(const Vec2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  friend Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
  friend Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
  friend Vec2 operator*(const Scalar& k, const Vec2& v) { return {k * v.x, k * v.y}; }
  friend bool operator==(const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }
  friend bool operator!=(const Vec2& a, const Vec2& b) { return !(a == b); }

  bool is_zero() const { return x.is_zero() && y.is_zero(); }
};

inline Scalar cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline Scalar dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline int orient(const Vec2& a, const Vec2& b, const Vec2& c) { return cross(b - a, c - a).sign(); }

// Lexicographic key order on (x, y) coefficient vectors.
int key_compare(const Vec2& a, const Vec2& b);

// z -> sign * z + shift, with sign = +1 (translation) or -1 (half-turn).
struct Transform {
  int sign = 1;
  Vec2 shift{Scalar(0), Scalar(0)};

  Vec2 apply(const Vec2& z) const { return sign > 0 ? z + shift : shift - z; }
  Vec2 apply_linear(const Vec2& v) const { return sign > 0 ? v : -v; }
  // (this o other)(z) = this(other(z))
  Transform compose(const Transform& other) const {
    return {sign * other.sign, apply(other.shift)};
  }
  Transform inverse() const {
    // z = s w + c  =>  w = s z - s c
    return {sign, sign > 0 ? -shift : shift};
  }
  friend bool operator==(const Transform& a, const Transform& b) {
    return a.sign == b.sign && a.shift == b.shift;
  }
};

int key_compare(const Transform& a, const Transform& b);

// Open convex polygon given by its vertices in counterclockwise order. A
// region with fewer than three non-collinear vertices has empty interior.
class ConvexRegion {
 public:
  ConvexRegion() = default;
  explicit ConvexRegion(std::vector<Vec2> ccw);
  static ConvexRegion box(const Scalar& x0, const Scalar& x1, const Scalar& y0, const Scalar& y1);

  const std::vector<Vec2>& vertices() const { return v_; }
  bool empty_interior() const { return empty_; }

  // strictly inside
  bool contains(const Vec2& p) const;
  // in the closed region
  bool contains_closed(const Vec2& p) const;
  // closed segment [a, b] meets the open region
  bool meets_segment(const Vec2& a, const Vec2& b) const;
  // open triangle/polygon interiors overlap
  bool meets_polygon_interior(std::span<const Vec2> ccw) const;

 private:
  std::vector<Vec2> v_;
  bool empty_ = true;
  // axis-aligned boxes are decided by comparisons alone
  bool box_ = false;
  Scalar x0_, x1_, y0_, y1_;
  std::vector<Vec2> edge_;
  std::vector<Scalar> top_;  // max of cross(edge_i, v - v_i) over the vertices
};

// Clip a convex polygon (ccw) to the closed half-plane left of a->b.
std::vector<Vec2> clip_left(std::span<const Vec2> poly, const Vec2& a, const Vec2& b);

// Open interiors of two convex polygons (ccw) intersect.
bool convex_interiors_meet(std::span<const Vec2> p, std::span<const Vec2> q);

// Closed segments meet at a point interior to both (transverse crossing or
// touching away from both segments' endpoints is excluded).
bool segments_cross_properly(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d);

}  // namespace veering
