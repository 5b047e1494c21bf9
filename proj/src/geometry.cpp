#include "veering/geometry.hpp"

namespace veering {

int key_compare(const Vec2& a, const Vec2& b) {
  int c = Scalar::key_compare(a.x, b.x);
  return c != 0 ? c : Scalar::key_compare(a.y, b.y);
}

int key_compare(const Transform& a, const Transform& b) {
  if (a.sign != b.sign) return a.sign < b.sign ? -1 : 1;
  return key_compare(a.shift, b.shift);
}

ConvexRegion::ConvexRegion(std::vector<Vec2> ccw) : v_(std::move(ccw)) {
  if (v_.size() < 3) return;
  Scalar area2(0);
  for (size_t i = 0; i < v_.size(); ++i) area2 += cross(v_[i], v_[(i + 1) % v_.size()]);
  empty_ = area2.sign() <= 0;
  const size_t n = v_.size();
  edge_.resize(n);
  top_.resize(n);
  for (size_t i = 0; i < n; ++i) {
    edge_[i] = v_[(i + 1) % n] - v_[i];
    Scalar top(0);
    for (size_t j = 0; j < n; ++j) top = max(top, cross(edge_[i], v_[j] - v_[i]));
    top_[i] = top;
  }
}

ConvexRegion ConvexRegion::box(const Scalar& x0, const Scalar& x1, const Scalar& y0, const Scalar& y1) {
  ConvexRegion r;
  r.v_ = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  r.box_ = true;
  r.x0_ = x0;
  r.x1_ = x1;
  r.y0_ = y0;
  r.y1_ = y1;
  r.empty_ = !(x0 < x1) || !(y0 < y1);
  return r;
}

bool ConvexRegion::contains(const Vec2& p) const {
  if (empty_) return false;
  if (box_) return p.x > x0_ && p.x < x1_ && p.y > y0_ && p.y < y1_;
  for (size_t i = 0; i < v_.size(); ++i)
    if (cross(edge_[i], p - v_[i]).sign() <= 0) return false;
  return true;
}

bool ConvexRegion::contains_closed(const Vec2& p) const {
  if (v_.empty()) return false;
  if (box_) return p.x >= x0_ && p.x <= x1_ && p.y >= y0_ && p.y <= y1_;
  for (size_t i = 0; i < v_.size(); ++i) {
    if (edge_[i].is_zero()) continue;
    if (cross(edge_[i], p - v_[i]).sign() < 0) return false;
  }
  return true;
}

bool ConvexRegion::meets_segment(const Vec2& a, const Vec2& b) const {
  if (empty_) return false;
  if (box_) {
    if (max(a.x, b.x) <= x0_ || min(a.x, b.x) >= x1_) return false;
    if (max(a.y, b.y) <= y0_ || min(a.y, b.y) >= y1_) return false;
  } else {
    for (size_t i = 0; i < v_.size(); ++i) {
      const Vec2& e = edge_[i];
      if (e.is_zero()) continue;
      Scalar fa = cross(e, a - v_[i]), fb = cross(e, b - v_[i]);
      if (fa.sign() <= 0 && fb.sign() <= 0) return false;
      if (fa >= top_[i] && fb >= top_[i]) return false;
    }
  }
  Vec2 d = b - a;
  if (!d.is_zero()) {
    bool any_pos = false, any_neg = false;
    for (const auto& p : v_) {
      int s = cross(d, p - a).sign();
      any_pos |= s > 0;
      any_neg |= s < 0;
    }
    if (!any_pos || !any_neg) return false;
  }
  return true;
}

bool ConvexRegion::meets_polygon_interior(std::span<const Vec2> ccw) const {
  if (empty_) return false;
  return convex_interiors_meet(v_, ccw);
}

namespace {

// some edge of p has all of q weakly on its outer side
bool separated_by_edges_of(std::span<const Vec2> p, std::span<const Vec2> q) {
  const size_t n = p.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec2& a = p[i];
    Vec2 e = p[(i + 1) % n] - a;
    if (e.is_zero()) continue;
    bool all_out = true;
    for (const auto& v : q) {
      if (cross(e, v - a).sign() > 0) {
        all_out = false;
        break;
      }
    }
    if (all_out) return true;
  }
  return false;
}

bool has_area(std::span<const Vec2> p) {
  if (p.size() < 3) return false;
  Scalar area2(0);
  for (size_t i = 0; i < p.size(); ++i) area2 += cross(p[i], p[(i + 1) % p.size()]);
  return area2.sign() > 0;
}

}  // namespace

bool convex_interiors_meet(std::span<const Vec2> p, std::span<const Vec2> q) {
  if (!has_area(p) || !has_area(q)) return false;
  return !separated_by_edges_of(p, q) && !separated_by_edges_of(q, p);
}

std::vector<Vec2> clip_left(std::span<const Vec2> poly, const Vec2& a, const Vec2& b) {
  std::vector<Vec2> out;
  const size_t n = poly.size();
  if (n == 0) return out;
  Vec2 d = b - a;
  std::vector<Scalar> f(n);
  for (size_t i = 0; i < n; ++i) f[i] = cross(d, poly[i] - a);
  for (size_t i = 0; i < n; ++i) {
    size_t j = (i + 1) % n;
    int si = f[i].sign(), sj = f[j].sign();
    if (si >= 0) out.push_back(poly[i]);
    if ((si > 0 && sj < 0) || (si < 0 && sj > 0)) {
      Scalar t = f[i] / (f[i] - f[j]);
      out.push_back(poly[i] + t * (poly[j] - poly[i]));
    }
  }
  return out;
}

bool segments_cross_properly(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  int o1 = orient(a, b, c), o2 = orient(a, b, d);
  if (o1 * o2 >= 0) return false;
  int o3 = orient(c, d, a), o4 = orient(c, d, b);
  return o3 * o4 < 0;
}

}  // namespace veering
