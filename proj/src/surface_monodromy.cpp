#include <deque>

#include "veering/surface.hpp"

namespace veering {

namespace {

Vec2 mat_apply(const std::array<std::array<Scalar, 2>, 2>& m, const Vec2& v) {
  return {m[0][0] * v.x + m[0][1] * v.y, m[1][0] * v.x + m[1][1] * v.y};
}

Vec2 scaled(int sign, const Vec2& v) { return sign > 0 ? v : -v; }

// Follow v from p; the end point in the last chart and the chart sign
// accumulated on the way.
SurfacePoint follow(const FlatSurface& s, const SurfacePoint& p, const Vec2& v, int* chart_sign) {
  if (v.is_zero()) {
    *chart_sign = 1;
    return p;
  }
  TraceResult tr = s.trace_from_point(p, v);
  if (tr.status != TraceResult::Status::ended_inside)
    throw SurfaceError("monodromy trace met a cone point");
  const SegmentPiece& last = tr.pieces.back();
  Transform inv = last.g.inverse();
  *chart_sign = last.g.sign;
  return {last.tri, inv.apply(p.p + v)};
}

bool same_point(const FlatSurface& s, const SurfacePoint& a, const SurfacePoint& b) {
  if (a.tri == b.tri) return a.p == b.p;
  const auto& t = s.triangles()[a.tri];
  for (int k = 0; k < 3; ++k) {
    if (t.nbr[k] != b.tri) continue;
    if (orient(t.v[k], t.v[(k + 1) % 3], a.p) != 0) continue;
    if (t.glue[k].inverse().apply(a.p) == b.p) return true;
  }
  return false;
}

Monodromy::Image image_across(const FlatSurface& s, const std::array<std::array<Scalar, 2>, 2>& m,
                              const Monodromy::Image& from, int tri, int edge) {
  const auto& t = s.triangles()[tri];
  const Vec2 mid = Scalar::rational(1, 2) * (t.v[edge] + t.v[(edge + 1) % 3]);
  const int nt = t.nbr[edge];
  const Transform& glue = t.glue[edge];
  Vec2 v1 = mid - s.centroid(tri);
  Vec2 v2 = s.centroid(nt) - glue.inverse().apply(mid);
  int g1 = 1, g2 = 1;
  SurfacePoint p1 = follow(s, {from.tri, from.point}, scaled(from.sign, mat_apply(m, v1)), &g1);
  SurfacePoint p2 = follow(s, p1, scaled(g1 * from.sign * glue.sign, mat_apply(m, v2)), &g2);
  return {p2.tri, p2.p, g2 * g1 * from.sign * glue.sign};
}

// Affine map with derivative sign * matrix taking base to image, propagated
// to every centroid and checked across every dual edge.
Monodromy affine_from(const FlatSurface& s, const std::array<std::array<Scalar, 2>, 2>& matrix,
                      const SurfacePoint& base, const SurfacePoint& image, int sign) {
  const auto& tris = s.triangles();
  Monodromy m;
  m.matrix = matrix;
  const size_t n = tris.size();
  m.centroid_image.assign(n, {});
  std::vector<bool> done(n, false);
  int g = 1;
  SurfacePoint c0 = follow(s, image, scaled(sign, mat_apply(m.matrix, s.centroid(base.tri) - base.p)), &g);
  m.centroid_image[base.tri] = {c0.tri, c0.p, g * sign};
  done[base.tri] = true;
  std::deque<int> queue{base.tri};
  while (!queue.empty()) {
    int t = queue.front();
    queue.pop_front();
    for (int k = 0; k < 3; ++k) {
      int nt = tris[t].nbr[k];
      if (done[nt]) continue;
      m.centroid_image[nt] = image_across(s, m.matrix, m.centroid_image[t], t, k);
      done[nt] = true;
      queue.push_back(nt);
    }
  }
  // every dual edge must agree, not just the tree ones
  for (size_t t = 0; t < n; ++t)
    for (int k = 0; k < 3; ++k) {
      int nt = tris[t].nbr[k];
      auto im = image_across(s, m.matrix, m.centroid_image[t], static_cast<int>(t), k);
      const auto& want = m.centroid_image[nt];
      if (im.sign != want.sign || !same_point(s, {im.tri, im.point}, {want.tri, want.point}))
        throw SurfaceError("monodromy is not an affine automorphism of the surface");
    }
  return m;
}

}  // namespace

void FlatSurface::build_monodromy() {
  const MonodromySpec& spec = *doc_.monodromy;
  Scalar det = spec.matrix[0][0] * spec.matrix[1][1] - spec.matrix[0][1] * spec.matrix[1][0];
  if (abs(det) != Scalar(1)) throw SurfaceError("monodromy determinant is not +-1");
  if (spec.image_sign != 1 && spec.image_sign != -1) throw SurfaceError("monodromy sign must be +-1");
  Monodromy m = affine_from(*this, spec.matrix, locate(spec.base), locate(spec.image), spec.image_sign);
  m.word = spec.word;
  monodromy_ = std::move(m);
}

Monodromy inverse(const FlatSurface& s, const Monodromy& m) {
  const auto& a = m.matrix;
  Scalar det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
  std::array<std::array<Scalar, 2>, 2> inv = {{{a[1][1] / det, -a[0][1] / det}, {-a[1][0] / det, a[0][0] / det}}};
  const auto& im = m.centroid_image.front();
  Monodromy out = affine_from(s, inv, {im.tri, im.point}, {0, s.centroid(0)}, im.sign);
  out.word = m.word.empty() ? "" : "(" + m.word + ")^-1";
  return out;
}

SurfacePoint map_point(const FlatSurface& s, const Monodromy& m, const SurfacePoint& p, int* sign) {
  const auto& im = m.centroid_image[p.tri];
  int g = 1;
  SurfacePoint out = follow(s, {im.tri, im.point}, scaled(im.sign, mat_apply(m.matrix, p.p - s.centroid(p.tri))), &g);
  if (sign) *sign = g * im.sign;
  return out;
}

SaddleConnection apply_monodromy(const FlatSurface& s, const Monodromy& m, const SaddleConnection& sc) {
  const SegmentPiece& first = sc.pieces.front();
  Scalar tm = Scalar::rational(1, 2) * (first.t0 + first.t1);
  Transform inv = first.g.inverse();
  SurfacePoint mid{first.tri, inv.apply(tm * sc.hol)};
  int sigma = 1;
  SurfacePoint q = map_point(s, m, mid, &sigma);
  Vec2 w = scaled(sigma, mat_apply(m.matrix, inv.apply_linear(sc.hol)));
  TraceResult back = s.trace_from_point(q, -(tm * w));
  if (back.status != TraceResult::Status::reached_vertex)
    throw SurfaceError("monodromy image of a saddle connection does not start at a cone point");
  const SegmentPiece& last = back.pieces.back();
  Vec2 dir = last.g.inverse().apply_linear(w);
  return s.connection_or_throw(s.normalize_key(last.tri, back.end_corner, dir));
}

ImmersedRectangle apply_monodromy(const FlatSurface& s, const Monodromy& m, const ImmersedRectangle& r) {
  if (!m.matrix[0][1].is_zero() || !m.matrix[1][0].is_zero())
    throw SurfaceError("rectangles map only under a diagonal monodromy");
  const Triangle& t = s.triangles()[r.seed.tri];
  std::vector<Vec2> poly;
  for (int k = 0; k < 3; ++k) poly.push_back(r.seed.g.apply(t.v[k]));
  const Vec2 c00(r.x0, r.y0), c10(r.x1, r.y0), c11(r.x1, r.y1), c01(r.x0, r.y1);
  poly = clip_left(poly, c00, c10);
  poly = clip_left(poly, c10, c11);
  poly = clip_left(poly, c11, c01);
  poly = clip_left(poly, c01, c00);
  if (poly.size() < 3) throw SurfaceError("rectangle seed does not meet the rectangle");
  Vec2 x(Scalar(0), Scalar(0));
  for (const auto& p : poly) x += p;
  x = Scalar(mpq_class(1, static_cast<long>(poly.size()))) * x;
  SurfacePoint p{r.seed.tri, r.seed.g.inverse().apply(x)};
  int sigma = 1;
  SurfacePoint q = map_point(s, m, p, &sigma);
  const int turn = sigma * r.seed.g.sign;
  const Vec2 mx = mat_apply(m.matrix, x);
  ImmersedRectangle out;
  out.seed = {q.tri, {turn, mx - scaled(turn, q.p)}};
  Scalar a = m.matrix[0][0] * r.x0, b = m.matrix[0][0] * r.x1;
  Scalar c = m.matrix[1][1] * r.y0, d = m.matrix[1][1] * r.y1;
  out.x0 = min(a, b);
  out.x1 = max(a, b);
  out.y0 = min(c, d);
  out.y1 = max(c, d);
  return out;
}

Monodromy compose(const FlatSurface& s, const Monodromy& outer, const Monodromy& inner) {
  Monodromy m;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      m.matrix[r][c] = outer.matrix[r][0] * inner.matrix[0][c] + outer.matrix[r][1] * inner.matrix[1][c];
  m.word = outer.word + inner.word;
  for (const auto& im : inner.centroid_image) {
    int sg = 1;
    SurfacePoint q = map_point(s, outer, {im.tri, im.point}, &sg);
    m.centroid_image.push_back({q.tri, q.p, sg * im.sign});
  }
  return m;
}

Monodromy identity_monodromy(const FlatSurface& s) {
  Monodromy m;
  m.matrix = {{{Scalar(1), Scalar(0)}, {Scalar(0), Scalar(1)}}};
  for (size_t t = 0; t < s.triangles().size(); ++t)
    m.centroid_image.push_back({static_cast<int>(t), s.centroid(static_cast<int>(t)), 1});
  return m;
}

}  // namespace veering
