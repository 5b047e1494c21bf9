#include "veering/hulls.hpp"

#include <algorithm>
#include <map>

namespace veering {

namespace {

using Mode = FlatSurface::DevelopMode;

struct Params {
  Scalar lo, hi;
};

// Parameters along h where p's vertical and horizontal lines cross the segment [0, h].
Params params(const Vec2& h, const Vec2& p) {
  Scalar tx = p.x / h.x, ty = p.y / h.y;
  if (tx < ty) return {std::move(tx), std::move(ty)};
  return {std::move(ty), std::move(tx)};
}

// Rectangle (side 0) or right triangle on one side with hypotenuse [a h, b h].
ConvexRegion slide_region(const Vec2& h, const Scalar& a, const Scalar& b, int side) {
  const Vec2 p = a * h, q = b * h;
  if (side == 0) return ConvexRegion::box(min(p.x, q.x), max(p.x, q.x), min(p.y, q.y), max(p.y, q.y));
  const Vec2 c1(p.x, q.y), c2(q.x, p.y);
  const Vec2& c = side * cross(h, c1 - p).sign() > 0 ? c1 : c2;
  if (side > 0) return ConvexRegion({p, q, c});
  return ConvexRegion({p, c, q});
}

Development develop_checked(const FlatSurface& s, const ConvexRegion& r, const Copy& seed, Mode mode) {
  Development d = s.develop(r, seed, mode);
  if (d.exhausted) throw UnboundedError("hull development exceeded its budget");
  return d;
}

bool is_free(const FlatSurface& s, const ConvexRegion& r, const Copy& seed) {
  if (r.empty_interior()) return true;
  return develop_checked(s, r, seed, Mode::stop_at_interior).interior.empty();
}

void sort_unique(std::vector<Scalar>& v) {
  std::sort(v.begin(), v.end(), [](const Scalar& a, const Scalar& b) { return a < b; });
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Largest entry of sorted cands satisfying a predicate that holds on a prefix.
template <class Pred>
std::optional<Scalar> largest_free(const std::vector<Scalar>& cands, Pred&& free_at) {
  std::ptrdiff_t lo = -1, hi = static_cast<std::ptrdiff_t>(cands.size());
  while (hi - lo > 1) {
    std::ptrdiff_t mid = (lo + hi) / 2;
    if (free_at(cands[mid])) lo = mid;
    else hi = mid;
  }
  if (lo < 0) return std::nullopt;
  return cands[lo];
}

struct SlideStep {
  Scalar a, b;
  Development dev;  // full development of the maximal region
};

// Maximal free regions with a diagonal (or hypotenuse) on sc, ordered along sc.
std::vector<SlideStep> slide(const FlatSurface& s, const SaddleConnection& sc, int side) {
  const Vec2& h = sc.hol;
  if (h.x.is_zero() || h.y.is_zero()) throw SurfaceError("hulls need a connection that is not horizontal or vertical");
  const Scalar one(1);
  auto seed = [&](const Scalar& a, const Scalar& b) { return s.seed_between(sc, a, b, side); };
  auto free_at = [&](const Scalar& a, const Scalar& b) { return is_free(s, slide_region(h, a, b, side), seed(a, b)); };
  std::vector<SlideStep> out;
  Scalar a(0);
  for (size_t guard = 0;; ++guard) {
    if (guard > 100000) throw UnboundedError("hull slide did not terminate");
    Development big = develop_checked(s, slide_region(h, a, one, side), seed(a, one), Mode::full);
    std::vector<Scalar> cand{one};
    for (const auto& v : big.interior) cand.push_back(params(h, v.pos).hi);
    sort_unique(cand);
    auto b = largest_free(cand, [&](const Scalar& c) { return free_at(a, c); });
    if (!b) throw SurfaceError("hull slide found no free region");
    Development dev = develop_checked(s, slide_region(h, a, *b, side), seed(a, *b), Mode::full);
    out.push_back({a, *b, std::move(dev)});
    if (*b == one) break;
    // next start: the latest-starting cone point that blocks further growth
    std::optional<Scalar> next;
    for (const auto& v : out.back().dev.boundary) {
      Params p = params(h, v.pos);
      if (p.hi == *b && p.lo > a && (!next || p.lo > *next)) next = p.lo;
    }
    if (!next) throw SurfaceError("hull slide found no blocking cone point");
    a = *next;
  }
  return out;
}

// Counterclockwise convex hull, collinear points dropped.
std::vector<size_t> hull_indices(const std::vector<Vec2>& pts) {
  std::vector<size_t> idx(pts.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](size_t i, size_t j) {
    if (pts[i].x != pts[j].x) return pts[i].x < pts[j].x;
    return pts[i].y < pts[j].y;
  });
  if (idx.size() < 3) return idx;
  std::vector<size_t> h(2 * idx.size());
  size_t k = 0;
  for (size_t i : idx) {
    while (k >= 2 && orient(pts[h[k - 2]], pts[h[k - 1]], pts[i]) <= 0) --k;
    h[k++] = i;
  }
  for (size_t t = idx.size() - 1, lower = k + 1; t-- > 0;) {
    size_t i = idx[t];
    while (k >= lower && orient(pts[h[k - 2]], pts[h[k - 1]], pts[i]) <= 0) --k;
    h[k++] = i;
  }
  h.resize(k - 1);
  return h;
}

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::vector<Vec2> out;
  for (size_t i : hull_indices(pts)) out.push_back(pts[i]);
  return out;
}

SaddleConnection reversed(const FlatSurface& s, const SaddleConnection& sc) {
  return s.connection_or_throw(sc.reverse);
}

}  // namespace

RectHullResult rect_hull(const FlatSurface& s, const SaddleConnection& sc) {
  RectHullResult res;
  res.source = sc;
  std::map<ConnectionKey, TauEdge> edges;
  const Vec2& h = sc.hol;
  for (auto& step : slide(s, sc, 0)) {
    HullRect hr;
    const Vec2 p = step.a * h, q = step.b * h;
    hr.rect.seed = s.seed_between(sc, step.a, step.b, 0);
    hr.rect.x0 = min(p.x, q.x);
    hr.rect.x1 = max(p.x, q.x);
    hr.rect.y0 = min(p.y, q.y);
    hr.rect.y1 = max(p.y, q.y);
    hr.a = step.a;
    hr.b = step.b;
    hr.boundary = step.dev.boundary;
    std::vector<Vec2> pos;
    for (const auto& v : hr.boundary) pos.push_back(v.pos);
    std::vector<size_t> hull = hull_indices(pos);
    if (hull.size() < 2) {
      res.anomalies.push_back("maximal rectangle with fewer than two boundary cone points");
    } else {
      const size_t m = hull.size() == 2 ? 1 : hull.size();
      for (size_t i = 0; i < m; ++i) {
        const DevVertex& from = hr.boundary[hull[i]];
        const DevVertex& to = hr.boundary[hull[(i + 1) % hull.size()]];
        auto e = s.connection_between(step.dev, from, to.pos);
        if (!e) {
          res.anomalies.push_back("hull edge " + to_string(from.pos) + " -> " + to_string(to.pos) +
                                  " is not a saddle connection");
          continue;
        }
        auto te = is_tau_edge(s, *e);
        if (!te) {
          res.anomalies.push_back("hull edge " + to_string(e->hol) + " is not a tau-edge");
          continue;
        }
        edges.emplace(te->key(), std::move(*te));
      }
    }
    res.rectangles.push_back(std::move(hr));
  }
  for (auto& [k, e] : edges) res.edges.push_back(std::move(e));
  return res;
}

std::vector<TauEdge> rect_hull_edges(const FlatSurface& s, const std::vector<SaddleConnection>& scs) {
  std::map<ConnectionKey, TauEdge> all;
  for (const auto& sc : scs)
    for (auto& e : rect_hull(s, sc).edges) all.emplace(e.key(), std::move(e));
  std::vector<TauEdge> out;
  for (auto& [k, e] : all) out.push_back(std::move(e));
  return out;
}

TriHullResult tri_hull(const FlatSurface& s, const SaddleConnection& sc, HullSide side) {
  if (side != 1 && side != -1) throw SurfaceError("hull side must be +1 or -1");
  TriHullResult res;
  res.source = sc;
  res.side = side;
  const Vec2& h = sc.hol;
  const Scalar zero(0), one(1);
  auto steps = slide(s, sc, side);
  res.points.push_back(Vec2(zero, zero));
  for (auto& step : steps) {
    HullTriangle tr;
    const ConvexRegion region = slide_region(h, step.a, step.b, side);
    const auto& verts = region.vertices();
    for (int k = 0; k < 3; ++k) tr.corners[k] = verts[k];
    tr.a = step.a;
    tr.b = step.b;
    std::vector<const DevVertex*> lo, hi;
    for (const auto& v : step.dev.boundary) {
      if (step.a.is_zero() ? v.pos.is_zero() : params(h, v.pos).lo == step.a) lo.push_back(&v);
      if (step.b == one ? v.pos == h : params(h, v.pos).hi == step.b) hi.push_back(&v);
    }
    if (lo.size() != 1 || hi.size() != 1)
      res.anomalies.push_back("triangle leg with " + std::to_string(lo.size()) + " and " +
                              std::to_string(hi.size()) + " cone points");
    if (lo.empty() || hi.empty()) throw SurfaceError("maximal triangle has an empty leg");
    tr.lo = *lo.front();
    tr.hi = *hi.front();
    if (tr.lo.pos != res.points.back()) res.anomalies.push_back("triangle hull path does not chain");
    if (steps.size() == 1) {
      res.path.push_back(sc);
    } else {
      auto e = s.connection_between(step.dev, tr.lo, tr.hi.pos);
      if (!e) throw SurfaceError("triangle hull edge is not a saddle connection");
      res.path.push_back(std::move(*e));
    }
    res.points.push_back(tr.hi.pos);
    res.triangles.push_back(std::move(tr));
  }
  if (steps.size() > 1) {
    if (side > 0) {
      res.polygon = {res.points.front(), res.points.back()};
      for (size_t i = res.points.size() - 1; i-- > 1;) res.polygon.push_back(res.points[i]);
    } else {
      res.polygon = res.points;
    }
  }
  return res;
}

namespace {

// Closed segments [a, b] and [c, d] share a point.
bool segments_meet(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  auto on = [](const Vec2& p, const Vec2& q, const Vec2& r) {
    return orient(p, q, r) == 0 && min(p.x, q.x) <= r.x && r.x <= max(p.x, q.x) && min(p.y, q.y) <= r.y &&
           r.y <= max(p.y, q.y);
  };
  return on(a, b, c) || on(a, b, d) || on(c, d, a) || on(c, d, b);
}

}  // namespace

std::vector<std::string> polygon_violations(const FlatSurface& s, const TriHullResult& r) {
  std::vector<std::string> out;
  const Vec2& h = r.source.hol;
  if (r.path.empty() || r.points.size() != r.path.size() + 1) return {"path and vertex list disagree"};
  if (!r.points.front().is_zero() || r.points.back() != h) out.push_back("path does not close up with the source");
  for (size_t i = 0; i < r.path.size(); ++i) {
    const auto& e = r.path[i];
    if (e.hol != r.points[i + 1] - r.points[i]) out.push_back("path edge " + std::to_string(i) + " holonomy mismatch");
    int want = i == 0 ? r.source.start : r.path[i - 1].end;
    if (e.start != want) out.push_back("path edge " + std::to_string(i) + " starts at the wrong cone point");
  }
  if (r.path.back().end != r.source.end) out.push_back("path ends at the wrong cone point");
  if (r.degenerate()) {
    if (r.path.size() != 1 || !r.path[0].same_as(r.source)) out.push_back("degenerate hull differs from the source");
    return out;
  }
  for (size_t i = 1; i + 1 < r.points.size(); ++i)
    if (r.side * cross(h, r.points[i]).sign() <= 0) out.push_back("path vertex on the wrong side of the source");
  const auto& P = r.polygon;
  const size_t n = P.size();
  Scalar area2(0);
  for (size_t i = 0; i < n; ++i) area2 += cross(P[i], P[(i + 1) % n]);
  if (area2.sign() <= 0) out.push_back("polygon is not counterclockwise");
  for (size_t i = 0; i < n; ++i) {
    const Vec2 &a = P[i], &b = P[(i + 1) % n];
    for (size_t j = i + 1; j < n; ++j) {
      const Vec2 &c = P[j], &d = P[(j + 1) % n];
      bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (!adjacent) {
        if (segments_meet(a, b, c, d)) out.push_back("polygon edges " + std::to_string(i) + ", " + std::to_string(j) + " meet");
      } else {
        const Vec2& shared = j == i + 1 ? b : a;
        const Vec2& p = j == i + 1 ? a : b;
        const Vec2& q = j == i + 1 ? d : c;
        if (orient(p, shared, q) == 0 && dot(p - shared, q - shared).sign() > 0)
          out.push_back("adjacent polygon edges overlap");
      }
    }
  }
  // every path edge cobounds a free vertical and a free horizontal strip with the source
  for (size_t i = 0; i < r.path.size(); ++i) {
    const Vec2 &p = r.points[i], &q = r.points[i + 1];
    for (int axis = 0; axis < 2; ++axis) {
      Scalar tp = axis == 0 ? p.x / h.x : p.y / h.y;
      Scalar tq = axis == 0 ? q.x / h.x : q.y / h.y;
      if (tp.sign() < 0 || tq > Scalar(1) || !(tp < tq)) {
        out.push_back("path edge " + std::to_string(i) + " leaves the source's strip");
        continue;
      }
      ConvexRegion strip(convex_hull({tp * h, tq * h, q, p}));
      if (!is_free(s, strip, s.seed_between(r.source, tp, tq, r.side)))
        out.push_back("strip under path edge " + std::to_string(i) + " contains a cone point");
    }
  }
  return out;
}

Vec2 push_point(const TriHullResult& r, const Scalar& t, PushSign sign) {
  const Vec2 x = t * r.source.hol;
  if (r.degenerate()) return x;
  const bool vertical = sign == PushSign::vertical;
  const Scalar& key = vertical ? x.x : x.y;
  for (size_t i = 0; i + 1 < r.points.size(); ++i) {
    const Vec2 &p = r.points[i], &q = r.points[i + 1];
    const Scalar &kp = vertical ? p.x : p.y, &kq = vertical ? q.x : q.y;
    if (key < min(kp, kq) || key > max(kp, kq)) continue;
    Scalar u = (key - kp) / (kq - kp);
    return p + u * (q - p);
  }
  throw SurfaceError("point is outside the hull polygon's strip");
}

Scalar pull_point(const TriHullResult& r, const Vec2& p, PushSign sign) {
  const Vec2& h = r.source.hol;
  return sign == PushSign::vertical ? p.x / h.x : p.y / h.y;
}

std::vector<SaddleConnection> thull_push(const FlatSurface& s, const std::vector<SaddleConnection>& path,
                                         HullSide side) {
  std::vector<SaddleConnection> out;
  for (const auto& sc : path)
    for (auto& e : tri_hull(s, sc, side).path) out.push_back(std::move(e));
  return out;
}

int compare_angle_with_pi(const FlatSurface& s, const ConnectionKey& a, const ConnectionKey& b, Vec2* b_in_a) {
  const auto& tris = s.triangles();
  const Vec2& d1 = a.hol;
  int t = a.tri, c = a.corner;
  Transform frame;
  const size_t limit = s.cone_points()[tris[t].cone[c]].sectors.size() + 1;
  for (size_t i = 0; i <= limit; ++i) {
    const Triangle& tr = tris[t];
    if (t == b.tri && c == b.corner) {
      Vec2 d2 = frame.apply_linear(b.hol);
      int cr = cross(d1, d2).sign();
      bool same_dir = cr == 0 && dot(d1, d2).sign() > 0;
      if (i > 0 || cr > 0 || same_dir) {
        if (cr > 0 || same_dir) {
          if (b_in_a) *b_in_a = d2;
          return -1;
        }
        return cr == 0 ? 0 : 1;
      }
    }
    Vec2 hi = frame.apply_linear(tr.v[(c + 2) % 3] - tr.v[c]);
    int ch = cross(d1, hi).sign();
    const int e = (c + 2) % 3;
    frame = frame.compose(tr.glue[e]);
    const int nt = tr.nbr[e], nc = tr.nbr_edge[e];
    t = nt;
    c = nc;
    if (ch < 0) return 1;
    if (ch == 0) {
      // the sector boundary is exactly opposite a
      if (t == b.tri && c == b.corner && cross(d1, frame.apply_linear(b.hol)).sign() == 0) return 0;
      return 1;
    }
  }
  throw SurfaceError("angle walk did not reach the second direction");
}

namespace {

// Geodesic from the far end u of ka to w = v + b, homotopic to u-v-w, where the
// counterclockwise angle at v from ka to b is below pi; frame is ka's chart.
std::vector<SaddleConnection> sweep_chain(const FlatSurface& s, const ConnectionKey& ka, const Vec2& b,
                                          int budget) {
  const auto& tris = s.triangles();
  const Triangle& t0 = tris[ka.tri];
  const Vec2 v = t0.v[ka.corner];
  const int vcone = t0.cone[ka.corner];
  const Vec2 w = v + b;
  Vec2 cur = v + ka.hol;
  Copy seed{ka.tri, Transform{}};
  std::vector<SaddleConnection> chain;
  const Scalar one(1);
  for (int guard = 0; guard < budget; ++guard) {
    auto region = [&](const Scalar& al) { return ConvexRegion({v, cur, v + al * (w - v)}); };
    auto alpha = [&](const Vec2& p) -> std::optional<Scalar> {
      Vec2 d = p - cur;
      Scalar den = cross(d, w - v);
      if (den.is_zero()) return std::nullopt;
      return cross(d, cur - v) / den;
    };
    Development big = develop_checked(s, region(one), seed, Mode::full);
    std::vector<Scalar> cand{one};
    for (const auto& p : big.interior) {
      auto al = alpha(p.pos);
      if (al && al->sign() > 0 && *al < one) cand.push_back(*al);
    }
    sort_unique(cand);
    auto H = largest_free(cand, [&](const Scalar& al) { return is_free(s, region(al), seed); });
    if (!H) throw TighteningError("tightening sweep found no free triangle");
    Development dev = develop_checked(s, region(*H), seed, Mode::full);
    const Vec2 q = v + *H * (w - v);
    const DevVertex* from = nullptr;
    const DevVertex* next = nullptr;
    for (const auto& p : dev.boundary) {
      if (p.pos == cur) from = &p;
      if (p.pos == cur || p.pos == q || p.pos == v) continue;
      auto al = alpha(p.pos);
      if (!al || *al != *H || orient(cur, q, p.pos) != 0) continue;
      if (!next || dot(p.pos - cur, q - cur) < dot(next->pos - cur, q - cur)) next = &p;
    }
    if (!from) throw TighteningError("tightening lost its current vertex");
    const Vec2 target = next ? next->pos : w;
    if (!next && *H != one) throw TighteningError("tightening sweep found no blocking cone point");
    auto e = s.connection_between(dev, *from, target);
    if (!e) throw TighteningError("tightened piece is not a saddle connection");
    chain.push_back(std::move(*e));
    if (!next) return chain;
    // new seed: the copy holding the sector at v that points at the new vertex
    const Vec2 d = next->pos - v;
    bool found = false;
    for (const auto& cp : dev.copies) {
      const Triangle& tr = tris[cp.tri];
      for (int k = 0; k < 3 && !found; ++k) {
        if (tr.cone[k] != vcone || cp.g.apply(tr.v[k]) != v) continue;
        Vec2 lo = cp.g.apply_linear(tr.v[(k + 1) % 3] - tr.v[k]);
        Vec2 hi = cp.g.apply_linear(tr.v[(k + 2) % 3] - tr.v[k]);
        if (cross(lo, d).sign() >= 0 && cross(d, hi).sign() > 0) {
          seed = cp;
          found = true;
        }
      }
      if (found) break;
    }
    if (!found) throw TighteningError("tightening lost the sector at the junction");
    cur = next->pos;
  }
  throw TighteningError("tightening budget exceeded");
}

}  // namespace

std::vector<SaddleConnection> tighten(const FlatSurface& s, std::vector<SaddleConnection> path, int budget) {
  for (int round = 0; round < budget; ++round) {
    bool changed = false;
    for (size_t i = 0; i + 1 < path.size() && !changed; ++i) {
      const SaddleConnection& x = path[i];
      const SaddleConnection& y = path[i + 1];
      if (x.end != y.start) throw TighteningError("path pieces do not join");
      const ConnectionKey& back = x.reverse;
      const ConnectionKey& fwd = y.key;
      if (back == fwd) {
        path.erase(path.begin() + static_cast<std::ptrdiff_t>(i), path.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        changed = true;
        break;
      }
      Vec2 rel;
      std::vector<SaddleConnection> chain;
      if (compare_angle_with_pi(s, back, fwd, &rel) < 0) {
        chain = sweep_chain(s, back, rel, budget);
      } else if (compare_angle_with_pi(s, fwd, back, &rel) < 0) {
        auto rev = sweep_chain(s, fwd, rel, budget);
        for (auto it = rev.rbegin(); it != rev.rend(); ++it) chain.push_back(reversed(s, *it));
      } else {
        continue;
      }
      path.erase(path.begin() + static_cast<std::ptrdiff_t>(i), path.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      path.insert(path.begin() + static_cast<std::ptrdiff_t>(i), chain.begin(), chain.end());
      changed = true;
    }
    if (path.empty()) throw TighteningError("arc is null-homotopic");
    if (!changed) return path;
  }
  throw TighteningError("tightening budget exceeded");
}

MaximalCylinder maximal_cylinder(const FlatSurface& s, const ClosedCurve& c, int budget) {
  const Vec2& w = c.holonomy;
  if (w.is_zero()) throw TighteningError("closed curve has zero holonomy");
  const auto& tris = s.triangles();
  TraceResult tr = s.trace_from_point(c.point, w);
  if (tr.status != TraceResult::Status::ended_inside) throw TighteningError("closed curve passes through a cone point");
  {
    const SegmentPiece& last = tr.pieces.back();
    if (last.g.sign != 1) throw TighteningError("closed curve returns with reversed direction");
    Vec2 end = last.g.inverse().apply(c.point.p + w);
    bool closes = last.tri == c.point.tri && end == c.point.p;
    const Triangle& t = tris[last.tri];
    for (int k = 0; k < 3 && !closes; ++k)
      closes = t.nbr[k] == c.point.tri && orient(t.v[k], t.v[(k + 1) % 3], end) == 0 &&
               t.glue[k].inverse().apply(end) == c.point.p;
    if (!closes) throw TighteningError("curve does not close up");
  }
  // copies along the core, frame = chart of the start triangle
  std::vector<Copy> seeds;
  for (const auto& p : tr.pieces) {
    seeds.push_back({p.tri, p.g});
    const Triangle& t = tris[p.tri];
    for (int k = 0; k < 3; ++k) seeds.push_back({t.nbr[k], p.g.compose(t.glue[k])});
  }
  const Vec2& x = c.point.p;
  MaximalCylinder cyl{c, {}, Scalar(0), Scalar(0), {}, {}};
  std::map<ConnectionKey, SaddleConnection> found;
  for (int side : {1, -1}) {
    const Vec2 n = side > 0 ? Vec2(-w.y, w.x) : Vec2(w.y, -w.x);
    auto region = [&](const Scalar& h) {
      Vec2 A = x - w, B = x + Scalar(2) * w, C = B + h * n, D = A + h * n;
      return side > 0 ? ConvexRegion({A, B, C, D}) : ConvexRegion({A, D, C, B});
    };
    auto seed_for = [&](const ConvexRegion& r) {
      for (const auto& cp : seeds) {
        const Triangle& t = tris[cp.tri];
        std::array<Vec2, 3> tri{cp.g.apply(t.v[0]), cp.g.apply(t.v[1]), cp.g.apply(t.v[2])};
        if (r.meets_polygon_interior(tri)) return cp;
      }
      throw TighteningError("no copy along the core meets the cylinder region");
    };
    auto free_at = [&](const Scalar& h) {
      ConvexRegion r = region(h);
      return is_free(s, r, seed_for(r));
    };
    const Scalar nn = cross(w, n);
    auto beta = [&](const Vec2& p) { return cross(w, p - x) / nn; };
    Scalar hmax(1);
    for (int k = 0; free_at(hmax); ++k) {
      if (k > budget) throw UnboundedError("cylinder has no boundary on one side");
      hmax = hmax + hmax;
    }
    ConvexRegion rbig = region(hmax);
    Development big = develop_checked(s, rbig, seed_for(rbig), Mode::full);
    std::vector<Scalar> cand;
    for (const auto& p : big.interior) cand.push_back(beta(p.pos));
    sort_unique(cand);
    auto H = largest_free(cand, free_at);
    if (!H) throw TighteningError("cylinder height search failed");
    (side > 0 ? cyl.height_left : cyl.height_right) = *H;
    ConvexRegion rh = region(*H);
    Development dev = develop_checked(s, rh, seed_for(rh), Mode::full);
    std::vector<std::pair<Scalar, const DevVertex*>> top;
    for (const auto& p : dev.boundary) {
      if (beta(p.pos) != *H) continue;
      Scalar al = cross(p.pos - x, n) / nn;
      if (al.sign() >= 0 && al < Scalar(1)) top.emplace_back(al, &p);
    }
    if (top.empty()) throw TighteningError("cylinder boundary has no cone point");
    std::sort(top.begin(), top.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
    for (const auto& [al, v] : top) (side > 0 ? cyl.cones_left : cyl.cones_right).push_back(al);
    auto vertex_at = [&](const Vec2& pos) -> const DevVertex* {
      for (const auto& p : dev.boundary)
        if (p.pos == pos) return &p;
      return nullptr;
    };
    for (size_t i = 0; i < top.size(); ++i) {
      const DevVertex* a = top[i].second;
      Vec2 bpos = i + 1 < top.size() ? top[i + 1].second->pos : top[0].second->pos + w;
      const DevVertex* b = vertex_at(bpos);
      if (!b) throw TighteningError("cylinder boundary vertex missing from the development");
      // trace from the end whose counterclockwise sector faces the cylinder
      auto e = side > 0 ? s.connection_between(dev, *b, a->pos) : s.connection_between(dev, *a, bpos);
      if (!e) throw TighteningError("cylinder boundary piece is not a saddle connection");
      found.emplace(e->canonical(), std::move(*e));
    }
  }
  for (auto& [k, e] : found) cyl.boundary.push_back(std::move(e));
  return cyl;
}

std::vector<SaddleConnection> cylinder_boundary(const FlatSurface& s, const ClosedCurve& c, int budget) {
  return maximal_cylinder(s, c, budget).boundary;
}

std::vector<SaddleConnection> saddle_decompose(const FlatSurface& s, const ArcOrCurve& a) {
  std::vector<SaddleConnection> raw;
  if (const auto* arc = std::get_if<ArcPath>(&a)) {
    if (arc->pieces.empty()) throw TighteningError("empty arc");
    raw = arc->pieces.size() == 1 ? arc->pieces : tighten(s, arc->pieces);
  } else {
    raw = cylinder_boundary(s, std::get<ClosedCurve>(a));
  }
  std::map<ConnectionKey, SaddleConnection> uniq;
  for (auto& e : raw) uniq.emplace(e.canonical(), std::move(e));
  std::vector<SaddleConnection> out;
  for (auto& [k, e] : uniq) out.push_back(std::move(e));
  return out;
}

std::vector<TauEdge> retract_to_tau(const FlatSurface& s, const ArcOrCurve& a) {
  return rect_hull_edges(s, saddle_decompose(s, a));
}

}  // namespace veering
