#include <algorithm>
#include <map>
#include <set>

#include "veering/surface.hpp"

namespace veering {

int key_compare(const ConnectionKey& a, const ConnectionKey& b) {
  if (a.tri != b.tri) return a.tri < b.tri ? -1 : 1;
  if (a.corner != b.corner) return a.corner < b.corner ? -1 : 1;
  return key_compare(a.hol, b.hol);
}

bool FlatSurface::sector_contains(int tri, int corner, const Vec2& d) const {
  const auto& t = tris_[tri];
  Vec2 lo = t.v[(corner + 1) % 3] - t.v[corner];
  Vec2 hi = t.v[(corner + 2) % 3] - t.v[corner];
  return cross(lo, d).sign() >= 0 && cross(d, hi).sign() > 0;
}

ConnectionKey FlatSurface::normalize_key(int tri, int corner, const Vec2& d) const {
  int t = tri, k = corner;
  Vec2 dir = d;
  const size_t limit = cones_.empty() ? 3 * tris_.size() + 3 : cones_[tris_[tri].cone[corner]].sectors.size() + 1;
  for (size_t i = 0; i <= limit; ++i) {
    if (sector_contains(t, k, dir)) return {t, k, dir};
    const auto& tr = tris_[t];
    int e = (k + 2) % 3;
    dir = tr.glue[e].inverse().apply_linear(dir);
    int nt = tr.nbr[e], nk = tr.nbr_edge[e];
    t = nt;
    k = nk;
  }
  throw SurfaceError("direction is not in any sector of the cone point");
}

namespace {

struct Event {
  bool valid = false;
  bool vertex = false;
  int index = -1;
  Scalar t;
};

}  // namespace

static TraceResult run_trace(const FlatSurface& s, int tri, Transform g, int entry, Scalar t_cur,
                             const Vec2& origin, const Vec2& v) {
  TraceResult res;
  const auto& tris = s.triangles();
  const Scalar vv = dot(v, v);
  for (size_t step = 0; step < 2000000; ++step) {
    const Triangle& t = tris[tri];
    std::array<Vec2, 3> p;
    std::array<int, 3> side{};
    for (int k = 0; k < 3; ++k) {
      p[k] = g.apply(t.v[k]);
      side[k] = cross(v, p[k] - origin).sign();
    }
    Event best;
    auto offer = [&](bool vertex, int index, Scalar te) {
      if (!(te > t_cur)) return;
      if (!best.valid || te < best.t) best = {true, vertex, index, std::move(te)};
    };
    for (int k = 0; k < 3; ++k)
      if (side[k] == 0) offer(true, k, dot(p[k] - origin, v) / vv);
    for (int k = 0; k < 3; ++k) {
      if (k == entry) continue;
      int k1 = (k + 1) % 3;
      if (side[k] * side[k1] >= 0) continue;
      Vec2 e = p[k1] - p[k];
      offer(false, k, cross(p[k] - origin, e) / cross(v, e));
    }
    if (!best.valid) throw SurfaceError("trace left its triangle without an exit");
    SegmentPiece piece{tri, g, t_cur, Scalar(0), entry, -1};
    int cmp_end = (best.t - Scalar(1)).sign();
    if (cmp_end > 0 || (cmp_end == 0 && !best.vertex)) {
      piece.t1 = Scalar(1);
      res.pieces.push_back(std::move(piece));
      res.status = TraceResult::Status::ended_inside;
      res.t_end = Scalar(1);
      return res;
    }
    piece.t1 = best.t;
    if (best.vertex) {
      res.pieces.push_back(std::move(piece));
      res.status = cmp_end == 0 ? TraceResult::Status::reached_vertex : TraceResult::Status::hit_vertex;
      res.t_end = best.t;
      res.end_corner = best.index;
      return res;
    }
    piece.exit = best.index;
    res.pieces.push_back(std::move(piece));
    const int k = best.index;
    g = g.compose(t.glue[k]);
    entry = t.nbr_edge[k];
    tri = t.nbr[k];
    t_cur = best.t;
  }
  throw UnboundedError("trace exceeded its step budget");
}

TraceResult FlatSurface::trace_from_corner(int tri, int corner, const Vec2& v) const {
  if (v.is_zero()) throw SurfaceError("zero holonomy");
  ConnectionKey k = normalize_key(tri, corner, v);
  const auto& t = tris_[k.tri];
  Transform g{1, -t.v[k.corner]};
  return run_trace(*this, k.tri, g, -1, Scalar(0), Vec2(Scalar(0), Scalar(0)), k.hol);
}

TraceResult FlatSurface::trace_from_point(const SurfacePoint& sp, const Vec2& v) const {
  if (v.is_zero()) throw SurfaceError("zero holonomy");
  const auto& t = tris_[sp.tri];
  for (int c = 0; c < 3; ++c)
    if (t.v[c] == sp.p) return trace_from_corner(sp.tri, c, v);
  Transform g;
  for (int k = 0; k < 3; ++k) {
    const Vec2& a = t.v[k];
    const Vec2& b = t.v[(k + 1) % 3];
    if (orient(a, b, sp.p) != 0) continue;
    int dir = cross(b - a, v).sign();
    if (dir < 0) {
      return run_trace(*this, t.nbr[k], g.compose(t.glue[k]), t.nbr_edge[k], Scalar(0), sp.p, v);
    }
    if (dir > 0) return run_trace(*this, sp.tri, g, k, Scalar(0), sp.p, v);
  }
  return run_trace(*this, sp.tri, g, -1, Scalar(0), sp.p, v);
}

TraceResult develop_segment(const FlatSurface& s, const SurfacePoint& start, const Vec2& v) {
  return s.trace_from_point(start, v);
}

std::optional<SaddleConnection> FlatSurface::connection(const ConnectionKey& key0) const {
  ConnectionKey key = normalize_key(key0.tri, key0.corner, key0.hol);
  TraceResult tr = trace_from_corner(key.tri, key.corner, key.hol);
  if (tr.status != TraceResult::Status::reached_vertex) return std::nullopt;
  SaddleConnection sc;
  sc.start = tris_[key.tri].cone[key.corner];
  sc.key = key;
  sc.hol = key.hol;
  const SegmentPiece& last = tr.pieces.back();
  sc.end = tris_[last.tri].cone[tr.end_corner];
  sc.reverse = normalize_key(last.tri, tr.end_corner, last.g.inverse().apply_linear(-key.hol));
  sc.sign_ambivalent = half_translation_;
  sc.pieces = std::move(tr.pieces);
  return sc;
}

SaddleConnection FlatSurface::connection_or_throw(const ConnectionKey& key) const {
  auto sc = connection(key);
  if (!sc) throw SurfaceError("not a saddle connection: " + to_string(key.hol));
  return *sc;
}

std::optional<SaddleConnection> FlatSurface::connection_between(const Development& dev, const DevVertex& from,
                                                                const Vec2& to) const {
  Vec2 d = to - from.pos;
  if (d.is_zero()) return std::nullopt;
  for (const auto& cp : dev.copies) {
    const auto& t = tris_[cp.tri];
    for (int k = 0; k < 3; ++k) {
      if (t.cone[k] != from.cone) continue;
      if (cp.g.apply(t.v[k]) != from.pos) continue;
      Vec2 lo = cp.g.apply_linear(t.v[(k + 1) % 3] - t.v[k]);
      Vec2 hi = cp.g.apply_linear(t.v[(k + 2) % 3] - t.v[k]);
      if (cross(lo, d).sign() >= 0 && cross(d, hi).sign() > 0) {
        auto sc = connection({cp.tri, k, cp.g.inverse().apply_linear(d)});
        if (!sc) return std::nullopt;
        // holonomy and pieces in the development's frame, start at the origin
        sc->hol = d;
        const Transform turn{cp.g.sign, Vec2(Scalar(0), Scalar(0))};
        for (auto& piece : sc->pieces) piece.g = turn.compose(piece.g);
        return sc;
      }
    }
  }
  return std::nullopt;
}

Copy FlatSurface::seed_between(const SaddleConnection& s, const Scalar& a, const Scalar& b, int side) const {
  const auto& first = s.pieces.front();
  const auto& t0 = tris_[s.key.tri];
  Vec2 lo = t0.v[(s.key.corner + 1) % 3] - t0.v[s.key.corner];
  bool along_edge = cross(lo, s.key.hol).sign() == 0;
  if (along_edge) {
    if (side >= 0) return {first.tri, first.g};
    int e = s.key.corner;
    return {t0.nbr[e], first.g.compose(t0.glue[e])};
  }
  for (const auto& p : s.pieces)
    if (p.t0 < b && p.t1 > a) return {p.tri, p.g};
  return {first.tri, first.g};
}

namespace {

// Straight segment in developed form: piece points are g^-1(origin + t hol).
struct Strand {
  const std::vector<SegmentPiece>& pieces;
  const Vec2& hol;
  const Vec2& origin;

  std::pair<Vec2, Vec2> chord(const SegmentPiece& piece) const {
    Transform inv = piece.g.inverse();
    return {inv.apply(origin + piece.t0 * hol), inv.apply(origin + piece.t1 * hol)};
  }
};

// Transverse meeting of two strands away from cone points.
bool strands_cross(const FlatSurface& s, const Strand& a, const Strand& b) {
  const auto& tris = s.triangles();
  // chords of one strand inside a triangle are parallel and span it,
  // so each is determined by its offset across the common direction
  struct Family {
    Vec2 dir;
    std::vector<Scalar> offsets;
  };
  std::map<int, Family> fam;
  for (const auto& piece : a.pieces) {
    auto [it, fresh] = fam.try_emplace(piece.tri);
    if (fresh) it->second.dir = piece.g.inverse().apply_linear(a.hol);
    it->second.offsets.push_back(cross(it->second.dir, a.chord(piece).first));
  }
  for (auto& [tri, f] : fam) std::sort(f.offsets.begin(), f.offsets.end());
  for (const auto& piece : b.pieces) {
    auto it = fam.find(piece.tri);
    if (it == fam.end()) continue;
    const Family& f = it->second;
    auto [p, q] = b.chord(piece);
    Scalar op = cross(f.dir, p), oq = cross(f.dir, q);
    if (op == oq) continue;
    const Scalar& lo = op < oq ? op : oq;
    const Scalar& hi = op < oq ? oq : op;
    const auto& tv = tris[piece.tri].v;
    for (auto o = std::lower_bound(f.offsets.begin(), f.offsets.end(), lo); o != f.offsets.end() && *o <= hi; ++o) {
      if (lo < *o && *o < hi) return true;
      const Vec2& end = *o == op ? p : q;
      if (end != tv[0] && end != tv[1] && end != tv[2]) return true;
    }
  }
  return false;
}

}  // namespace

bool crosses(const FlatSurface& s, const SaddleConnection& a, const SaddleConnection& b) {
  if (a.same_as(b)) return false;
  const Vec2 zero(Scalar(0), Scalar(0));
  return strands_cross(s, {a.pieces, a.hol, zero}, {b.pieces, b.hol, zero});
}

bool crosses_curve(const FlatSurface& s, const SaddleConnection& a, const SurfacePoint& p, const Vec2& hol) {
  TraceResult tr = s.trace_from_point(p, hol);
  if (tr.status != TraceResult::Status::ended_inside) throw SurfaceError("closed curve passes through a cone point");
  const Vec2 zero(Scalar(0), Scalar(0));
  return strands_cross(s, {a.pieces, a.hol, zero}, {tr.pieces, hol, p.p});
}

std::vector<SaddleConnection> enumerate_saddle_connections(const FlatSurface& s, const Scalar& bx,
                                                           const Scalar& by) {
  if (bx.sign() <= 0 || by.sign() <= 0) throw SurfaceError("enumeration box must be positive");
  const auto& tris = s.triangles();
  std::set<ConnectionKey> found;
  auto in_box = [&](const Vec2& p) { return abs(p.x) <= bx && abs(p.y) <= by; };
  // closed window wedge clipped edge meets the closed box
  auto visible = [&](const Vec2& lo, const Vec2& hi, const Vec2& p, const Vec2& q) {
    Vec2 d = q - p;
    Scalar s_lo(0), s_hi(1);
    auto restrict = [&](const Scalar& alpha, const Scalar& beta) {
      // alpha + s beta >= 0
      if (beta.is_zero()) return alpha.sign() >= 0;
      Scalar r = -alpha / beta;
      if (beta.sign() > 0) s_lo = max(s_lo, r);
      else s_hi = min(s_hi, r);
      return true;
    };
    if (!restrict(cross(lo, p), cross(lo, d))) return false;
    if (!restrict(cross(p, hi), cross(d, hi))) return false;
    if (s_lo > s_hi) return false;
    Vec2 a = p + s_lo * d, b = p + s_hi * d;
    if (max(a.x, b.x) < -bx || min(a.x, b.x) > bx) return false;
    if (max(a.y, b.y) < -by || min(a.y, b.y) > by) return false;
    Vec2 dd = b - a;
    if (dd.is_zero()) return true;
    bool pos = false, neg = false;
    for (const Vec2& c : {Vec2(-bx, -by), Vec2(bx, -by), Vec2(bx, by), Vec2(-bx, by)}) {
      int sg = cross(dd, c - a).sign();
      pos |= sg >= 0;
      neg |= sg <= 0;
    }
    return pos && neg;
  };
  struct State {
    int tri;
    Transform g;
    int entry;
    Vec2 lo, hi;
  };
  size_t visited = 0;
  for (size_t ti = 0; ti < tris.size(); ++ti) {
    for (int c = 0; c < 3; ++c) {
      const auto& t = tris[ti];
      Transform g0{1, -t.v[c]};
      Vec2 lo = t.v[(c + 1) % 3] - t.v[c];
      Vec2 hi = t.v[(c + 2) % 3] - t.v[c];
      if (in_box(lo)) found.insert({static_cast<int>(ti), c, lo});
      std::vector<State> stack;
      int e0 = (c + 1) % 3;
      if (visible(lo, hi, lo, hi)) stack.push_back({t.nbr[e0], g0.compose(t.glue[e0]), t.nbr_edge[e0], lo, hi});
      while (!stack.empty()) {
        State st = std::move(stack.back());
        stack.pop_back();
        if (++visited > 20000000) throw UnboundedError("saddle connection enumeration budget exceeded");
        const auto& tr = tris[st.tri];
        const int e = st.entry;
        Vec2 a = st.g.apply(tr.v[e]);
        Vec2 b = st.g.apply(tr.v[(e + 1) % 3]);
        Vec2 r = st.g.apply(tr.v[(e + 2) % 3]);
        const int right_edge = (e + 1) % 3, left_edge = (e + 2) % 3;
        auto push = [&](int edge, const Vec2& wlo, const Vec2& whi, const Vec2& p, const Vec2& q) {
          if (!visible(wlo, whi, p, q)) return;
          stack.push_back({tr.nbr[edge], st.g.compose(tr.glue[edge]), tr.nbr_edge[edge], wlo, whi});
        };
        bool right_of_lo = cross(st.lo, r).sign() <= 0;
        bool left_of_hi = cross(r, st.hi).sign() <= 0;
        if (!right_of_lo && !left_of_hi) {
          if (in_box(r)) found.insert({static_cast<int>(ti), c, r});
          push(right_edge, st.lo, r, b, r);
          push(left_edge, r, st.hi, r, a);
        } else if (right_of_lo) {
          push(left_edge, st.lo, st.hi, r, a);
        } else {
          push(right_edge, st.lo, st.hi, b, r);
        }
      }
    }
  }
  std::map<ConnectionKey, SaddleConnection> unique;
  for (const auto& k : found) {
    auto sc = s.connection(k);
    if (!sc) continue;
    ConnectionKey ck = sc->canonical();
    if (!unique.count(ck)) unique.emplace(ck, std::move(*sc));
  }
  std::vector<SaddleConnection> out;
  out.reserve(unique.size());
  for (auto& [k, sc] : unique) out.push_back(std::move(sc));
  std::stable_sort(out.begin(), out.end(), [](const SaddleConnection& x, const SaddleConnection& y) {
    int c = (abs(x.hol.y) - abs(y.hol.y)).sign();
    if (c != 0) return c < 0;
    c = (abs(x.hol.x) - abs(y.hol.x)).sign();
    if (c != 0) return c < 0;
    return key_compare(x.canonical(), y.canonical()) < 0;
  });
  return out;
}


std::vector<CurveCrossing> curve_crossings(const FlatSurface& s, const SaddleConnection& a, const SurfacePoint& p,
                                           const Vec2& hol) {
  TraceResult tr = s.trace_from_point(p, hol);
  if (tr.status != TraceResult::Status::ended_inside) throw SurfaceError("closed curve passes through a cone point");
  const Vec2 zero(Scalar(0), Scalar(0));
  const Strand sa{a.pieces, a.hol, zero}, sb{tr.pieces, hol, p.p};
  std::map<int, std::vector<const SegmentPiece*>> by_tri;
  for (const auto& piece : tr.pieces) by_tri[piece.tri].push_back(&piece);
  std::vector<CurveCrossing> out;
  for (const auto& pa : a.pieces) {
    auto it = by_tri.find(pa.tri);
    if (it == by_tri.end()) continue;
    auto [P, Q] = sa.chord(pa);
    const Vec2 d = Q - P;
    for (const SegmentPiece* pb : it->second) {
      auto [R, S] = sb.chord(*pb);
      const Vec2 e = S - R;
      const Scalar den = cross(d, e);
      if (den.is_zero()) continue;
      // P + x d = R + y e
      const Scalar x = cross(R - P, e) / den, y = cross(R - P, d) / den;
      if (x.sign() < 0 || Scalar(1) < x || y.sign() < 0 || Scalar(1) < y) continue;
      Scalar t = pb->t0 + y * (pb->t1 - pb->t0);
      if (!(t < Scalar(1))) t = t - Scalar(1);
      const Scalar u = pa.t0 + x * (pa.t1 - pa.t0);
      if (u.sign() <= 0 || !(u < Scalar(1))) continue;
      const Vec2 dir = pb->g.apply_linear(pa.g.inverse().apply_linear(a.hol));
      // a meeting on a triangle edge shows up in both neighbours
      bool dup = false;
      for (const auto& c : out) dup = dup || (c.t == t && c.u == u);
      if (!dup) out.push_back({t, u, dir});
    }
  }
  std::sort(out.begin(), out.end(), [](const CurveCrossing& l, const CurveCrossing& r) { return l.t < r.t; });
  return out;
}

}  // namespace veering
