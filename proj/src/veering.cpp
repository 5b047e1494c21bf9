#include "veering/veering.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace veering {

namespace {

// Memo tables keyed by surface id, oriented key and developing-frame holonomy.
struct FrameKey {
  uint64_t surface;
  ConnectionKey key;
  Vec2 hol;
  int mode;
  friend bool operator<(const FrameKey& a, const FrameKey& b) {
    if (a.surface != b.surface) return a.surface < b.surface;
    if (a.mode != b.mode) return a.mode < b.mode;
    int c = key_compare(a.key, b.key);
    if (c != 0) return c < 0;
    return key_compare(a.hol, b.hol) < 0;
  }
};

struct Memo {
  std::mutex mu;
  std::map<FrameKey, std::optional<TauEdge>> tau;
  std::map<FrameKey, Tetrahedron> tet;
};

Memo& memo() {
  static Memo m;
  return m;
}

}  // namespace

void clear_veering_caches() {
  Memo& m = memo();
  std::lock_guard lock(m.mu);
  m.tau.clear();
  m.tet.clear();
}

std::optional<TauEdge> is_tau_edge(const FlatSurface& s, const SaddleConnection& sc) {
  if (sc.hol.x.is_zero() || sc.hol.y.is_zero()) return std::nullopt;
  FrameKey fk{s.id(), sc.key, sc.hol, 0};
  Memo& m = memo();
  {
    std::lock_guard lock(m.mu);
    auto it = m.tau.find(fk);
    if (it != m.tau.end()) return it->second;
  }
  ImmersedRectangle r = spanning_rectangle(s, sc);
  std::optional<TauEdge> out;
  if (is_singularity_free(s, r)) out = TauEdge{sc, r};
  std::lock_guard lock(m.mu);
  m.tau.emplace(fk, out);
  return out;
}

TauEdge tau_edge_or_throw(const FlatSurface& s, const SaddleConnection& sc) {
  auto t = is_tau_edge(s, sc);
  if (!t) throw SurfaceError("not a tau-edge: " + to_string(sc.hol));
  return *t;
}

FaceKey make_face_key(const ConnectionKey& a, const ConnectionKey& b, const ConnectionKey& c) {
  FaceKey k{a, b, c};
  std::sort(k.begin(), k.end());
  return k;
}

std::vector<const TauEdge*> Tetrahedron::edges() const {
  return {&top_edge, &bottom_edge, &sides[0], &sides[1], &sides[2], &sides[3]};
}

namespace {

constexpr int kB = static_cast<int>(Corner::bottom);
constexpr int kR = static_cast<int>(Corner::right);
constexpr int kT = static_cast<int>(Corner::top);
constexpr int kL = static_cast<int>(Corner::left);

TauEdge edge_in(const FlatSurface& s, const Development& dev, const DevVertex& a, const DevVertex& b) {
  auto sc = s.connection_between(dev, a, b.pos);
  if (!sc || sc->end != b.cone) throw SurfaceError("rectangle corners are not joined by a saddle connection");
  return tau_edge_or_throw(s, *sc);
}

}  // namespace

Tetrahedron tetrahedron_from_rect(const FlatSurface& s, const ImmersedRectangle& rect) {
  Development dev = s.develop(rect.region(), rect.seed, FlatSurface::DevelopMode::full);
  if (!dev.interior.empty()) throw SurfaceError("tetrahedron rectangle is not singularity-free");
  std::array<int, 4> count{};
  Tetrahedron t;
  t.rect = rect;
  for (const auto& v : dev.boundary) {
    const Vec2& p = v.pos;
    int side = -1;
    bool in_x = p.x > rect.x0 && p.x < rect.x1;
    bool in_y = p.y > rect.y0 && p.y < rect.y1;
    if (in_x && p.y == rect.y0) side = kB;
    else if (in_x && p.y == rect.y1) side = kT;
    else if (in_y && p.x == rect.x0) side = kL;
    else if (in_y && p.x == rect.x1) side = kR;
    if (side < 0) continue;
    if (count[side]++ == 0) t.corners[side] = v;
  }
  for (int c = 0; c < 4; ++c)
    if (count[c] != 1) throw SurfaceError("rectangle is not maximal with one cone point per side");
  const auto& C = t.corners;
  t.top_edge = edge_in(s, dev, C[kB], C[kT]);
  t.bottom_edge = edge_in(s, dev, C[kL], C[kR]);
  t.sides = {edge_in(s, dev, C[kB], C[kR]), edge_in(s, dev, C[kR], C[kT]), edge_in(s, dev, C[kT], C[kL]),
             edge_in(s, dev, C[kL], C[kB])};
  const auto top = t.top_edge.key(), bot = t.bottom_edge.key();
  const auto br = t.sides[0].key(), rt = t.sides[1].key(), tl = t.sides[2].key(), lb = t.sides[3].key();
  t.top_faces = {make_face_key(top, lb, tl), make_face_key(top, br, rt)};
  t.bottom_faces = {make_face_key(bot, rt, tl), make_face_key(bot, br, lb)};
  return t;
}

Tetrahedron tetrahedron_from_edge(const FlatSurface& s, const TauEdge& e, TetraMode mode) {
  FrameKey fk{s.id(), e.sc.key, e.sc.hol, mode == TetraMode::below ? 1 : 2};
  Memo& m = memo();
  {
    std::lock_guard lock(m.mu);
    auto it = m.tet.find(fk);
    if (it != m.tet.end()) return it->second;
  }
  ImmersedRectangle r = e.rect;
  if (mode == TetraMode::below) {
    r = extend_rectangle(s, r, Side::left).rect;
    r = extend_rectangle(s, r, Side::right).rect;
  } else {
    r = extend_rectangle(s, r, Side::up).rect;
    r = extend_rectangle(s, r, Side::down).rect;
  }
  Tetrahedron t = tetrahedron_from_rect(s, r);
  const TauEdge& own = mode == TetraMode::below ? t.top_edge : t.bottom_edge;
  if (!(own.key() == e.key())) throw SurfaceError("tetrahedron does not contain its defining edge");
  std::lock_guard lock(m.mu);
  m.tet.emplace(fk, t);
  return t;
}

int slope_order(const SaddleConnection& e, const SaddleConnection& f) {
  return (abs(e.hol.y) * abs(f.hol.x) - abs(f.hol.y) * abs(e.hol.x)).sign();
}

int slope_compare(const FlatSurface& s, const TauEdge& e, const TauEdge& f) {
  if (!crosses(s, e.sc, f.sc)) throw OrderError("slope comparison of non-crossing edges");
  int c = slope_order(e.sc, f.sc);
  if (c == 0) throw OrderError("crossing tau-edges with equal slopes");
  return c;
}

const TauEdge* edge_between(const Tetrahedron& t, const Vec2& p, const Vec2& q) {
  const auto& C = t.corners;
  const std::array<std::pair<int, int>, 6> ends{{{kB, kT}, {kL, kR}, {kB, kR}, {kR, kT}, {kT, kL}, {kL, kB}}};
  const std::array<const TauEdge*, 6> edges{&t.top_edge, &t.bottom_edge, &t.sides[0],
                                            &t.sides[1], &t.sides[2], &t.sides[3]};
  for (int i = 0; i < 6; ++i) {
    const Vec2& a = C[ends[i].first].pos;
    const Vec2& b = C[ends[i].second].pos;
    if ((a == p && b == q) || (a == q && b == p)) return edges[i];
  }
  return nullptr;
}

EdgeLink edge_link(const FlatSurface& s, const TauEdge& e, LinkSide side, int budget) {
  EdgeLink link;
  link.tets.push_back(tetrahedron_from_edge(s, e, TetraMode::below));
  const Vec2 origin(Scalar(0), Scalar(0));
  const Vec2& h = e.sc.hol;
  const int want = side == LinkSide::left ? 1 : -1;
  {
    const auto& q = link.tets.back();
    int sl = cross(h, q.corners[kL].pos).sign();
    link.faces.push_back({sl == want ? q.corners[kL] : q.corners[kR], {}, {}});
  }
  for (int step = 0;; ++step) {
    if (step > budget) throw UnboundedError("edge link exceeded its budget");
    LinkFace& face = link.faces.back();
    const Tetrahedron& cur = link.tets.back();
    const TauEdge* a = edge_between(cur, origin, face.apex.pos);
    const TauEdge* b = edge_between(cur, h, face.apex.pos);
    if (!a || !b) throw SurfaceError("edge link face is missing from its tetrahedron");
    face.edges = {*a, *b};
    face.key = make_face_key(e.key(), a->key(), b->key());
    const Vec2& p = face.apex.pos;
    ImmersedRectangle r;
    r.seed = e.rect.seed;
    r.x0 = min(min(Scalar(0), h.x), p.x);
    r.x1 = max(max(Scalar(0), h.x), p.x);
    r.y0 = min(min(Scalar(0), h.y), p.y);
    r.y1 = max(max(Scalar(0), h.y), p.y);
    r = extend_rectangle(s, r, Side::up).rect;
    r = extend_rectangle(s, r, Side::down).rect;
    link.tets.push_back(tetrahedron_from_rect(s, r));
    const Tetrahedron& q = link.tets.back();
    if (q.bottom_edge.key() == e.key()) break;
    const DevVertex& top = q.corners[kT];
    const DevVertex& bot = q.corners[kB];
    bool top_new = top.pos != origin && top.pos != h;
    link.faces.push_back({top_new ? top : bot, {}, {}});
  }
  return link;
}

std::vector<TauEdge> enumerate_tau_edges(const FlatSurface& s, const Scalar& bx, const Scalar& by) {
  std::vector<TauEdge> out;
  for (const auto& sc : enumerate_saddle_connections(s, bx, by))
    if (auto t = is_tau_edge(s, sc)) out.push_back(std::move(*t));
  return out;
}

std::optional<SaddleConnection> find_axis_connection(const FlatSurface& s, const Scalar& bx, const Scalar& by) {
  for (auto& sc : enumerate_saddle_connections(s, bx, by))
    if (sc.hol.x.is_zero() || sc.hol.y.is_zero()) return sc;
  return std::nullopt;
}

}  // namespace veering
