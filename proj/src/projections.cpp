#include "veering/projections.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace veering {


std::vector<SubsurfaceSpec> subsurfaces(const FlatSurface& s) {
  std::vector<SubsurfaceSpec> out;
  for (const auto& d : s.document().subsurfaces) {
    SubsurfaceSpec y;
    y.name = d.name;
    y.euler = d.euler;
    if (d.kind == "annulus") {
      y.kind = SubsurfaceKind::annulus;
      if (!d.core_point || !d.core_holonomy)
        throw ProjectionError("annulus " + d.name + " needs a core point and holonomy");
      y.core = ClosedCurve{s.locate(*d.core_point), *d.core_holonomy};
    } else if (d.kind == "low-complexity") {
      y.kind = SubsurfaceKind::low_complexity;
    } else {
      throw ProjectionError("unknown subsurface kind " + d.kind);
    }
    for (const auto& cyc : d.cycles) {
      std::vector<SaddleConnection> scs;
      for (const auto& ref : cyc) scs.push_back(s.connection_or_throw(s.key_from_ref(ref)));
      y.cycles.push_back(std::move(scs));
    }
    out.push_back(std::move(y));
  }
  return out;
}

const SubsurfaceSpec& find_subsurface(const std::vector<SubsurfaceSpec>& ys, const std::string& name) {
  for (const auto& y : ys)
    if (y.name == name) return y;
  throw ProjectionError("no subsurface named " + name);
}

Vec2 horizontal() { return {Scalar(1), Scalar(0)}; }
Vec2 vertical() { return {Scalar(0), Scalar(1)}; }

namespace {

constexpr int kUnknown = 2;

Scalar cot_to_core(const MaximalCylinder& c, const Vec2& d) {
  const Vec2& w = c.core.holonomy;
  Scalar x = cross(w, d);
  if (x.is_zero()) throw ProjectionError("direction is parallel to the core");
  return dot(w, d) / x;
}

Scalar frac(const Scalar& x) { return x - Scalar(mpq_class(x.floor())); }

// Some lift of a cone point lies in [lo, hi].
bool cone_between(const std::vector<Scalar>& cones, const Scalar& lo, const Scalar& hi) {
  for (const auto& f : cones) {
    Scalar k{mpq_class(-(f - lo).floor())};  // ceil(lo - f)
    if (!(hi < f + k)) return true;
  }
  return false;
}

// Order of the ideal ends of a and of b shifted to q, on the boundary whose
// outside lies at sign `outward` in height; kUnknown when it is not determined.
int compare_ends(const StripEnd& a, const StripEnd& b, const Scalar& q, const std::vector<Scalar>& cones,
                 int outward) {
  const Scalar& p = a.pos;
  const int ord = (p - q).sign();
  // a cone lift never lies inside a gap
  if (a.exact || b.exact) return ord;
  if (cone_between(cones, ord < 0 ? p : q, ord < 0 ? q : p)) return ord;
  if (ord == 0) return kUnknown;
  if (a.cot == b.cot) return ord;
  // beyond the boundary the ends continue to pos + outward * eta * cot
  const Scalar eta = Scalar(outward) * (q - p) / (a.cot - b.cot);
  if (eta.sign() <= 0) return ord;
  if ((a.reach && *a.reach < eta) || (b.reach && *b.reach < eta)) return ord;
  if (a.reach && b.reach && *a.reach == eta && *b.reach == eta) return 0;
  // they meet in the development; a puncture between them decides the order
  return kUnknown;
}

struct Count {
  long lo = 0, hi = 0;
  bool same = false;
};

// Interior crossings of a with every lift of b in the strip.
Count count_crossings(const MaximalCylinder& c, const StripArc& a, const StripArc& b) {
  Count n;
  const Scalar dr = a.right.pos - b.right.pos, dl = a.left.pos - b.left.pos;
  const long m0 = (dr < dl ? dr : dl).floor().get_si() - 1;
  const long m1 = (dr < dl ? dl : dr).floor().get_si() + 2;
  for (long m = m0; m <= m1; ++m) {
    const Scalar shift{mpq_class(m)};
    const int cr = compare_ends(a.right, b.right, b.right.pos + shift, c.cones_right, -1);
    const int cl = compare_ends(a.left, b.left, b.left.pos + shift, c.cones_left, 1);
    if (cr == 0 && cl == 0) n.same = true;
    if (cr == 0 || cl == 0) continue;
    if (cr == kUnknown || cl == kUnknown) {
      ++n.hi;
    } else if (cr != cl) {
      ++n.lo;
      ++n.hi;
    }
  }
  return n;
}

// Breakpoints of a leaf family: turns where a leaf meets a cone point or
// meets another arc's end on a boundary.
std::vector<Scalar> leaf_cells(const MaximalCylinder& c, const Scalar& cot, const std::vector<StripArc>& others) {
  std::vector<Scalar> bp;
  for (const auto& f : c.cones_right) bp.push_back(frac(f + c.height_right * cot));
  for (const auto& g : c.cones_left) bp.push_back(frac(g - c.height_left * cot));
  for (const auto& o : others) {
    if (!o.right.exact) bp.push_back(frac(o.right.pos + c.height_right * cot));
    if (!o.left.exact) bp.push_back(frac(o.left.pos - c.height_left * cot));
  }
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  return bp;
}

// Open cells (l, r) between consecutive breakpoints, wrapping once.
std::vector<std::pair<Scalar, Scalar>> cells_of(const std::vector<Scalar>& bp) {
  std::vector<std::pair<Scalar, Scalar>> out;
  if (bp.empty()) {
    out.emplace_back(Scalar(0), Scalar(1));
    return out;
  }
  for (size_t i = 0; i + 1 < bp.size(); ++i) out.emplace_back(bp[i], bp[i + 1]);
  out.emplace_back(bp.back(), bp.front() + Scalar(1));
  return out;
}

Scalar midpoint(const Scalar& l, const Scalar& r) { return Scalar::rational(1, 2) * (l + r); }

ProjectionReport report_of(const Count& n) {
  ProjectionReport r;
  r.method = "strip-count";
  if (n.same) return r;
  r.lo = 1 + n.lo;
  r.hi = r.distance = 1 + n.hi;
  return r;
}

void keep_min(std::optional<ProjectionReport>& best, ProjectionReport r) {
  if (!best) {
    best = std::move(r);
    return;
  }
  best->lo = std::min(best->lo, r.lo);
  if (r.hi < best->hi) {
    best->hi = best->distance = r.hi;
    best->twist = r.twist;
    best->witnesses = std::move(r.witnesses);
  }
}

std::string turn_tag(const std::string& name, const Scalar& s0) { return name + "@" + std::to_string(s0.to_double()); }

bool meets_core(const FlatSurface& s, const MaximalCylinder& c, const TauEdge& e) {
  return crosses_curve(s, e.sc, c.core.point, c.core.holonomy);
}

}  // namespace

Scalar relative_twist(const MaximalCylinder& c, const Vec2& a, const Vec2& b) {
  return c.modulus() * abs(cot_to_core(c, a) - cot_to_core(c, b));
}

std::vector<StripArc> strip_arcs(const FlatSurface& s, const MaximalCylinder& c, const SaddleConnection& sc) {
  const Vec2& w = c.core.holonomy;
  const Scalar ww = dot(w, w);
  std::vector<StripArc> out;
  for (const auto& x : curve_crossings(s, sc, c.core.point, w)) {
    Vec2 d = x.dir;
    Scalar u = x.u;
    if (cross(w, d).sign() < 0) {
      d = -d;
      u = Scalar(1) - u;
    }
    const Scalar rate = cross(w, d) / ww;  // height per unit of parameter
    const Scalar cot = dot(w, d) / cross(w, d);
    const Scalar below = u * rate, above = (Scalar(1) - u) * rate;
    if (below < c.height_right || above < c.height_left)
      throw ProjectionError("connection " + to_string(sc.canonical()) + " ends inside the cylinder");
    StripArc a;
    a.right = {below == c.height_right, x.t - c.height_right * cot, cot, below - c.height_right};
    a.left = {above == c.height_left, x.t + c.height_left * cot, cot, above - c.height_left};
    out.push_back(std::move(a));
  }
  return out;
}

StripArc leaf_arc(const MaximalCylinder& c, const Vec2& dir, const Scalar& s0) {
  const Scalar cot = cot_to_core(c, dir);
  return {{false, s0 - c.height_right * cot, cot, std::nullopt}, {false, s0 + c.height_left * cot, cot, std::nullopt}};
}

ProjectionReport arc_distance(const MaximalCylinder& c, const StripArc& a, const StripArc& b) {
  return report_of(count_crossings(c, a, b));
}

ProjectionReport annular_distance(const MaximalCylinder& c, const Vec2& a, const Vec2& b) {
  const Scalar ca = cot_to_core(c, a), cb = cot_to_core(c, b);
  if (ca == cb) {
    ProjectionReport r;
    r.method = "strip-count";
    return r;
  }
  // the order type of a leaf pair changes only on the cell walls and where
  // their ends meet on a boundary, at fixed differences of turns mod 1
  const auto cells_a = cells_of(leaf_cells(c, ca, {})), cells_b = cells_of(leaf_cells(c, cb, {}));
  const std::array<Scalar, 2> cuts{frac(c.height_right * (cb - ca)), frac(c.height_left * (ca - cb))};
  std::optional<ProjectionReport> best;
  for (const auto& [l1, r1] : cells_a)
    for (const auto& [l2, r2] : cells_b) {
      const Scalar lo = l2 - r1, hi = r2 - l1;
      std::vector<Scalar> walls{lo, hi};
      for (const auto& cut : cuts) {
        Scalar v = cut + Scalar(mpq_class((lo - cut).floor()));
        for (; v < hi; v = v + Scalar(1))
          if (lo < v) walls.push_back(v);
      }
      std::sort(walls.begin(), walls.end());
      walls.erase(std::unique(walls.begin(), walls.end()), walls.end());
      for (size_t i = 0; i + 1 < walls.size(); ++i) {
        const Scalar diff = midpoint(walls[i], walls[i + 1]);
        const Scalar lo1 = l1 < l2 - diff ? l2 - diff : l1;
        const Scalar hi1 = r1 < r2 - diff ? r1 : r2 - diff;
        const Scalar s0 = midpoint(lo1, hi1), u0 = s0 + diff;
        ProjectionReport r = arc_distance(c, leaf_arc(c, a, s0), leaf_arc(c, b, u0));
        r.witnesses = {turn_tag("leaf", s0), turn_tag("leaf", u0)};
        keep_min(best, std::move(r));
      }
    }
  best->twist = relative_twist(c, a, b).to_double();
  return *best;
}

ProjectionReport annular_distance(const MaximalCylinder& c) {
  ProjectionReport r = annular_distance(c, horizontal(), vertical());
  if (r.witnesses.size() == 2) {
    r.witnesses[0] = "horizontal " + r.witnesses[0];
    r.witnesses[1] = "vertical " + r.witnesses[1];
  }
  return r;
}

std::optional<ProjectionReport> annular_distance(const FlatSurface& s, const MaximalCylinder& c,
                                                 const SaddleConnection& e, const Vec2& dir) {
  const auto arcs = strip_arcs(s, c, e);
  if (arcs.empty()) return std::nullopt;
  const Scalar cot = cot_to_core(c, dir);
  std::optional<ProjectionReport> best;
  for (const auto& [l, r] : cells_of(leaf_cells(c, cot, arcs))) {
    const Scalar s0 = midpoint(l, r);
    const StripArc leaf = leaf_arc(c, dir, s0);
    for (const auto& a : arcs) {
      ProjectionReport rep = arc_distance(c, a, leaf);
      rep.witnesses = {to_string(e.canonical()), turn_tag("leaf", s0)};
      keep_min(best, std::move(rep));
    }
  }
  return best;
}

std::optional<ProjectionReport> annular_distance(const FlatSurface& s, const MaximalCylinder& c,
                                                 const SaddleConnection& e, const SaddleConnection& f) {
  const auto ea = strip_arcs(s, c, e), fa = strip_arcs(s, c, f);
  std::optional<ProjectionReport> best;
  for (const auto& a : ea)
    for (const auto& b : fa) {
      ProjectionReport rep = arc_distance(c, a, b);
      rep.witnesses = {to_string(e.canonical()), to_string(f.canonical())};
      keep_min(best, std::move(rep));
    }
  return best;
}

std::optional<ProjectionReport> section_distance(const FlatSurface& s, const MaximalCylinder& c, const Section& t,
                                                 const Vec2& dir) {
  std::optional<ProjectionReport> best;
  for (const auto& e : t.edges())
    if (auto r = annular_distance(s, c, e.sc, dir)) keep_min(best, std::move(*r));
  return best;
}

std::optional<ProjectionReport> section_distance(const FlatSurface& s, const MaximalCylinder& c, const Section& a,
                                                 const Section& b) {
  std::optional<ProjectionReport> best;
  for (const auto& x : a.edges())
    for (const auto& y : b.edges())
      if (auto r = annular_distance(s, c, x.sc, y.sc)) keep_min(best, std::move(*r));
  return best;
}

long farey_distance(const mpz_class& p1, const mpz_class& q1, const mpz_class& p2, const mpz_class& q2) {
  if (gcd(p1, q1) != 1 || gcd(p2, q2) != 1) throw ProjectionError("slopes must be primitive");
  // M in SL2(Z) with M (p1, q1) = (1, 0): rows (u, v) and (-q1, p1), u p1 + v q1 = 1
  mpz_class g, u, v;
  mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), p1.get_mpz_t(), q1.get_mpz_t());
  if (g < 0) {
    u = -u;
    v = -v;
  }
  mpz_class x = u * p2 + v * q2, y = -q1 * p2 + p1 * q2;
  if (y == 0) return 0;
  if (abs(y) == 1) return 1;
  if (y < 0) {
    x = -x;
    y = -y;
  }
  // Farey geodesics from 1/0 to x/y stay in the strip of triangles the
  // hyperbolic geodesic crosses: fans pivoting at successive convergents.
  // Inner fan vertices are reached through the pivot, so only the first two
  // and last two of each fan are kept.
  using V = std::pair<mpz_class, mpz_class>;
  std::vector<V> verts{{1, 0}};
  mpz_class a = x, b = y;
  V prev2{0, 1}, prev1{1, 0};
  bool first = true;
  while (b != 0) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    mpz_class r = a - q * b;
    V cur{q * prev1.first + prev2.first, q * prev1.second + prev2.second};
    if (first) {
      verts.push_back(cur);
    } else {
      for (const mpz_class& j : {mpz_class(1), mpz_class(q - 1)}) {
        if (j <= 0 || j >= q) continue;
        verts.push_back({prev2.first + j * prev1.first, prev2.second + j * prev1.second});
      }
      verts.push_back(cur);
    }
    first = false;
    prev2 = prev1;
    prev1 = cur;
    a = b;
    b = r;
  }
  const V target{x, y};
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  const size_t n = verts.size();
  auto adjacent = [&](size_t i, size_t j) {
    return abs(verts[i].first * verts[j].second - verts[i].second * verts[j].first) == 1;
  };
  size_t src = 0, dst = 0;
  for (size_t i = 0; i < n; ++i) {
    if (verts[i] == V{1, 0}) src = i;
    if (verts[i] == target) dst = i;
  }
  std::vector<long> dist(n, -1);
  std::deque<size_t> queue{src};
  dist[src] = 0;
  while (!queue.empty()) {
    size_t i = queue.front();
    queue.pop_front();
    for (size_t j = 0; j < n; ++j)
      if (dist[j] < 0 && adjacent(i, j)) {
        dist[j] = dist[i] + 1;
        queue.push_back(j);
      }
  }
  if (dist[dst] < 0) throw ProjectionError("Farey strip is disconnected");
  return dist[dst];
}

bool is_punctured_torus(const FlatSurface& s) {
  const auto& d = s.document();
  if (d.polygons.size() != 1 || d.polygons[0].vertices.size() != 4 || d.gluings.size() != 2) return false;
  if (s.cone_points().size() != 1) return false;
  for (const auto& g : d.gluings)
    if (g.kind != GlueKind::translation || std::abs(g.edge_a - g.edge_b) != 2) return false;
  return true;
}

Slope torus_slope(const FlatSurface& s, const Vec2& hol) {
  if (!is_punctured_torus(s)) throw UnsupportedError("slopes need a once-punctured torus parallelogram");
  const auto& v = s.document().polygons[0].vertices;
  const Vec2 e1 = v[1] - v[0], e2 = v[3] - v[0];
  const Scalar det = cross(e1, e2);
  const Scalar p = cross(hol, e2) / det, q = cross(e1, hol) / det;
  if (!p.is_rational() || !q.is_rational()) throw ProjectionError("holonomy is not a lattice vector");
  mpq_class pq = p.coeff(0), qq = q.coeff(0);
  if (pq.get_den() != 1 || qq.get_den() != 1) throw ProjectionError("holonomy is not a lattice vector");
  Slope out{pq.get_num(), qq.get_num()};
  if (out.q < 0 || (out.q == 0 && out.p < 0)) {
    out.p = -out.p;
    out.q = -out.q;
  }
  return out;
}

Slope torus_slope(const FlatSurface& s, const SaddleConnection& sc) { return torus_slope(s, sc.hol); }

TorusLadder::TorusLadder(const FlatSurface& s, int count) : s_(s) {
  if (!is_punctured_torus(s)) throw UnsupportedError("ladders are built on once-punctured tori");
  if (!s.monodromy()) throw UnsupportedError("ladders need a monodromy");
  const Monodromy& f = *s.monodromy();
  const Section t0 = initial_section(s);
  std::map<ConnectionKey, TauEdge> seen;
  for (const auto& p : pockets_between(s, t0, apply_monodromy(s, f, t0)))
    for (const auto& step : p.steps)
      for (const auto& e : step.edges()) seen.emplace(e.key(), e);
  for (const auto& e : t0.edges()) seen.emplace(e.key(), e);
  for (auto& [k, e] : seen) window_.push_back(e);

  const auto& mat = f.matrix;
  const Scalar det = mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0];
  const std::array<std::array<Scalar, 2>, 2> inv{
      {{mat[1][1] / det, -mat[0][1] / det}, {-mat[1][0] / det, mat[0][0] / det}}};
  auto apply = [](const std::array<std::array<Scalar, 2>, 2>& m, const Vec2& v) {
    return Vec2(m[0][0] * v.x + m[0][1] * v.y, m[1][0] * v.x + m[1][1] * v.y);
  };
  std::set<std::pair<mpz_class, mpz_class>> slopes;
  auto add = [&](size_t b, int power, const Vec2& hol) {
    Slope sl = torus_slope(s, hol);
    if (!slopes.insert({sl.p, sl.q}).second) return;
    edges_.push_back({window_[b], power, hol, sl});
    base_index_.push_back(b);
  };
  std::vector<Vec2> up, down;
  for (const auto& e : window_) {
    up.push_back(e.sc.hol);
    down.push_back(e.sc.hol);
  }
  for (size_t b = 0; b < window_.size(); ++b) add(b, 0, up[b]);
  for (int j = 1; static_cast<int>(edges_.size()) < count; ++j) {
    if (j > 64) throw ProjectionError("ladder does not grow");
    for (size_t b = 0; b < window_.size(); ++b) {
      up[b] = apply(mat, up[b]);
      down[b] = apply(inv, down[b]);
      add(b, j, up[b]);
      add(b, -j, down[b]);
    }
  }
  std::stable_sort(edges_.begin(), edges_.end(), [](const LadderEdge& l, const LadderEdge& r) { return l.power < r.power; });
  base_index_.clear();
  for (const auto& e : edges_)
    for (size_t b = 0; b < window_.size(); ++b)
      if (window_[b].key() == e.base.key()) base_index_.push_back(b);
  powers_.push_back(identity_monodromy(s));
}

const SaddleConnection& TorusLadder::realise(size_t base, int power) {
  auto key = std::make_pair(base, power);
  auto it = images_.find(key);
  if (it != images_.end()) return it->second;
  while (static_cast<int>(powers_.size()) <= power) powers_.push_back(compose(s_, *s_.monodromy(), powers_.back()));
  return images_.emplace(key, apply_monodromy(s_, powers_[power], window_[base].sc)).first->second;
}

bool TorusLadder::disjoint(size_t i, size_t j) {
  if (i == j) return false;
  auto key = std::minmax(i, j);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  const LadderEdge& a = edges_[key.first];
  const LadderEdge& b = edges_[key.second];
  const mpz_class det = abs(a.slope.p * b.slope.q - a.slope.q * b.slope.p);
  bool result = false;
  if (det >= 2) {
    ++certified_;
  } else {
    ++traced_;
    const int lo = std::min(a.power, b.power);
    const SaddleConnection& x = realise(base_index_[key.first], a.power - lo);
    const SaddleConnection& y = realise(base_index_[key.second], b.power - lo);
    result = !crosses(s_, x, y);
  }
  memo_.emplace(key, result);
  return result;
}

std::vector<long> TorusLadder::distances_from(size_t i) {
  std::vector<long> dist(edges_.size(), -1);
  std::deque<size_t> queue{i};
  dist[i] = 0;
  while (!queue.empty()) {
    size_t u = queue.front();
    queue.pop_front();
    for (size_t v = 0; v < edges_.size(); ++v)
      if (dist[v] < 0 && disjoint(u, v)) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
  }
  return dist;
}

ProjectionReport low_complexity_distance(const FlatSurface& s, const SaddleConnection& a, const SaddleConnection& b) {
  Slope sa = torus_slope(s, a), sb = torus_slope(s, b);
  ProjectionReport r;
  r.method = "farey-bfs";
  r.distance = r.lo = r.hi = farey_distance(sa.p, sa.q, sb.p, sb.q);
  r.witnesses = {sa.p.get_str() + "/" + sa.q.get_str(), sb.p.get_str() + "/" + sb.q.get_str()};
  return r;
}

std::vector<TauEdge> tau_boundary(const FlatSurface& s, const SubsurfaceSpec& y) {
  std::vector<SaddleConnection> scs;
  if (y.annular() && y.cycles.empty()) {
    if (!y.core) throw ProjectionError("annulus without a core");
    scs = maximal_cylinder(s, *y.core).boundary;
  }
  for (const auto& cyc : y.cycles) scs.insert(scs.end(), cyc.begin(), cyc.end());
  for (size_t i = 0; i < scs.size(); ++i)
    for (size_t j = i + 1; j < scs.size(); ++j)
      if (crosses(s, scs[i], scs[j])) throw ProjectionError("boundary cycles cross");
  return rect_hull_edges(s, scs);
}

YPocket y_pocket(const FlatSurface& s, const SubsurfaceSpec& y) {
  if (!y.annular() || !y.core) throw UnsupportedError("pockets are built for annuli only");
  YPocket u;
  u.cylinder = maximal_cylinder(s, *y.core);
  u.boundary = tau_boundary(s, y);
  std::vector<ConnectionKey> keys;
  for (const auto& e : u.boundary) keys.push_back(e.key());
  Section seed = extend_to_section(s, u.boundary);
  std::tie(u.bottom, u.top) = top_bottom_sections(s, keys, seed);
  std::vector<Pocket> pockets = pockets_between(s, u.bottom, u.top);
  const Pocket* over = nullptr;
  for (const auto& p : pockets)
    for (const auto& e : p.bottom)
      if (!over && meets_core(s, u.cylinder, e)) over = &p;
  if (!over) throw ProjectionError("no pocket over the annulus: the twisting threshold is not met");
  if (over->orientation != 1) throw ProjectionError("top section does not lie above the bottom one");
  u.pocket = *over;
  auto lower = section_distance(s, u.cylinder, u.bottom, horizontal());
  auto upper = section_distance(s, u.cylinder, u.top, vertical());
  if (!lower || !upper) throw ProjectionError("extreme sections miss the core");
  u.bottom_to_lower = *lower;
  u.top_to_upper = *upper;
  return u;
}

IsolatedPocketResult isolated_pocket(const FlatSurface& s, const YPocket& u, const SubsurfaceSpec& y) {
  IsolatedPocketResult res;
  res.lambda_distance = annular_distance(u.cylinder);
  const auto& steps = u.pocket.steps;
  const int n = static_cast<int>(steps.size()) - 1;
  if (n != static_cast<int>(u.pocket.tets.size())) throw ProjectionError("pocket sweep is inconsistent");
  for (const auto& t : steps) {
    auto lo = section_distance(s, u.cylinder, t, horizontal());
    auto hi = section_distance(s, u.cylinder, t, vertical());
    if (!lo || !hi) throw ProjectionError("a pocket section misses the core");
    res.to_lower.push_back(lo->lo);
    res.to_upper.push_back(hi->lo);
  }
  const int c = y.annular() ? 4 : 3;
  // existence is claimed only when the threshold is certainly exceeded
  if (res.lambda_distance.lo <= 2 * c + 2) {
    res.reason = "d_Y(lambda-, lambda+) >= " + std::to_string(res.lambda_distance.lo) + " only, threshold " +
                 std::to_string(2 * c + 2);
    return res;
  }
  int a = -1;
  for (int i = n - 1; i > 0 && a < 0; --i)
    if (res.to_lower[i - 1] < c) a = i;
  if (a < 0) {
    res.reason = "no section near lambda- before the top";
    return res;
  }
  int b = -1;
  for (int i = a + 1; i < n && b < 0; ++i)
    if (res.to_upper[i + 1] < c) b = i;
  if (b < 0) {
    res.reason = "no section near lambda+ after index " + std::to_string(a);
    return res;
  }
  IsolatedPocket v;
  v.a_index = a;
  v.b_index = b;
  v.threshold_c = c;
  v.lower = steps[a];
  v.upper = steps[b];
  v.tets.assign(u.pocket.tets.begin() + a, u.pocket.tets.begin() + b);
  v.boundary.clear();
  for (const auto& e : u.boundary) v.boundary.push_back(e.key());
  // cells of V are those not shared by its top and bottom
  std::set<ConnectionKey> both;
  for (const auto& e : v.lower.edges())
    if (v.upper.contains(e.key())) both.insert(e.key());
  std::set<FaceKey> faces_both;
  {
    std::set<FaceKey> top;
    for (const auto& f : v.upper.faces()) top.insert(f.key);
    for (const auto& f : v.lower.faces())
      if (top.count(f.key)) faces_both.insert(f.key);
  }
  std::set<ConnectionKey> seen;
  std::set<FaceKey> seen_faces;
  for (int i = a; i <= b; ++i) {
    for (const auto& e : steps[i].edges())
      if (!both.count(e.key()) && seen.insert(e.key()).second) v.interior_edges.push_back(e);
    for (const auto& f : steps[i].faces())
      if (!faces_both.count(f.key) && seen_faces.insert(f.key).second) v.faces.push_back(f.key);
  }
  auto span = section_distance(s, u.cylinder, v.lower, v.upper);
  if (!span) throw ProjectionError("pocket top or bottom misses the core");
  v.span = *span;
  res.pocket = std::move(v);
  return res;
}

std::vector<std::string> isolated_pocket_violations(const FlatSurface& s, const MaximalCylinder& c,
                                                    const IsolatedPocket& v) {
  std::vector<std::string> out;
  const std::set<ConnectionKey> boundary(v.boundary.begin(), v.boundary.end());
  for (const auto& e : v.interior_edges) {
    if (boundary.count(e.key())) continue;
    if (!meets_core(s, c, e)) {
      out.push_back("edge " + to_string(e.key()) + " misses the core");
      continue;
    }
    long lo = annular_distance(s, c, e.sc, horizontal())->lo;
    long hi = annular_distance(s, c, e.sc, vertical())->lo;
    if (lo < v.threshold_c || hi < v.threshold_c)
      out.push_back("edge " + to_string(e.key()) + " is within " + std::to_string(std::min(lo, hi)) +
                    " of a foliation");
  }
  if (v.span.lo < 1) out.push_back("top and bottom are not separated");
  return out;
}

EmbeddingReport check_pocket_embedding(const FlatSurface& s, const IsolatedPocket& v, const Monodromy& m, int k) {
  EmbeddingReport rep;
  rep.k = k;
  std::map<ConnectionKey, SaddleConnection> cells;  // every edge of V, boundary included
  for (const auto& e : v.interior_edges) cells.emplace(e.key(), e.sc);
  for (const auto* t : {&v.lower, &v.upper})
    for (const auto& e : t->edges()) cells.emplace(e.key(), e.sc);
  const std::set<ConnectionKey> boundary(v.boundary.begin(), v.boundary.end());
  std::set<ConnectionKey> edges;
  for (const auto& e : v.interior_edges) edges.insert(e.key());
  const std::set<FaceKey> faces(v.faces.begin(), v.faces.end());
  const std::set<TetraKey> tets(v.tets.begin(), v.tets.end());

  Monodromy power = m;
  for (int i = 1; i <= k; ++i) {
    if (i > 1) power = compose(s, m, power);
    std::map<ConnectionKey, ConnectionKey> image;
    for (const auto& [key, sc] : cells) image.emplace(key, apply_monodromy(s, power, sc).canonical());
    auto mapped = [&](const ConnectionKey& key) {
      auto it = image.find(key);
      if (it == image.end()) throw ProjectionError("pocket cell refers to an unknown edge");
      return it->second;
    };
    std::set<ConnectionKey> allowed = boundary;
    for (const auto& b : v.boundary) allowed.insert(mapped(b));
    const std::string tag = "f^" + std::to_string(i) + ": ";
    for (const auto& e : edges) {
      ConnectionKey img = mapped(e);
      if (edges.count(img) && !allowed.count(img)) rep.violations.push_back(tag + "shared edge " + to_string(img));
    }
    for (const auto& f : faces) {
      FaceKey img = make_face_key(mapped(f[0]), mapped(f[1]), mapped(f[2]));
      if (faces.count(img)) rep.violations.push_back(tag + "shared face");
    }
    for (const auto& t : tets) {
      TetraKey img{mapped(t.top), mapped(t.bottom)};
      if (tets.count(img)) rep.violations.push_back(tag + "shared tetrahedron");
    }
  }
  return rep;
}

BoundVerdict check_projection_bound(bool annular, int euler, const ProjectionReport& d_w, long tau_count) {
  BoundVerdict v;
  v.alpha = annular ? 1 : 3L * std::abs(euler);
  v.beta = annular ? 10 : 8;
  v.d_w = d_w.hi;
  v.tau = tau_count;
  v.vacuous = v.d_w <= v.beta;
  v.margin = v.tau - v.alpha * (v.d_w - v.beta);
  v.holds = v.margin > 0;
  return v;
}

}  // namespace veering
