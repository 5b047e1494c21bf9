#include "veering/checks.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace veering {

size_t pick(Rng& rng, size_t n) { return static_cast<size_t>(rng() % n); }

namespace {

template <class T>
void shuffle_prefix(std::vector<T>& v, size_t keep, Rng& rng) {
  keep = std::min(keep, v.size());
  for (size_t i = 0; i < keep; ++i) std::swap(v[i], v[i + pick(rng, v.size() - i)]);
  v.resize(keep);
}

void flag(CheckRow& row, const std::string& what) {
  if (row.violations++ == 0) row.note = what;
}

// Memoized crossing tests between saddle connections, by canonical key.
class CrossCache {
 public:
  explicit CrossCache(const FlatSurface& s) : s_(s) {}
  bool operator()(const SaddleConnection& a, const SaddleConnection& b) {
    if (a.same_as(b)) return false;
    auto key = key_compare(a.canonical(), b.canonical()) < 0 ? std::make_pair(a.canonical(), b.canonical())
                                                              : std::make_pair(b.canonical(), a.canonical());
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    return memo_.emplace(key, crosses(s_, a, b)).first->second;
  }

 private:
  const FlatSurface& s_;
  std::map<std::pair<ConnectionKey, ConnectionKey>, bool> memo_;
};

// First crossing inside a family of tau-edges, as text; empty when none.
std::string first_crossing(CrossCache& cross, const std::vector<const TauEdge*>& edges) {
  for (size_t i = 0; i < edges.size(); ++i)
    for (size_t j = i + 1; j < edges.size(); ++j)
      if (cross(edges[i]->sc, edges[j]->sc))
        return to_string(edges[i]->key()) + " crosses " + to_string(edges[j]->key());
  return {};
}

std::vector<std::pair<size_t, size_t>> disjoint_pairs(CrossCache& cross, const std::vector<SaddleConnection>& v,
                                                      size_t cap, Rng& rng) {
  std::vector<std::pair<size_t, size_t>> out;
  for (size_t i = 0; i < v.size(); ++i)
    for (size_t j = i + 1; j < v.size(); ++j)
      if (!v[i].same_as(v[j]) && !cross(v[i], v[j])) out.emplace_back(i, j);
  shuffle_prefix(out, cap, rng);
  return out;
}

// Closed geodesic just beside a connection from a cone point to itself.
std::optional<ClosedCurve> parallel_curve(const FlatSurface& s, const SaddleConnection& sc) {
  if (sc.start != sc.end) return std::nullopt;
  const Scalar half = Scalar::rational(1, 2);
  for (const auto& piece : sc.pieces) {
    if (half < piece.t0 || piece.t1 < half) continue;
    const Triangle& t = s.triangles()[piece.tri];
    const Transform inv = piece.g.inverse();
    for (int side : {1, -1}) {
      const Vec2 n = Scalar(side) * Vec2(-sc.hol.y, sc.hol.x);
      for (int k = 3; k < 40; ++k) {
        const Vec2 p = inv.apply(half * sc.hol + Scalar::rational(1, 1L << k) * n);
        if (orient(t.v[0], t.v[1], p) <= 0 || orient(t.v[1], t.v[2], p) <= 0 || orient(t.v[2], t.v[0], p) <= 0)
          continue;
        ClosedCurve c{{piece.tri, p}, inv.apply_linear(sc.hol)};
        try {
          maximal_cylinder(s, c);
          return c;
        } catch (const std::exception&) {
          break;
        }
      }
    }
  }
  return std::nullopt;
}

using Tri = std::array<Vec2, 3>;

// Ear clipping of a simple counterclockwise polygon.
std::vector<Tri> triangulate(std::vector<Vec2> poly) {
  std::vector<Tri> out;
  for (bool again = true; again && poly.size() > 3;) {
    again = false;
    for (size_t i = 0; i < poly.size() && poly.size() > 3; ++i) {
      const size_t n = poly.size();
      if (orient(poly[(i + n - 1) % n], poly[i], poly[(i + 1) % n]) == 0) {
        poly.erase(poly.begin() + static_cast<long>(i));
        again = true;
      }
    }
  }
  while (poly.size() > 3) {
    const size_t n = poly.size();
    bool clipped = false;
    for (size_t i = 0; i < n && !clipped; ++i) {
      const Vec2 &a = poly[(i + n - 1) % n], &b = poly[i], &c = poly[(i + 1) % n];
      if (orient(a, b, c) <= 0) continue;
      bool empty = true;
      for (size_t j = 0; j < n && empty; ++j) {
        if (j == i || j == (i + 1) % n || j == (i + n - 1) % n) continue;
        const Vec2& p = poly[j];
        empty = !(orient(a, b, p) >= 0 && orient(b, c, p) >= 0 && orient(c, a, p) >= 0);
      }
      if (!empty) continue;
      out.push_back({a, b, c});
      poly.erase(poly.begin() + static_cast<long>(i));
      clipped = true;
    }
    if (!clipped) throw ProjectionError("polygon is not simple");
  }
  if (poly.size() == 3 && orient(poly[0], poly[1], poly[2]) > 0) out.push_back({poly[0], poly[1], poly[2]});
  return out;
}

bool interiors_meet(const std::vector<Tri>& a, const std::vector<Tri>& b) {
  for (const auto& x : a)
    for (const auto& y : b)
      if (convex_interiors_meet(x, y)) return true;
  return false;
}

std::vector<long> pocket_signature(const std::vector<Pocket>& ps) {
  std::vector<long> out;
  for (const auto& p : ps) out.push_back(static_cast<long>(p.orientation) * p.tet_count);
  std::sort(out.begin(), out.end());
  return out;
}

std::string join(const std::vector<long>& v) {
  std::string out;
  for (long x : v) out += (out.empty() ? "" : ",") + std::to_string(x);
  return "[" + out + "]";
}

}  // namespace

SamplePool make_pool(const FlatSurface& s, const CheckConfig& cfg) {
  SamplePool p;
  p.connections = enumerate_saddle_connections(s, cfg.bound, cfg.bound);
  p.tau_edges = enumerate_tau_edges(s, cfg.bound, cfg.bound);
  const Section t0 = initial_section(s);
  const size_t steps = static_cast<size_t>(cfg.sweep_steps);
  auto stop = [&](const Section&, size_t n) { return n >= steps; };
  p.sections = sweep(s, t0, FlipDir::up, stop).sections;
  auto down = sweep(s, t0, FlipDir::down, stop).sections;
  p.sections.insert(p.sections.end(), down.begin() + 1, down.end());
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& sc : p.connections) {
    if (p.curves.size() >= 6) break;
    auto c = parallel_curve(s, sc);
    if (c && seen.insert({to_string(c->holonomy), to_string(-c->holonomy)}).second &&
        !seen.count({to_string(-c->holonomy), to_string(c->holonomy)}))
      p.curves.push_back(*c);
  }
  return p;
}

CheckRow check_rect_hull_disjoint(const FlatSurface& s, const SamplePool& p, int pairs, Rng& rng) {
  CheckRow row{"hulls", "rect-hull-disjoint"};
  CrossCache cross(s);
  std::map<size_t, RectHullResult> hull;
  auto hull_of = [&](size_t i) -> const RectHullResult& {
    auto it = hull.find(i);
    if (it == hull.end()) it = hull.emplace(i, rect_hull(s, p.connections[i])).first;
    return it->second;
  };
  for (auto [i, j] : disjoint_pairs(cross, p.connections, static_cast<size_t>(pairs), rng)) {
    ++row.samples;
    std::vector<const TauEdge*> all;
    for (const auto* h : {&hull_of(i), &hull_of(j)})
      for (const auto& e : h->edges) all.push_back(&e);
    std::string bad = first_crossing(cross, all);
    if (!bad.empty()) flag(row, bad);
  }
  return row;
}

CheckRow check_polygons(const FlatSurface& s, const SamplePool& p, int samples, Rng& rng) {
  CheckRow row{"hulls", "polygon-structure"};
  std::vector<std::pair<size_t, int>> jobs;
  for (size_t i = 0; i < p.connections.size(); ++i)
    for (int side : {1, -1}) jobs.emplace_back(i, side);
  shuffle_prefix(jobs, static_cast<size_t>(samples), rng);
  for (auto [i, side] : jobs) {
    ++row.samples;
    try {
      TriHullResult h = tri_hull(s, p.connections[i], side);
      auto v = polygon_violations(s, h);
      if (!v.empty()) flag(row, to_string(p.connections[i].key) + ": " + v.front());
    } catch (const std::exception& e) {
      flag(row, to_string(p.connections[i].key) + ": " + e.what());
    }
  }
  return row;
}

CheckRow check_polygon_disjoint(const FlatSurface& s, const SamplePool& p, int pairs, Rng& rng) {
  CheckRow row{"hulls", "polygon-disjoint"};
  if (s.half_translation()) {
    row.unsupported = true;
    row.note = "needs a translation surface to share one developing frame";
    return row;
  }
  std::map<TetraKey, Tetrahedron> tets;
  for (const auto& t : p.sections)
    for (const auto& e : t.edges())
      for (auto mode : {TetraMode::above, TetraMode::below}) {
        Tetrahedron tet = tetrahedron_from_edge(s, e, mode);
        tets.emplace(tet.key(), std::move(tet));
      }
  struct Job {
    const Tetrahedron* tet;
    int a, b;  // corner pairs, packed as 4 * from + to
  };
  static const std::array<std::pair<int, int>, 6> kEdges{{{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}, {3, 1}}};
  std::vector<Job> jobs;
  for (const auto& [k, t] : tets)
    for (int a = 0; a < 6; ++a)
      for (int b = a + 1; b < 6; ++b)
        if (!(a == 4 && b == 5)) jobs.push_back({&t, a, b});
  shuffle_prefix(jobs, jobs.size(), rng);

  std::map<std::pair<std::string, int>, TriHullResult> hulls;
  for (const auto& job : jobs) {
    if (row.samples >= pairs) break;
    const Tetrahedron& t = *job.tet;
    std::array<Vec2, 2> from, to;
    std::array<const TauEdge*, 2> edge{};
    for (int k = 0; k < 2; ++k) {
      auto [u, v] = kEdges[k == 0 ? job.a : job.b];
      from[k] = t.corners[u].pos;
      to[k] = t.corners[v].pos;
      if (to[k].x < from[k].x) std::swap(from[k], to[k]);
      edge[k] = edge_between(t, from[k], to[k]);
    }
    if (!edge[0] || !edge[1]) continue;
    // a vertical leaf inside the rectangle joins them over the shared x-range
    const Scalar lo = from[0].x < from[1].x ? from[1].x : from[0].x;
    const Scalar hi = to[0].x < to[1].x ? to[0].x : to[1].x;
    if (!(lo < hi)) continue;
    const Scalar x = Scalar::rational(1, 2) * (lo + hi);
    auto y_at = [&](int k) { return from[k].y + (x - from[k].x) * (to[k].y - from[k].y) / (to[k].x - from[k].x); };
    const int below = y_at(0) < y_at(1) ? 0 : 1;
    if (y_at(0) == y_at(1)) continue;
    std::array<std::vector<Tri>, 2> pieces;
    bool ok = true;
    for (int k = 0; k < 2 && ok; ++k) {
      const SaddleConnection& sc = edge[k]->sc;
      const Vec2 d = to[k] - from[k];
      Vec2 start;
      if (sc.hol == d) {
        start = from[k];
      } else if (sc.hol == -d) {
        start = to[k];
      } else {
        ok = false;
        break;
      }
      // the leaf leaves the lower edge upward and the upper one downward
      const bool up = k == below;
      const int side = (sc.hol.x.sign() > 0) == up ? 1 : -1;
      auto key = std::make_pair(to_string(sc.key), side);
      auto it = hulls.find(key);
      if (it == hulls.end()) it = hulls.emplace(key, tri_hull(s, sc, side)).first;
      std::vector<Vec2> poly;
      for (const auto& q : it->second.polygon) poly.push_back(q + start);
      pieces[k] = triangulate(std::move(poly));
    }
    if (!ok) continue;
    ++row.samples;
    if (interiors_meet(pieces[0], pieces[1]))
      flag(row, to_string(edge[0]->key()) + " and " + to_string(edge[1]->key()) + " polygons overlap");
  }
  return row;
}

CheckRow check_retraction_identity(const FlatSurface& s, const SamplePool& p) {
  CheckRow row{"hulls", "retraction-identity"};
  for (const auto& e : p.tau_edges) {
    ++row.samples;
    auto r = retract_to_tau(s, ArcPath{{e.sc}});
    if (r.size() != 1 || !(r.front().key() == e.key())) flag(row, to_string(e.key()) + " is moved");
  }
  return row;
}

CheckRow check_retraction_lipschitz(const FlatSurface& s, const SamplePool& p, int pairs, Rng& rng) {
  CheckRow row{"hulls", "retraction-lipschitz"};
  CrossCache cross(s);
  // arcs: connections first, then cylinder cores
  const size_t nc = p.connections.size();
  std::vector<std::pair<size_t, size_t>> adjacent;
  for (auto pr : disjoint_pairs(cross, p.connections, std::numeric_limits<size_t>::max(), rng)) adjacent.push_back(pr);
  for (size_t c = 0; c < p.curves.size(); ++c)
    for (size_t i = 0; i < nc; ++i)
      if (!crosses_curve(s, p.connections[i], p.curves[c].point, p.curves[c].holonomy)) adjacent.emplace_back(i, nc + c);
  shuffle_prefix(adjacent, static_cast<size_t>(pairs), rng);
  std::map<size_t, std::vector<TauEdge>> image;
  auto image_of = [&](size_t i) -> const std::vector<TauEdge>& {
    auto it = image.find(i);
    if (it != image.end()) return it->second;
    ArcOrCurve a = i < nc ? ArcOrCurve(ArcPath{{p.connections[i]}}) : ArcOrCurve(p.curves[i - nc]);
    return image.emplace(i, retract_to_tau(s, a)).first->second;
  };
  for (auto [i, j] : adjacent) {
    ++row.samples;
    std::vector<const TauEdge*> all;
    for (const auto* im : {&image_of(i), &image_of(j)})
      for (const auto& e : *im) all.push_back(&e);
    std::string bad = first_crossing(cross, all);
    if (!bad.empty()) flag(row, bad);
  }
  return row;
}

CheckRow check_section_extension(const FlatSurface& s, const SamplePool& p, int subsets, Rng& rng) {
  CheckRow row{"sections", "section-extension"};
  if (p.tau_edges.empty()) {
    row.unsupported = true;
    row.note = "no tau-edges inside the bound";
    return row;
  }
  CrossCache cross(s);
  for (int k = 0; k < subsets; ++k) {
    const size_t want = static_cast<size_t>(k % 4);
    std::vector<TauEdge> chosen;
    for (int attempt = 0; chosen.size() < want && attempt < 32; ++attempt) {
      const TauEdge& e = p.tau_edges[pick(rng, p.tau_edges.size())];
      bool ok = true;
      for (const auto& c : chosen) ok = ok && !c.sc.same_as(e.sc) && !cross(c.sc, e.sc);
      if (ok) chosen.push_back(e);
    }
    ++row.samples;
    try {
      Section t = extend_to_section(s, chosen);
      auto v = section_violations(s, t.edges());
      if (!v.empty()) flag(row, v.front());
      for (const auto& c : chosen)
        if (!t.contains(c.key())) flag(row, "input edge " + to_string(c.key()) + " dropped");
    } catch (const std::exception& e) {
      flag(row, e.what());
    }
  }
  return row;
}

CheckRow check_sweep_validity(const FlatSurface& s, const SamplePool& p) {
  CheckRow row{"sections", "sweep-validity"};
  for (const auto& t : p.sections) {
    ++row.samples;
    auto v = section_violations(s, t.edges());
    if (!v.empty()) flag(row, v.front());
  }
  return row;
}

CheckRow check_flip_order(const FlatSurface& s, const SamplePool& p, int pairs, Rng& rng) {
  CheckRow row{"sections", "flip-order-independence"};
  if (p.sections.size() < 2) {
    row.unsupported = true;
    row.note = "sweep produced fewer than two sections";
    return row;
  }
  static const std::array<FlipPolicy, 4> kPolicies{FlipPolicy::widest_crossing, FlipPolicy::fifo, FlipPolicy::last,
                                                   FlipPolicy::random};
  for (int k = 0; k < pairs; ++k) {
    const size_t i = pick(rng, p.sections.size());
    size_t j = pick(rng, p.sections.size() - 1);
    if (j >= i) ++j;
    const unsigned seed = static_cast<unsigned>(rng());
    std::vector<long> first;
    ++row.samples;
    for (size_t q = 0; q < kPolicies.size(); ++q) {
      auto sig = pocket_signature(pockets_between(s, p.sections[i], p.sections[j], kPolicies[q], seed));
      if (q == 0) {
        first = sig;
      } else if (sig != first) {
        flag(row, "sections " + std::to_string(i) + "," + std::to_string(j) + ": " + join(first) + " vs " + join(sig));
        break;
      }
    }
  }
  return row;
}

CheckRow check_period_independence(const FlatSurface& s, const SamplePool& p) {
  CheckRow row{"sections", "period-independence"};
  if (!s.monodromy()) {
    row.unsupported = true;
    row.note = "no monodromy";
    return row;
  }
  long first = -1;
  for (size_t i = 0; i < p.sections.size() && i < 4; ++i) {
    ++row.samples;
    long n = period_tet_count(s, p.sections[i], *s.monodromy());
    if (first < 0) {
      first = n;
      row.note = "|tau| = " + std::to_string(n);
    } else if (n != first) {
      flag(row, "section " + std::to_string(i) + " gives " + std::to_string(n) + " not " + std::to_string(first));
    }
  }
  return row;
}

std::vector<CheckRow> check_projection_rows(const FlatSurface& s, const CheckConfig& cfg) {
  std::vector<CheckRow> rows;
  const auto ys = subsurfaces(s);
  if (ys.empty()) return rows;
  std::optional<long> tau;
  if (s.monodromy()) tau = period_tet_count(s, initial_section(s), *s.monodromy());
  for (const auto& y : ys) {
    CheckRow bound{"theorems", "projection-bound:" + y.name};
    if (!y.annular() || !tau) {
      bound.unsupported = true;
      bound.note = !tau ? "no monodromy" : "distance needs an annulus";
      rows.push_back(bound);
      continue;
    }
    const MaximalCylinder cyl = maximal_cylinder(s, *y.core);
    const ProjectionReport d = annular_distance(cyl);
    const BoundVerdict v = check_projection_bound(true, y.euler, d, *tau);
    bound.samples = 1;
    bound.note = "d_W in [" + std::to_string(d.lo) + "," + std::to_string(d.hi) + "], |tau| = " +
                 std::to_string(*tau) + ", margin " + std::to_string(v.margin) + (v.vacuous ? ", vacuous" : "");
    if (!v.holds) flag(bound, "bound violated: " + bound.note);
    rows.push_back(bound);

    CheckRow iso{"theorems", "isolated-pocket:" + y.name};
    CheckRow emb{"theorems", "pocket-embedding:" + y.name};
    if (d.lo <= 10) {
      iso.note = emb.note = "d_W <= 10, no isolated pocket claimed";
      rows.push_back(iso);
      rows.push_back(emb);
      continue;
    }
    try {
      const YPocket u = y_pocket(s, y);
      const IsolatedPocketResult r = isolated_pocket(s, u, y);
      iso.samples = 1;
      if (!r.pocket) {
        flag(iso, "missing: " + r.reason);
      } else {
        const IsolatedPocket& pk = *r.pocket;
        for (const auto& msg : isolated_pocket_violations(s, cyl, pk)) flag(iso, msg);
        // conservative ends on both sides of each inequality
        if (pk.span.lo < d.hi - 10) flag(iso, "d(V-,V+) = " + std::to_string(pk.span.lo) + " below d_W - 10");
        if (pk.tet_count() < pk.span.hi) flag(iso, "fewer tetrahedra than d(V-,V+)");
        iso.note = iso.violations ? iso.note
                                  : "tets " + std::to_string(pk.tet_count()) + ", d(V-,V+) in [" +
                                        std::to_string(pk.span.lo) + "," + std::to_string(pk.span.hi) + "]";
        const EmbeddingReport e = check_pocket_embedding(s, pk, *s.monodromy(), cfg.embed_k);
        emb.samples = cfg.embed_k;
        for (const auto& msg : e.violations) flag(emb, msg);
        if (!emb.violations) emb.note = "k = " + std::to_string(cfg.embed_k);
      }
    } catch (const std::exception& e) {
      flag(iso, e.what());
    }
    rows.push_back(iso);
    rows.push_back(emb);
  }
  return rows;
}

CheckRow check_arc_graph(const FlatSurface& s, int edges) {
  CheckRow row{"theorems", "arc-graph-distance"};
  if (!is_punctured_torus(s) || !s.monodromy()) {
    row.unsupported = true;
    row.note = "Farey comparison needs a once-punctured torus bundle";
    return row;
  }
  TorusLadder ladder(s, edges);
  const auto& es = ladder.edges();
  for (size_t i = 0; i < es.size(); ++i) {
    const auto d = ladder.distances_from(i);
    for (size_t j = i + 1; j < es.size(); ++j) {
      ++row.samples;
      const long f = farey_distance(es[i].slope.p, es[i].slope.q, es[j].slope.p, es[j].slope.q);
      if (d[j] != f)
        flag(row, es[i].slope.p.get_str() + "/" + es[i].slope.q.get_str() + " to " + es[j].slope.p.get_str() + "/" +
                      es[j].slope.q.get_str() + ": " + std::to_string(d[j]) + " vs " + std::to_string(f));
    }
  }
  if (!row.violations)
    row.note = std::to_string(es.size()) + " edges, " + std::to_string(ladder.traced_pairs()) + " pairs traced";
  return row;
}

CheckRow check_bound_selftest() {
  CheckRow row{"theorems", "bound-checker-selftest"};
  auto report = [](long d) {
    ProjectionReport r;
    r.distance = r.lo = r.hi = d;
    return r;
  };
  row.samples = 3;
  if (check_projection_bound(true, 0, report(30), 5).holds) flag(row, "synthetic violation accepted");
  const BoundVerdict vac = check_projection_bound(true, 0, report(9), 1);
  if (!vac.holds || !vac.vacuous) flag(row, "vacuous case rejected");
  const BoundVerdict non = check_projection_bound(false, 2, report(9), 6);
  if (non.alpha != 6 || non.beta != 8 || non.holds) flag(row, "nonannular constants wrong");
  return row;
}

std::vector<CheckRow> hull_suite(const FlatSurface& s, const SamplePool& p, const CheckConfig& cfg, Rng& rng) {
  return {check_rect_hull_disjoint(s, p, cfg.pairs, rng), check_polygons(s, p, cfg.pairs, rng),
          check_polygon_disjoint(s, p, cfg.pairs, rng), check_retraction_identity(s, p),
          check_retraction_lipschitz(s, p, cfg.pairs, rng)};
}

std::vector<CheckRow> section_suite(const FlatSurface& s, const SamplePool& p, const CheckConfig& cfg, Rng& rng) {
  return {check_section_extension(s, p, cfg.subsets, rng), check_sweep_validity(s, p),
          check_flip_order(s, p, cfg.section_pairs, rng), check_period_independence(s, p)};
}

std::vector<CheckRow> theorem_suite(const FlatSurface& s, const CheckConfig& cfg) {
  std::vector<CheckRow> rows = check_projection_rows(s, cfg);
  rows.push_back(check_arc_graph(s, cfg.ladder_edges));
  rows.push_back(check_bound_selftest());
  return rows;
}

}  // namespace veering
