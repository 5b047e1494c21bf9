#include "veering/sections.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace veering {

namespace {

struct Outgoing {
  HalfEdge h;
  int tri, corner, sector;
  Vec2 dir;
};

const ConnectionKey& half_key(const std::vector<TauEdge>& edges, const HalfEdge& h) {
  return h.forward ? edges[h.edge].sc.key : edges[h.edge].sc.reverse;
}

// Counterclockwise outgoing half-edges at each cone point and the position
// of every half-edge in its list.
struct Rotation {
  std::vector<std::vector<Outgoing>> at;
  std::vector<std::array<std::pair<int, int>, 2>> where;  // [forward, reverse] -> (cone, index)

  Rotation(const FlatSurface& s, const std::vector<TauEdge>& edges) {
    at.resize(s.cone_points().size());
    where.resize(edges.size());
    for (size_t i = 0; i < edges.size(); ++i)
      for (bool fwd : {true, false}) {
        HalfEdge h{static_cast<int>(i), fwd};
        const ConnectionKey& k = half_key(edges, h);
        int cone = s.triangles()[k.tri].cone[k.corner];
        at[cone].push_back({h, k.tri, k.corner, s.sector_index(k.tri, k.corner), k.hol});
      }
    for (size_t c = 0; c < at.size(); ++c) {
      auto& list = at[c];
      std::sort(list.begin(), list.end(), [](const Outgoing& a, const Outgoing& b) {
        if (a.sector != b.sector) return a.sector < b.sector;
        return cross(a.dir, b.dir).sign() > 0;
      });
      for (size_t j = 0; j < list.size(); ++j)
        where[list[j].h.edge][list[j].h.forward ? 0 : 1] = {static_cast<int>(c), static_cast<int>(j)};
    }
  }

  // next half-edge along the boundary of the region left of h
  HalfEdge next(const HalfEdge& h) const {
    auto [cone, pos] = where[h.edge][h.forward ? 1 : 0];
    const auto& list = at[cone];
    int n = static_cast<int>(list.size());
    return list[(pos - 1 + n) % n].h;
  }
};

std::vector<std::vector<HalfEdge>> cycles_of(const Rotation& rot, size_t n_edges) {
  std::vector<std::vector<HalfEdge>> out;
  std::vector<std::array<bool, 2>> seen(n_edges, {false, false});
  for (size_t i = 0; i < n_edges; ++i)
    for (bool fwd : {true, false}) {
      HalfEdge h{static_cast<int>(i), fwd};
      if (seen[i][fwd ? 0 : 1]) continue;
      std::vector<HalfEdge> cyc;
      while (!seen[h.edge][h.forward ? 0 : 1]) {
        seen[h.edge][h.forward ? 0 : 1] = true;
        cyc.push_back(h);
        h = rot.next(h);
      }
      out.push_back(std::move(cyc));
    }
  return out;
}

void sort_edges(std::vector<TauEdge>& edges) {
  std::sort(edges.begin(), edges.end(), [](const TauEdge& a, const TauEdge& b) { return a.key() < b.key(); });
}

}  // namespace

std::vector<std::vector<HalfEdge>> boundary_cycles(const FlatSurface& s, const std::vector<TauEdge>& edges) {
  Rotation rot(s, edges);
  return cycles_of(rot, edges.size());
}

Section Section::from_edges(const FlatSurface& s, std::vector<TauEdge> edges) {
  sort_edges(edges);
  for (size_t i = 1; i < edges.size(); ++i)
    if (edges[i - 1].key() == edges[i].key()) throw SectionError("repeated edge in section");
  const int chi = -s.euler_char();
  if (static_cast<int>(edges.size()) != 3 * chi)
    throw SectionError("section needs " + std::to_string(3 * chi) + " edges, got " + std::to_string(edges.size()));
  Section t;
  t.edges_ = std::move(edges);
  auto cycles = boundary_cycles(s, t.edges_);
  if (static_cast<int>(cycles.size()) != 2 * chi) throw SectionError("complement is not a union of triangles");
  t.edge_faces_.assign(t.edges_.size(), {-1, -1});
  for (const auto& cyc : cycles) {
    if (cyc.size() != 3) throw SectionError("complementary region is not a triangle");
    SectionFace f;
    std::copy(cyc.begin(), cyc.end(), f.sides.begin());
    f.key = make_face_key(t.edges_[cyc[0].edge].key(), t.edges_[cyc[1].edge].key(), t.edges_[cyc[2].edge].key());
    int fi = static_cast<int>(t.faces_.size());
    for (const auto& h : cyc) t.edge_faces_[h.edge][h.forward ? 0 : 1] = fi;
    t.faces_.push_back(f);
  }
  return t;
}

int Section::find(const ConnectionKey& k) const {
  auto it = std::lower_bound(edges_.begin(), edges_.end(), k,
                             [](const TauEdge& e, const ConnectionKey& key) { return e.key() < key; });
  if (it == edges_.end() || !(it->key() == k)) return -1;
  return static_cast<int>(it - edges_.begin());
}

std::vector<ConnectionKey> Section::keys() const {
  std::vector<ConnectionKey> out;
  for (const auto& e : edges_) out.push_back(e.key());
  return out;
}

int Section::widest(int face) const {
  const auto& sd = faces_[face].sides;
  int best = sd[0].edge;
  for (int j = 1; j < 3; ++j)
    if (edges_[sd[j].edge].abs_dx() > edges_[best].abs_dx()) best = sd[j].edge;
  return best;
}

int Section::tallest(int face) const {
  const auto& sd = faces_[face].sides;
  int best = sd[0].edge;
  for (int j = 1; j < 3; ++j)
    if (edges_[sd[j].edge].abs_dy() > edges_[best].abs_dy()) best = sd[j].edge;
  return best;
}

std::vector<std::string> section_violations(const FlatSurface& s, const std::vector<TauEdge>& edges) {
  std::vector<std::string> out;
  for (const auto& e : edges)
    if (!is_tau_edge(s, e.sc)) out.push_back("edge " + to_string(e.sc.hol) + " is not a tau-edge");
  for (size_t i = 0; i < edges.size(); ++i)
    for (size_t j = i + 1; j < edges.size(); ++j)
      if (crosses(s, edges[i].sc, edges[j].sc))
        out.push_back("edges " + to_string(edges[i].sc.hol) + " and " + to_string(edges[j].sc.hol) + " cross");
  try {
    Section t = Section::from_edges(s, edges);
    const int chi = -s.euler_char();
    if (static_cast<int>(t.faces().size()) != 2 * chi) out.push_back("wrong face count");
  } catch (const SectionError& e) {
    out.emplace_back(e.what());
  }
  return out;
}

std::vector<int> flippable_edges(const Section& t, FlipDir dir) {
  std::vector<int> out;
  for (size_t i = 0; i < t.edges().size(); ++i) {
    const auto& f = t.edge_faces(static_cast<int>(i));
    bool ok = true;
    for (int fi : f) {
      int best = dir == FlipDir::up ? t.widest(fi) : t.tallest(fi);
      ok &= best == static_cast<int>(i);
    }
    if (ok) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::pair<Section, FlipMove> flip(const FlatSurface& s, const Section& t, int edge, FlipDir dir) {
  auto ok = flippable_edges(t, dir);
  if (std::find(ok.begin(), ok.end(), edge) == ok.end()) throw SectionError("edge is not flippable");
  const TauEdge& e = t.edges()[edge];
  Tetrahedron tet = tetrahedron_from_edge(s, e, dir == FlipDir::up ? TetraMode::above : TetraMode::below);
  FlipMove mv{e, dir == FlipDir::up ? tet.top_edge : tet.bottom_edge, tet.key(), dir};
  std::vector<TauEdge> edges = t.edges();
  edges[edge] = mv.new_edge;
  return {Section::from_edges(s, std::move(edges)), std::move(mv)};
}

namespace {

// Diagonal of a maximal rectangle grown around a regular point.
TauEdge first_tau_edge(const FlatSurface& s) {
  const Triangle& t = s.triangles().front();
  const Vec2 c = s.centroid(0);
  Scalar d(1);
  auto inside = [&](const Scalar& r) {
    for (const Vec2& q : {c + Vec2(r, r), c + Vec2(-r, r), c + Vec2(r, -r), c + Vec2(-r, -r)})
      for (int k = 0; k < 3; ++k)
        if (orient(t.v[k], t.v[(k + 1) % 3], q) <= 0) return false;
    return true;
  };
  while (!inside(d)) d = d * Scalar::rational(1, 2);
  ImmersedRectangle r{{0, Transform{}}, c.x - d, c.x + d, c.y - d, c.y + d};
  for (Side side : {Side::right, Side::left, Side::up, Side::down}) r = extend_rectangle(s, r, side).rect;
  return tetrahedron_from_rect(s, r).top_edge;
}

}  // namespace

Section initial_section(const FlatSurface& s) { return extend_to_section(s, {}); }

Section extend_to_section(const FlatSurface& s, std::vector<TauEdge> edges) {
  for (size_t i = 0; i < edges.size(); ++i)
    for (size_t j = i + 1; j < edges.size(); ++j)
      if (crosses(s, edges[i].sc, edges[j].sc)) throw SectionError("input edges cross");
  if (edges.empty()) edges.push_back(first_tau_edge(s));
  const size_t target = static_cast<size_t>(-3 * s.euler_char());
  std::set<ConnectionKey> have;
  for (const auto& e : edges) have.insert(e.key());
  while (edges.size() < target) {
    auto cycles = boundary_cycles(s, edges);
    std::stable_sort(cycles.begin(), cycles.end(),
                     [](const auto& a, const auto& b) { return a.size() < b.size(); });
    bool progress = false;
    for (const auto& cyc : cycles) {
      for (const HalfEdge& h : cyc) {
        const TauEdge e = edges[h.edge];
        EdgeLink link = edge_link(s, e, h.forward ? LinkSide::left : LinkSide::right);
        for (const auto& face : link.faces) {
          bool clear = true;
          for (const auto& fe : face.edges)
            for (const auto& x : edges)
              if (crosses(s, fe.sc, x.sc)) clear = false;
          if (!clear) continue;
          for (const auto& fe : face.edges)
            if (have.insert(fe.key()).second) {
              edges.push_back(fe);
              progress = true;
            }
          break;
        }
        if (progress) break;
      }
      if (progress) break;
    }
    if (!progress) throw SectionError("extension stalled before reaching a triangulation");
  }
  return Section::from_edges(s, std::move(edges));
}

Section extreme_section(const FlatSurface& s, const Section& seed, const std::vector<ConnectionKey>& k, FlipDir dir,
                        int budget) {
  std::set<ConnectionKey> fixed(k.begin(), k.end());
  Section t = seed;
  for (int step = 0;; ++step) {
    int pick = -1;
    for (int i : flippable_edges(t, dir))
      if (!fixed.count(t.edges()[i].key())) {
        pick = i;
        break;
      }
    if (pick < 0) return t;
    if (step >= budget) throw UnboundedError("extreme section not reached within budget");
    t = flip(s, t, pick, dir).first;
  }
}

std::pair<Section, Section> top_bottom_sections(const FlatSurface& s, const std::vector<ConnectionKey>& k,
                                                const Section& seed, int budget) {
  for (const auto& key : k)
    if (!seed.contains(key)) throw SectionError("seed section does not contain K");
  return {extreme_section(s, seed, k, FlipDir::down, budget), extreme_section(s, seed, k, FlipDir::up, budget)};
}

namespace {

class CrossCache {
 public:
  explicit CrossCache(const FlatSurface& s) : s_(s) {}
  bool operator()(const TauEdge& a, const TauEdge& b) {
    auto ka = a.key(), kb = b.key();
    if (kb < ka) std::swap(ka, kb);
    auto key = std::make_pair(ka, kb);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    bool c = crosses(s_, a.sc, b.sc);
    memo_.emplace(key, c);
    return c;
  }

 private:
  const FlatSurface& s_;
  std::map<std::pair<ConnectionKey, ConnectionKey>, bool> memo_;
};

// Chooses among candidate edges of t; first_seen tracks when each edge key
// first became a candidate.
class Chooser {
 public:
  Chooser(FlipPolicy policy, FlipDir dir, unsigned seed) : policy_(policy), dir_(dir), rng_(seed) {}

  int choose(const Section& t, const std::vector<int>& cand) {
    for (int i : cand) first_seen_.emplace(t.edges()[i].key(), counter_++);
    int best = cand.front();
    switch (policy_) {
      case FlipPolicy::widest_crossing:
        for (int i : cand) {
          const auto& e = t.edges()[i];
          const auto& b = t.edges()[best];
          bool better = dir_ == FlipDir::up ? e.abs_dx() > b.abs_dx() : e.abs_dy() > b.abs_dy();
          if (better) best = i;
        }
        break;
      case FlipPolicy::fifo:
      case FlipPolicy::last:
        for (int i : cand) {
          size_t si = first_seen_[t.edges()[i].key()], sb = first_seen_[t.edges()[best].key()];
          if (policy_ == FlipPolicy::fifo ? si < sb : si > sb) best = i;
        }
        break;
      case FlipPolicy::random:
        best = cand[std::uniform_int_distribution<size_t>(0, cand.size() - 1)(rng_)];
        break;
    }
    return best;
  }

 private:
  FlipPolicy policy_;
  FlipDir dir_;
  std::mt19937 rng_;
  std::map<ConnectionKey, size_t> first_seen_;
  size_t counter_ = 0;
};

}  // namespace

std::vector<Pocket> pockets_between(const FlatSurface& s, const Section& a, const Section& b, FlipPolicy policy,
                                    unsigned seed, int budget) {
  CrossCache crossing(s);
  const size_t nf = a.faces().size();
  std::vector<int> parent(nf);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> root = [&](int x) { return parent[x] == x ? x : parent[x] = root(parent[x]); };
  std::vector<bool> shared_a(a.edges().size());
  for (size_t i = 0; i < a.edges().size(); ++i) {
    shared_a[i] = b.contains(a.edges()[i].key());
    if (shared_a[i]) continue;
    const auto& f = a.edge_faces(static_cast<int>(i));
    parent[root(f[0])] = root(f[1]);
  }
  std::map<int, Pocket> by_root;
  for (size_t i = 0; i < a.edges().size(); ++i) {
    if (shared_a[i]) continue;
    by_root[root(a.edge_faces(static_cast<int>(i))[0])].bottom.push_back(a.edges()[i]);
  }
  for (const auto& eb : b.edges()) {
    if (a.contains(eb.key())) continue;
    int owner = -1;
    for (size_t i = 0; i < a.edges().size() && owner < 0; ++i)
      if (!shared_a[i] && crossing(eb, a.edges()[i])) owner = root(a.edge_faces(static_cast<int>(i))[0]);
    if (owner < 0) throw SectionError("edge of the second section crosses no edge of the first");
    by_root[owner].top.push_back(eb);
  }
  std::vector<Pocket> out;
  for (auto& [r, pk] : by_root) {
    for (size_t f = 0; f < nf; ++f)
      if (root(static_cast<int>(f)) == r) pk.faces.push_back(static_cast<int>(f));
    // orientation from any crossing pair
    for (const auto& x : pk.bottom) {
      for (const auto& y : pk.top)
        if (crossing(x, y)) {
          pk.orientation = slope_order(y.sc, x.sc) > 0 ? 1 : -1;
          break;
        }
      if (pk.orientation != 0) break;
    }
    if (pk.orientation == 0) throw SectionError("pocket without crossing edges");
    if (pk.orientation < 0) std::swap(pk.bottom, pk.top);
    const Section& lower = pk.orientation > 0 ? a : b;
    Section cur = lower;
    pk.steps.push_back(cur);
    Chooser chooser(policy, FlipDir::up, seed);
    for (int step = 0;; ++step) {
      std::vector<int> crossing_edges;
      for (size_t i = 0; i < cur.edges().size(); ++i)
        for (const auto& y : pk.top)
          if (crossing(cur.edges()[i], y)) {
            crossing_edges.push_back(static_cast<int>(i));
            break;
          }
      if (crossing_edges.empty()) break;
      if (step >= budget) throw UnboundedError("pocket flip budget exceeded");
      std::vector<int> cand;
      auto up = flippable_edges(cur, FlipDir::up);
      for (int i : crossing_edges)
        if (std::find(up.begin(), up.end(), i) != up.end()) cand.push_back(i);
      if (cand.empty()) throw SectionError("no upward flippable edge crosses the upper section");
      auto [next, mv] = flip(s, cur, chooser.choose(cur, cand), FlipDir::up);
      pk.tets.push_back(mv.tet);
      cur = std::move(next);
      pk.steps.push_back(cur);
    }
    pk.tet_count = static_cast<int>(pk.tets.size());
    out.push_back(std::move(pk));
  }
  return out;
}

SweepResult sweep(const FlatSurface& s, const Section& t, FlipDir dir,
                  const std::function<bool(const Section&, size_t)>& stop, FlipPolicy policy, unsigned seed,
                  size_t budget) {
  SweepResult res;
  res.sections.push_back(t);
  Chooser chooser(policy, dir, seed);
  while (!stop(res.sections.back(), res.moves.size())) {
    if (res.moves.size() >= budget) throw UnboundedError("sweep budget exceeded");
    const Section& cur = res.sections.back();
    auto cand = flippable_edges(cur, dir);
    if (cand.empty()) throw SectionError("section admits no flip");
    auto [next, mv] = flip(s, cur, chooser.choose(cur, cand), dir);
    res.moves.push_back(std::move(mv));
    res.sections.push_back(std::move(next));
  }
  return res;
}

Section apply_monodromy(const FlatSurface& s, const Monodromy& m, const Section& t) {
  std::vector<TauEdge> edges;
  for (const auto& e : t.edges()) {
    auto image = is_tau_edge(s, apply_monodromy(s, m, e.sc));
    if (!image) throw SectionError("monodromy image of a tau-edge is not a tau-edge");
    edges.push_back(std::move(*image));
  }
  return Section::from_edges(s, std::move(edges));
}

int period_tet_count(const FlatSurface& s, const Section& t, const Monodromy& m) {
  Section image = apply_monodromy(s, m, t);
  int total = 0;
  for (const auto& p : pockets_between(s, t, image)) total += p.orientation * p.tet_count;
  return std::abs(total);
}

}  // namespace veering
