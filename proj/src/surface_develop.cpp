#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "veering/surface.hpp"

namespace veering {

namespace {

struct CopyLess {
  bool operator()(const Copy& a, const Copy& b) const {
    if (a.tri != b.tri) return a.tri < b.tri;
    return key_compare(a.g, b.g) < 0;
  }
};

struct VertexLess {
  bool operator()(const std::pair<int, Vec2>& a, const std::pair<int, Vec2>& b) const {
    if (a.first != b.first) return a.first < b.first;
    return key_compare(a.second, b.second) < 0;
  }
};

}  // namespace

Development FlatSurface::develop(const ConvexRegion& region, const Copy& seed, DevelopMode mode,
                                 size_t budget) const {
  Development dev;
  if (region.empty_interior()) return dev;
  std::set<Copy, CopyLess> seen;
  std::set<std::pair<int, Vec2>, VertexLess> seen_interior, seen_boundary;
  std::deque<int> queue;
  seen.insert(seed);
  dev.copies.push_back(seed);
  queue.push_back(0);
  while (!queue.empty()) {
    const int ci = queue.front();
    queue.pop_front();
    const Copy cp = dev.copies[ci];
    const Triangle& t = tris_[cp.tri];
    std::array<Vec2, 3> p;
    for (int k = 0; k < 3; ++k) p[k] = cp.g.apply(t.v[k]);
    for (int k = 0; k < 3; ++k) {
      if (region.contains(p[k])) {
        if (seen_interior.insert({t.cone[k], p[k]}).second) dev.interior.push_back({t.cone[k], p[k], ci, k});
        if (mode == DevelopMode::stop_at_interior) return dev;
      } else if (region.contains_closed(p[k])) {
        if (seen_boundary.insert({t.cone[k], p[k]}).second) dev.boundary.push_back({t.cone[k], p[k], ci, k});
      }
    }
    for (int k = 0; k < 3; ++k) {
      if (!region.meets_segment(p[k], p[(k + 1) % 3])) continue;
      Copy next{t.nbr[k], cp.g.compose(t.glue[k])};
      if (!seen.insert(next).second) continue;
      if (dev.copies.size() >= budget) {
        dev.exhausted = true;
        return dev;
      }
      dev.copies.push_back(next);
      queue.push_back(static_cast<int>(dev.copies.size()) - 1);
    }
  }
  return dev;
}

ImmersedRectangle spanning_rectangle(const FlatSurface& s, const SaddleConnection& sc) {
  ImmersedRectangle r;
  r.seed = s.seed_between(sc, Scalar(0), Scalar(1), 0);
  const Scalar zero(0);
  r.x0 = min(zero, sc.hol.x);
  r.x1 = max(zero, sc.hol.x);
  r.y0 = min(zero, sc.hol.y);
  r.y1 = max(zero, sc.hol.y);
  return r;
}

bool is_singularity_free(const FlatSurface& s, const ImmersedRectangle& r) {
  if (r.width().sign() <= 0 || r.height().sign() <= 0) return true;
  Development dev = s.develop(r.region(), r.seed, FlatSurface::DevelopMode::stop_at_interior);
  if (dev.exhausted) throw UnboundedError("rectangle development exceeded its budget");
  return dev.interior.empty();
}

namespace {

// Rectangle grown by delta on one side, and a vertex's depth past the moving edge.
struct Grower {
  const ImmersedRectangle& r;
  Side side;

  ImmersedRectangle grow(const Scalar& delta) const {
    ImmersedRectangle out = r;
    switch (side) {
      case Side::right: out.x1 = r.x1 + delta; break;
      case Side::left: out.x0 = r.x0 - delta; break;
      case Side::up: out.y1 = r.y1 + delta; break;
      case Side::down: out.y0 = r.y0 - delta; break;
    }
    return out;
  }
  Scalar depth(const Vec2& p) const {
    switch (side) {
      case Side::right: return p.x - r.x1;
      case Side::left: return r.x0 - p.x;
      case Side::up: return p.y - r.y1;
      case Side::down: return r.y0 - p.y;
    }
    return Scalar(0);
  }
  // other coordinate strictly inside the moving edge
  bool on_open_edge(const Vec2& p) const {
    if (side == Side::right || side == Side::left) return p.y > r.y0 && p.y < r.y1;
    return p.x > r.x0 && p.x < r.x1;
  }
};

}  // namespace

Extension extend_rectangle(const FlatSurface& s, const ImmersedRectangle& r, Side side, int budget) {
  Grower grow{r, side};
  auto empty_at = [&](const Scalar& delta) { return is_singularity_free(s, grow.grow(delta)); };
  // a blocker sits within about area / length of a long thin rectangle
  Scalar area(0);
  for (const auto& t : s.triangles()) area += cross(t.v[1] - t.v[0], t.v[2] - t.v[0]);
  Scalar step = max(r.width(), r.height());
  if (step.sign() <= 0) step = Scalar(1);
  step = min(step, area / step);
  int doublings = 0;
  while (empty_at(step)) {
    if (++doublings > budget) throw UnboundedError("unbounded: no cone point blocks the extension");
    step = step + step;
  }
  Development full = s.develop(grow.grow(step).region(), r.seed, FlatSurface::DevelopMode::full);
  if (full.exhausted) throw UnboundedError("rectangle development exceeded its budget");
  std::vector<Scalar> cand{Scalar(0)};
  for (const auto& v : full.interior) {
    Scalar d = grow.depth(v.pos);
    if (d.sign() > 0) cand.push_back(d);
  }
  std::sort(cand.begin(), cand.end(), [](const Scalar& a, const Scalar& b) { return a < b; });
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  // cand[lo] is free, cand[hi] (or step) is not
  size_t lo = 0, hi = cand.size();
  while (hi - lo > 1) {
    size_t mid = (lo + hi) / 2;
    if (empty_at(cand[mid])) lo = mid;
    else hi = mid;
  }
  Extension ext;
  ext.rect = grow.grow(cand[lo]);
  Development fin = s.develop(ext.rect.region(), r.seed, FlatSurface::DevelopMode::full);
  Grower moved{ext.rect, side};
  int blockers = 0;
  for (const auto& v : fin.boundary) {
    if (!moved.depth(v.pos).is_zero() || !moved.on_open_edge(v.pos)) continue;
    if (blockers++ == 0) ext.blocker = v;
  }
  if (blockers == 0) throw SurfaceError("extension found no blocking cone point");
  ext.unique_blocker = blockers == 1;
  return ext;
}

}  // namespace veering
