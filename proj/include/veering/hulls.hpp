#pragma once

#include <string>
#include <variant>
#include <vector>

#include "veering/veering.hpp"

namespace veering {

// Maximal free rectangle along a saddle connection; [a, b] is the parameter
// interval of its diagonal, coordinates are in the connection's frame.
struct HullRect {
  ImmersedRectangle rect;
  Scalar a, b;
  std::vector<DevVertex> boundary;  // cone points on the closed rectangle's boundary
};

struct RectHullResult {
  SaddleConnection source;
  std::vector<HullRect> rectangles;   // ordered along the source
  std::vector<TauEdge> edges;         // hull 1-skeleta, one per canonical key
  std::vector<std::string> anomalies; // degenerate alignments met on the way
};

RectHullResult rect_hull(const FlatSurface& s, const SaddleConnection& sc);

// Union of the hulls of several connections, one edge per canonical key.
std::vector<TauEdge> rect_hull_edges(const FlatSurface& s, const std::vector<SaddleConnection>& scs);

// +1: triangles on the left of the source direction, -1: on the right.
using HullSide = int;

struct HullTriangle {
  std::array<Vec2, 3> corners;  // counterclockwise, source frame
  Scalar a, b;                  // hypotenuse parameter interval
  DevVertex lo, hi;             // cone points on the legs through source(a), source(b)
};

struct TriHullResult {
  SaddleConnection source;
  HullSide side = 1;
  std::vector<HullTriangle> triangles;
  std::vector<SaddleConnection> path;  // oriented from the source's start to its end
  std::vector<Vec2> points;            // path vertices in the source frame, points[0] = 0
  std::vector<Vec2> polygon;           // counterclockwise boundary of P, empty when path = {source}
  std::vector<std::string> anomalies;

  bool degenerate() const { return polygon.empty(); }
};

TriHullResult tri_hull(const FlatSurface& s, const SaddleConnection& sc, HullSide side);

// Closure, simplicity and strip-foliation problems of P(source); empty when sound.
std::vector<std::string> polygon_violations(const FlatSurface& s, const TriHullResult& h);

enum class PushSign { vertical, horizontal };

// Image of source(t) on the hull path, pushed along the chosen foliation.
Vec2 push_point(const TriHullResult& h, const Scalar& t, PushSign sign);
// Parameter on the source of a path point pushed back along the same leaf.
Scalar pull_point(const TriHullResult& h, const Vec2& p, PushSign sign);

// Concatenated hull paths of a coherently oriented path of connections.
std::vector<SaddleConnection> thull_push(const FlatSurface& s, const std::vector<SaddleConnection>& path,
                                         HullSide side);

// Arc as a concatenation of oriented connections: each sc runs key -> end.
struct ArcPath {
  std::vector<SaddleConnection> pieces;
};

// Closed geodesic through a regular point with the given holonomy.
struct ClosedCurve {
  SurfacePoint point;
  Vec2 holonomy;
};

using ArcOrCurve = std::variant<ArcPath, ClosedCurve>;

class TighteningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Counterclockwise angle at a cone point from direction a to direction b,
// compared with pi; `b_in_a` receives b's holonomy in a's chart when < pi.
int compare_angle_with_pi(const FlatSurface& s, const ConnectionKey& a, const ConnectionKey& b,
                          Vec2* b_in_a = nullptr);

// Geodesic tightening of a path; connections with junction angles >= pi on both sides.
std::vector<SaddleConnection> tighten(const FlatSurface& s, std::vector<SaddleConnection> path,
                                      int budget = 10000);

// Maximal flat cylinder around a closed geodesic. Heights are measured from
// the core in units of |holonomy|, so their sum is the modulus.
struct MaximalCylinder {
  ClosedCurve core;
  std::vector<SaddleConnection> boundary;
  Scalar height_left, height_right;
  // cone points on each boundary, in turns along the core from its point, in [0, 1)
  std::vector<Scalar> cones_left, cones_right;

  Scalar modulus() const { return height_left + height_right; }
};

MaximalCylinder maximal_cylinder(const FlatSurface& s, const ClosedCurve& c, int budget = 64);

// Boundary connections of the maximal flat cylinder around a closed geodesic.
std::vector<SaddleConnection> cylinder_boundary(const FlatSurface& s, const ClosedCurve& c, int budget = 64);

// Saddle connections composing the geodesic representative, one per canonical key.
std::vector<SaddleConnection> saddle_decompose(const FlatSurface& s, const ArcOrCurve& a);

std::vector<TauEdge> retract_to_tau(const FlatSurface& s, const ArcOrCurve& a);

}  // namespace veering
