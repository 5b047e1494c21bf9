#pragma once

#include <array>
#include <optional>
#include <vector>

#include "veering/surface.hpp"

namespace veering {

// Saddle connection spanning a singularity-free rectangle corner to corner.
struct TauEdge {
  SaddleConnection sc;
  ImmersedRectangle rect;

  const ConnectionKey& key() const { return sc.canonical(); }
  Scalar abs_dx() const { return abs(sc.hol.x); }
  Scalar abs_dy() const { return abs(sc.hol.y); }
};

std::optional<TauEdge> is_tau_edge(const FlatSurface& s, const SaddleConnection& sc);
TauEdge tau_edge_or_throw(const FlatSurface& s, const SaddleConnection& sc);

// Face of a tetrahedron or section, keyed by its sorted edge keys.
using FaceKey = std::array<ConnectionKey, 3>;
FaceKey make_face_key(const ConnectionKey& a, const ConnectionKey& b, const ConnectionKey& c);

struct TetraKey {
  ConnectionKey top, bottom;
  friend bool operator<(const TetraKey& a, const TetraKey& b) {
    int c = key_compare(a.top, b.top);
    return c != 0 ? c < 0 : key_compare(a.bottom, b.bottom) < 0;
  }
  friend bool operator==(const TetraKey& a, const TetraKey& b) { return a.top == b.top && a.bottom == b.bottom; }
};

enum class Corner { bottom = 0, right = 1, top = 2, left = 3 };

struct Tetrahedron {
  ImmersedRectangle rect;               // maximal singularity-free
  std::array<DevVertex, 4> corners;     // indexed by Corner, in rect's developing frame
  TauEdge top_edge;                     // top-bottom corners
  TauEdge bottom_edge;                  // left-right corners
  std::array<TauEdge, 4> sides;         // bottom-right, right-top, top-left, left-bottom
  std::array<FaceKey, 2> top_faces;     // contain the top edge
  std::array<FaceKey, 2> bottom_faces;  // contain the bottom edge

  TetraKey key() const { return {top_edge.key(), bottom_edge.key()}; }
  std::vector<const TauEdge*> edges() const;
};

enum class TetraMode { below, above };

// Tetrahedron on a maximal rectangle given in some developing frame.
Tetrahedron tetrahedron_from_rect(const FlatSurface& s, const ImmersedRectangle& rect);
Tetrahedron tetrahedron_from_edge(const FlatSurface& s, const TauEdge& e, TetraMode mode);

class OrderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// +1 if e is more vertical than f, -1 if less; the edges must cross.
int slope_compare(const FlatSurface& s, const TauEdge& e, const TauEdge& f);
// Same comparison without the crossing precondition.
int slope_order(const SaddleConnection& e, const SaddleConnection& f);

enum class LinkSide { left, right };

struct LinkFace {
  DevVertex apex;                // third vertex, in e's developing frame
  FaceKey key;
  std::array<TauEdge, 2> edges;  // the face's edges other than e
};

// Tetrahedra swinging around e on one side: tets runs from the one below e
// to the one above, faces[i] is shared by tets[i] and tets[i + 1].
struct EdgeLink {
  std::vector<Tetrahedron> tets;
  std::vector<LinkFace> faces;
};

EdgeLink edge_link(const FlatSurface& s, const TauEdge& e, LinkSide side, int budget = 4096);

// Edge of t joining the corners at p and q (positions in t's frame).
const TauEdge* edge_between(const Tetrahedron& t, const Vec2& p, const Vec2& q);

// Drops the memoized tau-edge tests and tetrahedra of all surfaces.
void clear_veering_caches();

// tau-edges with |dx| <= bx and |dy| <= by
std::vector<TauEdge> enumerate_tau_edges(const FlatSurface& s, const Scalar& bx, const Scalar& by);

// First horizontal or vertical saddle connection within the box, if any.
std::optional<SaddleConnection> find_axis_connection(const FlatSurface& s, const Scalar& bx, const Scalar& by);

}  // namespace veering
