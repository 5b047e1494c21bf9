#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "veering/hulls.hpp"
#include "veering/sections.hpp"

namespace veering {

class ProjectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised for bases whose arc graph this module does not build.
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SubsurfaceKind { annulus, low_complexity };

struct SubsurfaceSpec {
  std::string name;
  SubsurfaceKind kind = SubsurfaceKind::annulus;
  int euler = 0;                              // |chi(Y)|
  std::optional<ClosedCurve> core;            // annuli
  std::vector<std::vector<SaddleConnection>> cycles;  // boundary cycles, possibly empty

  bool annular() const { return kind == SubsurfaceKind::annulus; }
};

std::vector<SubsurfaceSpec> subsurfaces(const FlatSurface& s);
const SubsurfaceSpec& find_subsurface(const std::vector<SubsurfaceSpec>& ys, const std::string& name);

// lo and hi bound the true value; distance is the upper end, attained by the
// witnesses. They agree unless two ends share a gap and may swap beyond it.
struct ProjectionReport {
  long distance = 0, lo = 0, hi = 0;
  std::string method;            // strip-count | farey-bfs
  double twist = 0;              // relative turns of the two directions, leaf pairs only
  std::vector<std::string> witnesses;

  bool exact() const { return lo == hi; }
};

// Directions of the horizontal and vertical foliations.
Vec2 horizontal();
Vec2 vertical();

// Relative twisting of two directions across the cylinder, both transverse
// to the core: modulus * |cot a - cot b| turns.
Scalar relative_twist(const MaximalCylinder& c, const Vec2& a, const Vec2& b);

// An arc of the annular cover seen in the strip over the maximal cylinder:
// positions are turns along the core, heights are in units of |core|, and
// every arc is oriented from the right boundary to the left one.
struct StripEnd {
  bool exact = false;           // ends at this cone point; otherwise its ideal end lies in the gap around pos
  Scalar pos;                   // where the arc meets the boundary
  Scalar cot;                   // d pos / d height
  std::optional<Scalar> reach;  // height it runs beyond the boundary; unbounded for leaves
};

struct StripArc {
  StripEnd right, left;
};

// Lifts of sc that cross the core, one per crossing.
std::vector<StripArc> strip_arcs(const FlatSurface& s, const MaximalCylinder& c, const SaddleConnection& sc);
// Nonsingular leaf of the given direction through the core at turn s0.
StripArc leaf_arc(const MaximalCylinder& c, const Vec2& dir, const Scalar& s0);
// Distance between two arcs in the annular arc graph.
ProjectionReport arc_distance(const MaximalCylinder& c, const StripArc& a, const StripArc& b);

// Between the foliations of two directions, minimised over their leaves.
ProjectionReport annular_distance(const MaximalCylinder& c, const Vec2& a, const Vec2& b);
// d_Y(lambda-, lambda+) for an annulus.
ProjectionReport annular_distance(const MaximalCylinder& c);
// Between a connection and a foliation or another connection; nullopt when
// a connection misses the core.
std::optional<ProjectionReport> annular_distance(const FlatSurface& s, const MaximalCylinder& c,
                                                 const SaddleConnection& e, const Vec2& dir);
std::optional<ProjectionReport> annular_distance(const FlatSurface& s, const MaximalCylinder& c,
                                                 const SaddleConnection& e, const SaddleConnection& f);

// Minimum of d_Y over the edges of t that cross the core, against a
// direction or another section; nullopt when no edge crosses.
std::optional<ProjectionReport> section_distance(const FlatSurface& s, const MaximalCylinder& c, const Section& t,
                                                 const Vec2& dir);
std::optional<ProjectionReport> section_distance(const FlatSurface& s, const MaximalCylinder& c, const Section& a,
                                                 const Section& b);

// Distance in the Farey graph between slopes p1/q1 and p2/q2.
long farey_distance(const mpz_class& p1, const mpz_class& q1, const mpz_class& p2, const mpz_class& q2);

struct Slope {
  mpz_class p, q;  // lattice coordinates of the holonomy, up to sign
};

// Lattice coordinates of a connection on a once-punctured torus given as a
// single translation parallelogram.
Slope torus_slope(const FlatSurface& s, const SaddleConnection& sc);
Slope torus_slope(const FlatSurface& s, const Vec2& hol);
bool is_punctured_torus(const FlatSurface& s);
ProjectionReport low_complexity_distance(const FlatSurface& s, const SaddleConnection& a, const SaddleConnection& b);

struct LadderEdge {
  TauEdge base;   // representative met while sweeping the first period
  int power = 0;  // the edge is f^power(base)
  Vec2 hol;
  Slope slope;
};

// Tau-edges of a once-punctured torus bundle: those met by one period of
// flips and their images under powers of f, one per holonomy up to sign.
class TorusLadder {
 public:
  // Grows symmetric power ranges until at least `count` edges are found.
  TorusLadder(const FlatSurface& s, int count);

  const std::vector<LadderEdge>& edges() const { return edges_; }
  // Disjoint interiors. Algebraic intersection |det| >= 2 forces a crossing;
  // other pairs are pulled back by f^-min(power) and traced exactly.
  bool disjoint(size_t i, size_t j);
  // BFS distances from i in the graph of disjoint ladder edges, -1 if unreached.
  std::vector<long> distances_from(size_t i);

  long certified_pairs() const { return certified_; }
  long traced_pairs() const { return traced_; }

 private:
  const SaddleConnection& realise(size_t base, int power);

  const FlatSurface& s_;
  std::vector<TauEdge> window_;
  std::vector<LadderEdge> edges_;
  std::vector<size_t> base_index_;
  std::vector<Monodromy> powers_;  // f^0, f^1, ...
  std::map<std::pair<size_t, int>, SaddleConnection> images_;
  std::map<std::pair<size_t, size_t>, bool> memo_;
  long certified_ = 0, traced_ = 0;
};

// rect_hull of the boundary data; for annuli, of the maximal cylinder boundary.
std::vector<TauEdge> tau_boundary(const FlatSurface& s, const SubsurfaceSpec& y);

struct YPocket {
  MaximalCylinder cylinder;
  std::vector<TauEdge> boundary;  // tau-boundary
  Section bottom, top;            // T-(boundary), T+(boundary)
  Pocket pocket;                  // over the interior, bottom to top
  ProjectionReport bottom_to_lower, top_to_upper;  // d_Y(T-, lambda-), d_Y(T+, lambda+)
};

YPocket y_pocket(const FlatSurface& s, const SubsurfaceSpec& y);

struct IsolatedPocket {
  int a_index = 0, b_index = 0;
  int threshold_c = 4;
  Section lower, upper;                    // V-, V+
  std::vector<TetraKey> tets;              // flips from V- to V+
  std::vector<TauEdge> interior_edges;     // edges of V not shared by V- and V+
  std::vector<FaceKey> faces;              // faces of V not shared by V- and V+
  std::vector<ConnectionKey> boundary;     // tau-boundary keys
  ProjectionReport span;                   // d_Y(V-, V+)
  int tet_count() const { return static_cast<int>(tets.size()); }
};

struct IsolatedPocketResult {
  ProjectionReport lambda_distance;                 // d_Y(lambda-, lambda+)
  std::vector<long> to_lower, to_upper;             // d_Y(T_i, lambda-+), lower ends
  std::optional<IsolatedPocket> pocket;             // absent below the threshold
  std::string reason;
};

IsolatedPocketResult isolated_pocket(const FlatSurface& s, const YPocket& u, const SubsurfaceSpec& y);

// Violations of the isolated-pocket conditions; empty when sound.
std::vector<std::string> isolated_pocket_violations(const FlatSurface& s, const MaximalCylinder& c,
                                                    const IsolatedPocket& v);

struct EmbeddingReport {
  int k = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// V against its translates f^i(V), i = 1..k: no shared tetrahedron, face or
// edge outside the tau-boundaries of Y and f^i(Y).
EmbeddingReport check_pocket_embedding(const FlatSurface& s, const IsolatedPocket& v, const Monodromy& m, int k);

struct BoundVerdict {
  bool holds = true;
  bool vacuous = false;  // d_W <= beta
  long alpha = 1, beta = 10;
  long d_w = 0;          // conservative end of the band
  long tau = 0;
  long margin = 0;       // tau - alpha (d_W - beta), positive when the bound holds
};

// alpha (d_W(lambda-, lambda+) - beta) < |tau| with alpha = 1, beta = 10 for
// annuli and alpha = 3|chi|, beta = 8 otherwise; uses d_W's upper end.
BoundVerdict check_projection_bound(bool annular, int euler, const ProjectionReport& d_w, long tau_count);

}  // namespace veering
