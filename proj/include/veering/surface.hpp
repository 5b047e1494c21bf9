#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "veering/geometry.hpp"
#include "veering/scalar.hpp"

namespace veering {

class SurfaceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a search runs past its budget without an answer.
class UnboundedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class GlueKind { translation, half_turn };

struct PolygonSpec {
  std::vector<Vec2> vertices;  // counterclockwise
};

struct GluingSpec {
  int poly_a = 0, edge_a = 0, poly_b = 0, edge_b = 0;
  GlueKind kind = GlueKind::translation;
};

struct PointRef {
  int polygon = 0;
  Vec2 point;
};

// Saddle connection named by its start corner (a polygon vertex) and its
// holonomy in that polygon's chart.
struct ConnectionRef {
  int polygon = 0, vertex = 0;
  Vec2 holonomy;
};

struct MonodromySpec {
  std::array<std::array<Scalar, 2>, 2> matrix;
  PointRef base;
  PointRef image;
  int image_sign = 1;
  std::string word;
};

struct SubsurfaceSpecDoc {
  std::string name;
  std::string kind;  // "annulus" or "low-complexity"
  int euler = 0;
  std::optional<PointRef> core_point;
  std::optional<Vec2> core_holonomy;
  std::vector<std::vector<ConnectionRef>> cycles;
};

struct SurfaceDocument {
  std::string name;
  FieldPtr field;
  std::vector<PolygonSpec> polygons;
  std::vector<GluingSpec> gluings;
  bool fully_punctured = true;
  std::vector<std::pair<int, int>> unpunctured;  // (polygon, vertex)
  std::optional<MonodromySpec> monodromy;
  std::vector<SubsurfaceSpecDoc> subsurfaces;
};

SurfaceDocument parse_surface_document(const std::string& json_text);

using IntMatrix = std::array<std::array<mpz_class, 2>, 2>;

// Product of R = [[1,1],[0,1]] and L = [[1,0],[1,1]] read left to right.
IntMatrix word_matrix(std::string_view word);

// Once-punctured torus with the affine monodromy of an R/L word: one
// parallelogram in the eigenbasis, monodromy diag(mu, 1/mu), plus the
// annulus about the curve R fixes.
SurfaceDocument punctured_torus_bundle(std::string_view word);
std::string serialize_surface_document(const SurfaceDocument& doc);

struct Triangle {
  int polygon = 0;
  std::array<int, 3> poly_vertex{};
  std::array<Vec2, 3> v;           // chart coordinates, counterclockwise
  std::array<int, 3> nbr{};        // triangle across edge i (edge i runs v[i] -> v[i+1])
  std::array<int, 3> nbr_edge{};   // index of the same edge in nbr
  std::array<Transform, 3> glue;   // nbr chart -> this chart
  std::array<int, 3> edge_id{};    // shared by both sides of an edge
  std::array<int, 3> cone{};       // cone point at vertex i
};

struct ConePoint {
  int id = 0;
  int polygon = 0, vertex = 0;
  int angle_pi = 0;  // cone angle is angle_pi * pi
  bool puncture = true;
  std::vector<std::pair<int, int>> sectors;  // (triangle, corner), counterclockwise
};

// A triangle placed in a developing plane: chart point z sits at g(z).
struct Copy {
  int tri = 0;
  Transform g;
};

// Cone point occurrence in a developing plane.
struct DevVertex {
  int cone = 0;
  Vec2 pos;
  int copy = 0;    // index into the development's copy list
  int corner = 0;  // vertex index inside that copy's triangle
};

struct Development {
  std::vector<Copy> copies;
  std::vector<DevVertex> interior;  // strictly inside the region
  std::vector<DevVertex> boundary;  // on the region's boundary
  bool exhausted = false;           // stopped on budget
};

struct SegmentPiece {
  int tri = 0;
  Transform g;      // chart -> developing plane of the segment
  Scalar t0, t1;    // parameters along the segment, 0 at its start
  int entry = -1;   // edge of entry, -1 at the start
  int exit = -1;    // edge of exit, -1 if the segment ends in this copy
};

struct TraceResult {
  enum class Status { reached_vertex, hit_vertex, ended_inside };
  Status status = Status::ended_inside;
  std::vector<SegmentPiece> pieces;
  Scalar t_end;          // parameter where the trace stopped
  int end_corner = -1;   // vertex of the last piece's triangle when a vertex was met
};

// Oriented key: start sector and holonomy in that sector's triangle chart.
// Sectors are half-open: a direction along the counterclockwise boundary of
// a corner belongs to the next corner.
struct ConnectionKey {
  int tri = 0, corner = 0;
  Vec2 hol;
};
int key_compare(const ConnectionKey& a, const ConnectionKey& b);
inline bool operator<(const ConnectionKey& a, const ConnectionKey& b) { return key_compare(a, b) < 0; }
inline bool operator==(const ConnectionKey& a, const ConnectionKey& b) { return key_compare(a, b) == 0; }

struct SaddleConnection {
  int start = 0, end = 0;  // cone point ids
  ConnectionKey key;       // forward
  ConnectionKey reverse;   // from the end
  Vec2 hol;                // developing-plane holonomy (equals key.hol up to the chart sign)
  bool sign_ambivalent = false;
  std::vector<SegmentPiece> pieces;  // developed with the start at the origin

  const ConnectionKey& canonical() const { return key_compare(key, reverse) <= 0 ? key : reverse; }
  bool same_as(const SaddleConnection& o) const { return canonical() == o.canonical(); }
};

struct ImmersedRectangle {
  Copy seed;  // a copy meeting the open box
  Scalar x0, x1, y0, y1;

  ConvexRegion region() const { return ConvexRegion::box(x0, x1, y0, y1); }
  Scalar width() const { return x1 - x0; }
  Scalar height() const { return y1 - y0; }
};

enum class Side { up, down, left, right };

struct Extension {
  ImmersedRectangle rect;
  DevVertex blocker;
  bool unique_blocker = true;
};

struct Monodromy {
  std::array<std::array<Scalar, 2>, 2> matrix;
  // image of each triangle's centroid: (triangle, chart point, sign)
  struct Image {
    int tri = 0;
    Vec2 point;
    int sign = 1;
  };
  std::vector<Image> centroid_image;
  std::string word;

  Vec2 apply_linear(const Vec2& v) const {
    return {matrix[0][0] * v.x + matrix[0][1] * v.y, matrix[1][0] * v.x + matrix[1][1] * v.y};
  }
};

// A point of the surface in a triangle chart.
struct SurfacePoint {
  int tri = 0;
  Vec2 p;
};

class FlatSurface {
 public:
  static std::shared_ptr<const FlatSurface> load(const SurfaceDocument& doc);
  static std::shared_ptr<const FlatSurface> load_json(const std::string& text);

  // distinct for every loaded surface in the process
  uint64_t id() const { return id_; }
  const SurfaceDocument& document() const { return doc_; }
  const FieldPtr& field() const { return doc_.field; }
  const std::vector<Triangle>& triangles() const { return tris_; }
  const std::vector<ConePoint>& cone_points() const { return cones_; }
  int num_edges() const { return num_edges_; }
  // Euler characteristic of the punctured surface
  int euler_char() const { return euler_; }
  bool half_translation() const { return half_translation_; }
  bool fully_punctured() const { return doc_.fully_punctured; }
  const std::optional<Monodromy>& monodromy() const { return monodromy_; }
  Vec2 centroid(int tri) const;

  // sector (tri, corner) -> position in its cone point's counterclockwise order
  int sector_index(int tri, int corner) const { return sector_pos_[tri][corner]; }
  std::pair<int, int> next_sector(int tri, int corner) const;

  SurfacePoint locate(const PointRef& ref) const;
  ConnectionKey key_from_ref(const ConnectionRef& ref) const;

  // Direction d (chart of tri) at corner c, moved into the sector that
  // contains it under the half-open convention.
  ConnectionKey normalize_key(int tri, int corner, const Vec2& d) const;
  bool sector_contains(int tri, int corner, const Vec2& d) const;

  // Straight trace of v from a corner, or from a point of the surface.
  TraceResult trace_from_corner(int tri, int corner, const Vec2& v) const;
  TraceResult trace_from_point(const SurfacePoint& p, const Vec2& v) const;

  std::optional<SaddleConnection> connection(const ConnectionKey& key) const;
  SaddleConnection connection_or_throw(const ConnectionKey& key) const;

  // Saddle connection between two cone-point occurrences of a development,
  // leaving `from` in direction to - from.
  std::optional<SaddleConnection> connection_between(const Development& dev, const DevVertex& from,
                                                     const Vec2& to) const;

  enum class DevelopMode { stop_at_interior, full };
  Development develop(const ConvexRegion& region, const Copy& seed, DevelopMode mode,
                      size_t budget = 200000) const;

  // A copy in a connection's developing plane meeting every open region that
  // touches the connection along its parameter interval (a, b): side 0 for
  // regions on both sides, +1 for the left side only, -1 for the right.
  Copy seed_between(const SaddleConnection& s, const Scalar& a, const Scalar& b, int side = 0) const;

 private:
  void build();
  void build_cones();
  void build_monodromy();

  uint64_t id_ = 0;
  SurfaceDocument doc_;
  std::vector<Triangle> tris_;
  std::vector<ConePoint> cones_;
  std::vector<std::array<int, 3>> sector_pos_;
  int num_edges_ = 0;
  int euler_ = 0;
  bool half_translation_ = false;
  std::optional<Monodromy> monodromy_;
};

using SurfacePtr = std::shared_ptr<const FlatSurface>;

SurfacePtr load_surface(const std::string& json_text);
SurfacePtr load_surface_file(const std::string& path);

TraceResult develop_segment(const FlatSurface& s, const SurfacePoint& start, const Vec2& v);

std::vector<SaddleConnection> enumerate_saddle_connections(const FlatSurface& s, const Scalar& bx,
                                                           const Scalar& by);

ImmersedRectangle spanning_rectangle(const FlatSurface& s, const SaddleConnection& sc);
bool is_singularity_free(const FlatSurface& s, const ImmersedRectangle& r);
Extension extend_rectangle(const FlatSurface& s, const ImmersedRectangle& r, Side side,
                           int budget = 48);

SurfacePoint map_point(const FlatSurface& s, const Monodromy& m, const SurfacePoint& p, int* sign = nullptr);
SaddleConnection apply_monodromy(const FlatSurface& s, const Monodromy& m, const SaddleConnection& sc);
Monodromy compose(const FlatSurface& s, const Monodromy& outer, const Monodromy& inner);
Monodromy inverse(const FlatSurface& s, const Monodromy& m);
Monodromy identity_monodromy(const FlatSurface& s);
ImmersedRectangle apply_monodromy(const FlatSurface& s, const Monodromy& m, const ImmersedRectangle& r);

bool crosses(const FlatSurface& s, const SaddleConnection& a, const SaddleConnection& b);
// Whether a meets the closed geodesic through p with holonomy hol.
bool crosses_curve(const FlatSurface& s, const SaddleConnection& a, const SurfacePoint& p, const Vec2& hol);

struct CurveCrossing {
  Scalar t;  // curve parameter in [0, 1), 0 at p
  Scalar u;  // connection parameter in (0, 1)
  Vec2 dir;  // connection holonomy in the curve's developing plane
};

// Transverse meetings of a with that closed geodesic, ordered by t.
std::vector<CurveCrossing> curve_crossings(const FlatSurface& s, const SaddleConnection& a, const SurfacePoint& p,
                                           const Vec2& hol);

std::string to_string(const Vec2& v);
std::string to_string(const ConnectionKey& k);

}  // namespace veering
