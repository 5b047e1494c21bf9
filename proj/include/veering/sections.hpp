#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "veering/veering.hpp"

namespace veering {

class SectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HalfEdge {
  int edge = 0;
  bool forward = true;
  friend bool operator==(const HalfEdge&, const HalfEdge&) = default;
};

// Boundary cycles of the complement of an edge set; each complementary
// region lies to the left of its cycles.
std::vector<std::vector<HalfEdge>> boundary_cycles(const FlatSurface& s, const std::vector<TauEdge>& edges);

struct SectionFace {
  std::array<HalfEdge, 3> sides;
  FaceKey key;
};

// Ideal triangulation by tau-edges; edges are kept sorted by key.
class Section {
 public:
  Section() = default;
  // Throws SectionError unless the edges triangulate the surface.
  static Section from_edges(const FlatSurface& s, std::vector<TauEdge> edges);

  const std::vector<TauEdge>& edges() const { return edges_; }
  const std::vector<SectionFace>& faces() const { return faces_; }
  // faces left of the forward and of the reverse half-edge
  const std::array<int, 2>& edge_faces(int i) const { return edge_faces_[i]; }
  int find(const ConnectionKey& k) const;
  bool contains(const ConnectionKey& k) const { return find(k) >= 0; }
  std::vector<ConnectionKey> keys() const;
  int widest(int face) const;
  int tallest(int face) const;

  friend bool operator==(const Section& a, const Section& b) { return a.keys() == b.keys(); }

 private:
  std::vector<TauEdge> edges_;
  std::vector<SectionFace> faces_;
  std::vector<std::array<int, 2>> edge_faces_;
};

// Validity problems of an edge family as a section; empty when valid.
std::vector<std::string> section_violations(const FlatSurface& s, const std::vector<TauEdge>& edges);

enum class FlipDir { up, down };

struct FlipMove {
  TauEdge old_edge, new_edge;
  TetraKey tet;
  FlipDir dir = FlipDir::up;
};

std::vector<int> flippable_edges(const Section& t, FlipDir dir);
std::pair<Section, FlipMove> flip(const FlatSurface& s, const Section& t, int edge, FlipDir dir);

Section extend_to_section(const FlatSurface& s, std::vector<TauEdge> edges);

// Sections containing K that admit no flip in dir outside K.
Section extreme_section(const FlatSurface& s, const Section& seed, const std::vector<ConnectionKey>& k, FlipDir dir,
                        int budget = 10000);
std::pair<Section, Section> top_bottom_sections(const FlatSurface& s, const std::vector<ConnectionKey>& k,
                                                const Section& seed, int budget = 10000);

enum class FlipPolicy { widest_crossing, fifo, last, random };

struct Pocket {
  std::vector<int> faces;          // faces of the first section over the base
  std::vector<TauEdge> bottom;     // edges of the lower section over the base
  std::vector<TauEdge> top;        // edges of the upper section over the base
  int orientation = 0;             // +1 if the second section lies above
  int tet_count = 0;
  std::vector<TetraKey> tets;      // tetrahedra passed, in flip order
  std::vector<Section> steps;      // lower section after each flip, first is the start
};

std::vector<Pocket> pockets_between(const FlatSurface& s, const Section& a, const Section& b,
                                    FlipPolicy policy = FlipPolicy::widest_crossing, unsigned seed = 1,
                                    int budget = 100000);

struct SweepResult {
  std::vector<FlipMove> moves;
  std::vector<Section> sections;  // sections[0] is the start
};

// Maximal flip sequence in dir until stop(section, moves so far) holds.
SweepResult sweep(const FlatSurface& s, const Section& t, FlipDir dir,
                  const std::function<bool(const Section&, size_t)>& stop, FlipPolicy policy = FlipPolicy::fifo,
                  unsigned seed = 1, size_t budget = 100000);

Section apply_monodromy(const FlatSurface& s, const Monodromy& m, const Section& t);

// |tau| of the mapping torus: signed tetrahedron count between t and m(t).
int period_tet_count(const FlatSurface& s, const Section& t, const Monodromy& m);

// A section containing the first tau-edge found by a growing enumeration.
Section initial_section(const FlatSurface& s);

}  // namespace veering
