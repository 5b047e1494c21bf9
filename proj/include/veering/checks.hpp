#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "veering/projections.hpp"

namespace veering {

// One line of a verdict table.
struct CheckRow {
  std::string suite, name;
  long samples = 0, violations = 0;
  bool unsupported = false;
  std::string note;  // first violation, margin or reason

  bool passed() const { return unsupported || violations == 0; }
};

using Rng = std::mt19937_64;

struct CheckConfig {
  uint64_t seed = 1;
  Scalar bound{4};         // enumeration box of sampled saddle connections
  int pairs = 200;         // cap on sampled pairs per pair check
  int subsets = 60;        // random edge subsets extended to sections
  int sweep_steps = 8;     // sections taken from the upward sweep
  int section_pairs = 10;  // section pairs compared across flip orders
  int embed_k = 3;
  int ladder_edges = 24;
};

// Uniform index below n from the run's generator, identical on every platform.
size_t pick(Rng& rng, size_t n);

// Pool of sampled objects shared by the checks of one surface.
struct SamplePool {
  std::vector<SaddleConnection> connections;
  std::vector<TauEdge> tau_edges;
  std::vector<Section> sections;  // sweeps up, then down, from the initial section
  std::vector<ClosedCurve> curves;  // cylinder cores parallel to closed connections
};

SamplePool make_pool(const FlatSurface& s, const CheckConfig& cfg);

// Hulls of disjoint connections never cross.
CheckRow check_rect_hull_disjoint(const FlatSurface& s, const SamplePool& p, int pairs, Rng& rng);
// P(sigma) closes up and is an embedded polygon, on both sides.
CheckRow check_polygons(const FlatSurface& s, const SamplePool& p, int samples, Rng& rng);
// Polygons on facing sides of two connections joined by a vertical leaf
// have disjoint interiors; pairs come from tetrahedron rectangles.
CheckRow check_polygon_disjoint(const FlatSurface& s, const SamplePool& p, int pairs, Rng& rng);
CheckRow check_retraction_identity(const FlatSurface& s, const SamplePool& p);
// Images of adjacent arcs have pairwise disjoint interiors.
CheckRow check_retraction_lipschitz(const FlatSurface& s, const SamplePool& p, int pairs, Rng& rng);

// Random disjoint tau-edge subsets of size 0..3 extend to valid sections.
CheckRow check_section_extension(const FlatSurface& s, const SamplePool& p, int subsets, Rng& rng);
CheckRow check_sweep_validity(const FlatSurface& s, const SamplePool& p);
// Pocket tetrahedron counts agree across flip orders.
CheckRow check_flip_order(const FlatSurface& s, const SamplePool& p, int pairs, Rng& rng);
CheckRow check_period_independence(const FlatSurface& s, const SamplePool& p);

std::vector<CheckRow> check_projection_rows(const FlatSurface& s, const CheckConfig& cfg);
// BFS in the tau-edge arc graph against Farey distance on a torus ladder.
CheckRow check_arc_graph(const FlatSurface& s, int edges);
CheckRow check_bound_selftest();

std::vector<CheckRow> hull_suite(const FlatSurface& s, const SamplePool& p, const CheckConfig& cfg, Rng& rng);
std::vector<CheckRow> section_suite(const FlatSurface& s, const SamplePool& p, const CheckConfig& cfg, Rng& rng);
std::vector<CheckRow> theorem_suite(const FlatSurface& s, const CheckConfig& cfg);

}  // namespace veering
