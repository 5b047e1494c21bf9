#pragma once

#include <string>

#include "veering/checks.hpp"

namespace veering::test {

inline std::string data(const std::string& name) { return std::string(VEERING_DATA_DIR) + "/" + name; }

inline SurfacePtr golden() { return load_surface_file(data("golden_torus.json")); }
inline SurfacePtr square() { return load_surface_file(data("square_torus.json")); }
inline SurfacePtr pillowcase() { return load_surface_file(data("golden_pillowcase.json")); }
inline SurfacePtr bundle(const std::string& w) { return FlatSurface::load(punctured_torus_bundle(w)); }

inline FieldPtr golden_field() { return make_field({-1, -1, 1}, 1, 2); }

inline Vec2 vec(long x, long y) { return {Scalar(x), Scalar(y)}; }

}  // namespace veering::test
