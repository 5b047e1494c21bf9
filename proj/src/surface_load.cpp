#include <atomic>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "veering/surface.hpp"

namespace veering {

using nlohmann::json;

namespace {

constexpr const char* kSchema = "veering-surface/1";

mpz_class parse_int(const json& j) {
  if (j.is_number_integer()) return mpz_class(j.get<long>());
  if (j.is_string()) {
    mpz_class z;
    if (z.set_str(j.get<std::string>(), 10) != 0) throw SurfaceError("parse error: bad integer");
    return z;
  }
  throw SurfaceError("parse error: expected integer");
}

mpq_class parse_rat(const json& j) {
  if (j.is_number_integer()) return mpq_class(j.get<long>());
  if (j.is_string()) {
    mpq_class q;
    if (q.set_str(j.get<std::string>(), 10) != 0) throw SurfaceError("parse error: bad rational");
    q.canonicalize();
    return q;
  }
  throw SurfaceError("parse error: expected rational");
}

Scalar parse_sc(const json& j, const FieldPtr& f) {
  if (!j.is_string()) throw SurfaceError("parse error: scalar must be a string like \"[1/2, 3]\"");
  try {
    return parse_scalar(j.get<std::string>(), f);
  } catch (const FieldError& e) {
    throw SurfaceError(std::string("parse error: ") + e.what());
  }
}

Vec2 parse_vec(const json& j, const FieldPtr& f) {
  if (!j.is_array() || j.size() != 2) throw SurfaceError("parse error: expected a coordinate pair");
  return {parse_sc(j[0], f), parse_sc(j[1], f)};
}

json vec_json(const Vec2& v) { return json::array({v.x.to_string(), v.y.to_string()}); }

PointRef parse_point_ref(const json& j, const FieldPtr& f) {
  return {j.at("polygon").get<int>(), parse_vec(j.at("point"), f)};
}

json point_ref_json(const PointRef& r) { return {{"polygon", r.polygon}, {"point", vec_json(r.point)}}; }

ConnectionRef parse_conn_ref(const json& j, const FieldPtr& f) {
  return {j.at("polygon").get<int>(), j.at("vertex").get<int>(), parse_vec(j.at("holonomy"), f)};
}

json conn_ref_json(const ConnectionRef& r) {
  return {{"polygon", r.polygon}, {"vertex", r.vertex}, {"holonomy", vec_json(r.holonomy)}};
}

}  // namespace

SurfaceDocument parse_surface_document(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw SurfaceError(std::string("parse error: ") + e.what());
  }
  try {
    SurfaceDocument doc;
    if (j.contains("schema") && j["schema"] != kSchema) throw SurfaceError("parse error: unknown schema");
    doc.name = j.value("name", "");
    const json& fj = j.at("field");
    std::vector<mpz_class> poly;
    for (const auto& c : fj.at("min_poly")) poly.push_back(parse_int(c));
    const json& iv = fj.at("interval");
    try {
      doc.field = make_field(poly, parse_rat(iv.at(0)), parse_rat(iv.at(1)));
    } catch (const FieldError& e) {
      throw SurfaceError(std::string("parse error: ") + e.what());
    }
    for (const auto& pj : j.at("polygons")) {
      PolygonSpec p;
      for (const auto& vj : pj.at("vertices")) p.vertices.push_back(parse_vec(vj, doc.field));
      doc.polygons.push_back(std::move(p));
    }
    for (const auto& gj : j.at("gluings")) {
      GluingSpec g;
      g.poly_a = gj.at("a").at(0).get<int>();
      g.edge_a = gj.at("a").at(1).get<int>();
      g.poly_b = gj.at("b").at(0).get<int>();
      g.edge_b = gj.at("b").at(1).get<int>();
      std::string kind = gj.value("kind", "translation");
      if (kind == "translation") g.kind = GlueKind::translation;
      else if (kind == "half-turn") g.kind = GlueKind::half_turn;
      else throw SurfaceError("parse error: unknown gluing kind " + kind);
      doc.gluings.push_back(g);
    }
    doc.fully_punctured = j.value("fully_punctured", true);
    if (j.contains("unpunctured"))
      for (const auto& u : j["unpunctured"]) doc.unpunctured.emplace_back(u.at(0).get<int>(), u.at(1).get<int>());
    if (j.contains("monodromy")) {
      const json& mj = j["monodromy"];
      MonodromySpec m;
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) m.matrix[r][c] = parse_sc(mj.at("matrix").at(r).at(c), doc.field);
      m.base = parse_point_ref(mj.at("base"), doc.field);
      m.image = parse_point_ref(mj.at("image"), doc.field);
      m.image_sign = mj.at("image").value("sign", 1);
      m.word = mj.value("word", "");
      doc.monodromy = std::move(m);
    }
    if (j.contains("subsurfaces")) {
      for (const auto& sj : j["subsurfaces"]) {
        SubsurfaceSpecDoc s;
        s.name = sj.at("name").get<std::string>();
        s.kind = sj.at("kind").get<std::string>();
        s.euler = sj.value("euler", 0);
        if (sj.contains("core")) {
          s.core_point = parse_point_ref(sj["core"], doc.field);
          s.core_holonomy = parse_vec(sj["core"].at("holonomy"), doc.field);
        }
        if (sj.contains("cycles"))
          for (const auto& cj : sj["cycles"]) {
            std::vector<ConnectionRef> cyc;
            for (const auto& rj : cj) cyc.push_back(parse_conn_ref(rj, doc.field));
            s.cycles.push_back(std::move(cyc));
          }
        doc.subsurfaces.push_back(std::move(s));
      }
    }
    return doc;
  } catch (const json::exception& e) {
    throw SurfaceError(std::string("parse error: ") + e.what());
  }
}

std::string serialize_surface_document(const SurfaceDocument& doc) {
  json j;
  j["schema"] = kSchema;
  j["name"] = doc.name;
  json poly = json::array();
  for (const auto& c : doc.field->min_poly()) poly.push_back(c.get_str());
  j["field"] = {{"min_poly", poly},
                {"interval", {doc.field->interval_lo().get_str(), doc.field->interval_hi().get_str()}}};
  json polys = json::array();
  for (const auto& p : doc.polygons) {
    json vs = json::array();
    for (const auto& v : p.vertices) vs.push_back(vec_json(v));
    polys.push_back({{"vertices", vs}});
  }
  j["polygons"] = polys;
  json glues = json::array();
  for (const auto& g : doc.gluings)
    glues.push_back({{"a", {g.poly_a, g.edge_a}},
                     {"b", {g.poly_b, g.edge_b}},
                     {"kind", g.kind == GlueKind::translation ? "translation" : "half-turn"}});
  j["gluings"] = glues;
  j["fully_punctured"] = doc.fully_punctured;
  if (!doc.unpunctured.empty()) {
    json u = json::array();
    for (auto [p, v] : doc.unpunctured) u.push_back({p, v});
    j["unpunctured"] = u;
  }
  if (doc.monodromy) {
    const auto& m = *doc.monodromy;
    json mat = json::array();
    for (int r = 0; r < 2; ++r) mat.push_back({m.matrix[r][0].to_string(), m.matrix[r][1].to_string()});
    json image = point_ref_json(m.image);
    image["sign"] = m.image_sign;
    j["monodromy"] = {{"matrix", mat}, {"base", point_ref_json(m.base)}, {"image", image}, {"word", m.word}};
  }
  if (!doc.subsurfaces.empty()) {
    json subs = json::array();
    for (const auto& s : doc.subsurfaces) {
      json sj = {{"name", s.name}, {"kind", s.kind}, {"euler", s.euler}};
      if (s.core_point) {
        sj["core"] = point_ref_json(*s.core_point);
        sj["core"]["holonomy"] = vec_json(*s.core_holonomy);
      }
      if (!s.cycles.empty()) {
        json cycles = json::array();
        for (const auto& c : s.cycles) {
          json cj = json::array();
          for (const auto& r : c) cj.push_back(conn_ref_json(r));
          cycles.push_back(cj);
        }
        sj["cycles"] = cycles;
      }
      subs.push_back(sj);
    }
    j["subsurfaces"] = subs;
  }
  return j.dump(2) + "\n";
}

std::string to_string(const Vec2& v) { return "(" + v.x.to_string() + ", " + v.y.to_string() + ")"; }
std::string to_string(const ConnectionKey& k) {
  return "t" + std::to_string(k.tri) + "c" + std::to_string(k.corner) + to_string(k.hol);
}

namespace {

bool in_closed_triangle(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c) {
  return orient(a, b, p) >= 0 && orient(b, c, p) >= 0 && orient(c, a, p) >= 0;
}

// Deterministic ear clipping: strictly convex ears, no other vertex in the
// closed ear.
std::vector<std::array<int, 3>> ear_clip(const std::vector<Vec2>& p) {
  std::vector<int> rem(p.size());
  for (size_t i = 0; i < p.size(); ++i) rem[i] = static_cast<int>(i);
  std::vector<std::array<int, 3>> out;
  while (rem.size() > 3) {
    bool clipped = false;
    for (size_t k = 0; k < rem.size(); ++k) {
      int a = rem[(k + rem.size() - 1) % rem.size()], b = rem[k], c = rem[(k + 1) % rem.size()];
      if (orient(p[a], p[b], p[c]) <= 0) continue;
      bool ok = true;
      for (int o : rem) {
        if (o == a || o == b || o == c) continue;
        if (in_closed_triangle(p[o], p[a], p[b], p[c])) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      out.push_back({a, b, c});
      rem.erase(rem.begin() + static_cast<long>(k));
      clipped = true;
      break;
    }
    if (!clipped) throw SurfaceError("polygon is not simple or not counterclockwise");
  }
  if (orient(p[rem[0]], p[rem[1]], p[rem[2]]) <= 0) throw SurfaceError("degenerate polygon");
  out.push_back({rem[0], rem[1], rem[2]});
  return out;
}

}  // namespace

std::shared_ptr<const FlatSurface> FlatSurface::load(const SurfaceDocument& doc) {
  auto s = std::shared_ptr<FlatSurface>(new FlatSurface());
  s->doc_ = doc;
  s->build();
  return s;
}

std::shared_ptr<const FlatSurface> FlatSurface::load_json(const std::string& text) {
  return load(parse_surface_document(text));
}

SurfacePtr load_surface(const std::string& json_text) { return FlatSurface::load_json(json_text); }

SurfacePtr load_surface_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SurfaceError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_surface(ss.str());
}

Vec2 FlatSurface::centroid(int tri) const {
  const auto& t = tris_[tri];
  return Scalar::rational(1, 3) * (t.v[0] + t.v[1] + t.v[2]);
}

std::pair<int, int> FlatSurface::next_sector(int tri, int corner) const {
  const auto& t = tris_[tri];
  int e = (corner + 2) % 3;
  return {t.nbr[e], t.nbr_edge[e]};
}

void FlatSurface::build() {
  static std::atomic<uint64_t> next_id{1};
  id_ = next_id++;
  const auto& polys = doc_.polygons;
  if (polys.empty()) throw SurfaceError("surface has no polygons");
  // (polygon, edge) -> (triangle, side)
  std::map<std::pair<int, int>, std::pair<int, int>> boundary_side;
  std::map<std::tuple<int, int, int>, std::pair<int, int>> diagonal_side;
  for (size_t pi = 0; pi < polys.size(); ++pi) {
    const auto& pv = polys[pi].vertices;
    if (pv.size() < 3) throw SurfaceError("polygon with fewer than three vertices");
    const int n = static_cast<int>(pv.size());
    for (const auto& ear : ear_clip(pv)) {
      Triangle t;
      t.polygon = static_cast<int>(pi);
      t.poly_vertex = ear;
      for (int i = 0; i < 3; ++i) t.v[i] = pv[ear[i]];
      t.nbr = {-1, -1, -1};
      const int id = static_cast<int>(tris_.size());
      for (int i = 0; i < 3; ++i) {
        int a = ear[i], b = ear[(i + 1) % 3];
        if (b == (a + 1) % n) {
          boundary_side[{static_cast<int>(pi), a}] = {id, i};
        } else {
          auto key = std::make_tuple(static_cast<int>(pi), std::min(a, b), std::max(a, b));
          auto it = diagonal_side.find(key);
          if (it == diagonal_side.end()) {
            diagonal_side[key] = {id, i};
          } else {
            auto [ot, oe] = it->second;
            t.nbr[i] = ot;
            t.nbr_edge[i] = oe;
            t.glue[i] = Transform{};
            tris_[ot].nbr[oe] = id;
            tris_[ot].nbr_edge[oe] = i;
            tris_[ot].glue[oe] = Transform{};
          }
        }
      }
      tris_.push_back(std::move(t));
    }
  }

  std::set<std::pair<int, int>> used;
  for (const auto& g : doc_.gluings) {
    auto sa = std::make_pair(g.poly_a, g.edge_a), sb = std::make_pair(g.poly_b, g.edge_b);
    if (!boundary_side.count(sa) || !boundary_side.count(sb))
      throw SurfaceError("gluing inconsistency: gluing names a missing edge");
    if (sa == sb || used.count(sa) || used.count(sb))
      throw SurfaceError("gluing inconsistency: edge glued more than once");
    used.insert(sa);
    used.insert(sb);
    const auto& pa = polys[g.poly_a].vertices;
    const auto& pb = polys[g.poly_b].vertices;
    const Vec2& a0 = pa[g.edge_a];
    const Vec2& a1 = pa[(g.edge_a + 1) % pa.size()];
    const Vec2& b0 = pb[g.edge_b];
    const Vec2& b1 = pb[(g.edge_b + 1) % pb.size()];
    // B chart -> A chart, sending b0 -> a1 and b1 -> a0
    Transform t;
    if (g.kind == GlueKind::translation) {
      t = {1, a1 - b0};
    } else {
      t = {-1, a1 + b0};
      half_translation_ = true;
    }
    if (t.apply(b1) != a0) throw SurfaceError("gluing inconsistency: holonomy mismatch");
    auto [ta, ea] = boundary_side[sa];
    auto [tb, eb] = boundary_side[sb];
    tris_[ta].nbr[ea] = tb;
    tris_[ta].nbr_edge[ea] = eb;
    tris_[ta].glue[ea] = t;
    tris_[tb].nbr[eb] = ta;
    tris_[tb].nbr_edge[eb] = ea;
    tris_[tb].glue[eb] = t.inverse();
  }
  for (const auto& [side, te] : boundary_side)
    if (!used.count(side)) throw SurfaceError("gluing inconsistency: unglued edge");

  num_edges_ = 0;
  for (auto& t : tris_) t.edge_id = {-1, -1, -1};
  for (size_t ti = 0; ti < tris_.size(); ++ti)
    for (int i = 0; i < 3; ++i)
      if (tris_[ti].edge_id[i] < 0) {
        tris_[ti].edge_id[i] = num_edges_;
        tris_[tris_[ti].nbr[i]].edge_id[tris_[ti].nbr_edge[i]] = num_edges_;
        ++num_edges_;
      }

  build_cones();
  const int v = static_cast<int>(cones_.size()), e = num_edges_, f = static_cast<int>(tris_.size());
  const int chi_closed = v - e + f;
  int punctures = 0, excess = 0;
  for (const auto& c : cones_) {
    punctures += c.puncture ? 1 : 0;
    excess += c.angle_pi - 2;
  }
  if (excess != -2 * chi_closed) throw SurfaceError("angle-sum violation");
  euler_ = chi_closed - punctures;
  if (doc_.monodromy) build_monodromy();
}

void FlatSurface::build_cones() {
  sector_pos_.assign(tris_.size(), {-1, -1, -1});
  for (size_t ti = 0; ti < tris_.size(); ++ti) {
    for (int c = 0; c < 3; ++c) {
      if (sector_pos_[ti][c] >= 0) continue;
      ConePoint cp;
      cp.id = static_cast<int>(cones_.size());
      cp.polygon = tris_[ti].polygon;
      cp.vertex = tris_[ti].poly_vertex[c];
      int t = static_cast<int>(ti), k = c;
      Transform g;  // current chart -> chart of the first sector
      const Vec2 u0 = tris_[ti].v[(c + 1) % 3] - tris_[ti].v[c];
      const Vec2 neg = -u0;
      int half_turns = 0;
      auto passes = [](const Vec2& lo, const Vec2& hi, const Vec2& r) {
        if (cross(lo, r).sign() <= 0) return false;
        int s = cross(r, hi).sign();
        return s > 0 || (s == 0 && dot(r, hi).sign() > 0);
      };
      do {
        if (sector_pos_[t][k] >= 0) throw SurfaceError("inconsistent vertex orbit");
        sector_pos_[t][k] = static_cast<int>(cp.sectors.size());
        cp.sectors.emplace_back(t, k);
        tris_[t].cone[k] = cp.id;
        const auto& tr = tris_[t];
        Vec2 lo = g.apply_linear(tr.v[(k + 1) % 3] - tr.v[k]);
        Vec2 hi = g.apply_linear(tr.v[(k + 2) % 3] - tr.v[k]);
        if (passes(lo, hi, u0)) ++half_turns;
        if (passes(lo, hi, neg)) ++half_turns;
        int e = (k + 2) % 3;
        g = g.compose(tr.glue[e]);
        int nt = tr.nbr[e], nk = tr.nbr_edge[e];
        t = nt;
        k = nk;
        if (cp.sectors.size() > 4 * tris_.size() + 4) throw SurfaceError("vertex orbit does not close");
      } while (!(t == static_cast<int>(ti) && k == c));
      if (g.sign * (half_turns % 2 == 0 ? 1 : -1) != 1) throw SurfaceError("angle-sum violation");
      cp.angle_pi = half_turns;
      cp.puncture = true;
      cones_.push_back(std::move(cp));
    }
  }
  for (auto [p, v] : doc_.unpunctured) {
    if (doc_.fully_punctured)
      throw SurfaceError("non-fully-punctured cone point in fully-punctured mode");
    for (auto& c : cones_)
      for (auto [t, k] : c.sectors)
        if (tris_[t].polygon == p && tris_[t].poly_vertex[k] == v) c.puncture = false;
  }
}

SurfacePoint FlatSurface::locate(const PointRef& ref) const {
  for (size_t ti = 0; ti < tris_.size(); ++ti) {
    const auto& t = tris_[ti];
    if (t.polygon != ref.polygon) continue;
    if (in_closed_triangle(ref.point, t.v[0], t.v[1], t.v[2])) return {static_cast<int>(ti), ref.point};
  }
  throw SurfaceError("point is outside its polygon");
}

ConnectionKey FlatSurface::key_from_ref(const ConnectionRef& ref) const {
  for (size_t ti = 0; ti < tris_.size(); ++ti) {
    const auto& t = tris_[ti];
    if (t.polygon != ref.polygon) continue;
    for (int c = 0; c < 3; ++c)
      if (t.poly_vertex[c] == ref.vertex && sector_contains(static_cast<int>(ti), c, ref.holonomy))
        return {static_cast<int>(ti), c, ref.holonomy};
  }
  throw SurfaceError("connection reference does not start inside its polygon corner");
}

}  // namespace veering
