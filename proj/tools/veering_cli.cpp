// Batch driver: one command per invocation, line-delimited records on stdout.
#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "veering/checks.hpp"

using namespace veering;
using Json = nlohmann::ordered_json;

namespace {

constexpr const char* kSchema = "veering-cli/1";

enum class Format { text, structured };

struct RunConfig {
  std::string command;
  std::string input;  // surface file
  std::string word;   // punctured-torus bundle instead of a file
  std::string bx = "4", by = "4";
  int budget = 100000;
  int k = 3;
  Format format = Format::text;
  uint64_t seed = 1;
};

// Bad invocation or unreadable input: exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Emitter {
 public:
  explicit Emitter(Format f) : f_(f) {}

  void operator()(const std::string& record, Json body) {
    Json line;
    line["schema"] = kSchema;
    line["record"] = record;
    for (auto& [k, v] : body.items()) line[k] = v;
    if (f_ == Format::structured) {
      std::cout << line.dump() << '\n';
      return;
    }
    std::cout << record;
    for (auto& [k, v] : body.items()) std::cout << ' ' << k << '=' << (v.is_string() ? v.get<std::string>() : v.dump());
    std::cout << '\n';
  }

 private:
  Format f_;
};

Json vec_json(const Vec2& v) { return Json::array({v.x.to_string(), v.y.to_string()}); }

Json key_json(const ConnectionKey& k) { return {{"tri", k.tri}, {"corner", k.corner}, {"hol", vec_json(k.hol)}}; }

Json edge_json(const TauEdge& e) {
  return {{"key", to_string(e.key())}, {"start", e.sc.start}, {"end", e.sc.end}, {"hol", vec_json(e.sc.hol)}};
}

Json conn_json(const SaddleConnection& sc) {
  return {{"key", to_string(sc.canonical())}, {"start", sc.start}, {"end", sc.end}, {"hol", vec_json(sc.hol)}};
}

Json report_json(const ProjectionReport& r) {
  return {{"distance", r.distance}, {"lo", r.lo}, {"hi", r.hi}, {"method", r.method}};
}

SurfacePtr load(const RunConfig& cfg) {
  try {
    if (!cfg.word.empty()) return FlatSurface::load(punctured_torus_bundle(cfg.word));
    if (cfg.input.empty()) throw InputError("no surface: pass --surface PATH or --word W");
    return load_surface_file(cfg.input);
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(std::string("parse error: ") + e.what());
  }
}

Scalar bound(const FlatSurface& s, const std::string& text) {
  try {
    Scalar b = parse_scalar(text.front() == '[' ? text : "[" + text + "]", s.field());
    if (b.sign() <= 0) throw InputError("bounds must be positive");
    return b;
  } catch (const FieldError& e) {
    throw InputError(e.what());
  }
}

Vec2 parse_vec(const FlatSurface& s, const Json& j) {
  if (!j.is_array() || j.size() != 2) throw InputError("expected a pair of scalars");
  return {parse_scalar(j[0].get<std::string>(), s.field()), parse_scalar(j[1].get<std::string>(), s.field())};
}

std::vector<TauEdge> tau_edges(const FlatSurface& s, const RunConfig& cfg) {
  return enumerate_tau_edges(s, bound(s, cfg.bx), bound(s, cfg.by));
}

const TauEdge& tau_at(const std::vector<TauEdge>& es, long i) {
  if (i < 0 || static_cast<size_t>(i) >= es.size())
    throw InputError("tau-edge index " + std::to_string(i) + " outside the enumeration of " +
                     std::to_string(es.size()));
  return es[static_cast<size_t>(i)];
}

// Arc spec: JSON text or a file holding it. Forms:
//   {"tau": i}   {"connection": {"polygon", "vertex", "holonomy"}}
//   {"path": [connection, ...]}   {"curve": {"polygon", "point", "holonomy"}}
ArcOrCurve parse_arc(const FlatSurface& s, const RunConfig& cfg, const std::string& spec) {
  std::string text = spec;
  if (!spec.empty() && spec.front() != '{') {
    std::ifstream in(spec);
    if (!in) throw InputError("cannot read arc spec " + spec);
    std::ostringstream os;
    os << in.rdbuf();
    text = os.str();
  }
  try {
    const Json j = Json::parse(text);
    auto connection = [&](const Json& c) {
      ConnectionRef ref{c.at("polygon").get<int>(), c.at("vertex").get<int>(), parse_vec(s, c.at("holonomy"))};
      return s.connection_or_throw(s.key_from_ref(ref));
    };
    if (j.contains("tau")) return ArcPath{{tau_at(tau_edges(s, cfg), j["tau"].get<long>()).sc}};
    if (j.contains("connection")) return ArcPath{{connection(j["connection"])}};
    if (j.contains("path")) {
      ArcPath p;
      for (const auto& c : j["path"]) p.pieces.push_back(connection(c));
      return p;
    }
    if (j.contains("curve")) {
      const Json& c = j["curve"];
      return ClosedCurve{s.locate(PointRef{c.at("polygon").get<int>(), parse_vec(s, c.at("point"))}),
                         parse_vec(s, c.at("holonomy"))};
    }
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(std::string("bad arc spec: ") + e.what());
  }
  throw InputError("arc spec needs one of tau, connection, path, curve");
}

const SubsurfaceSpec& subsurface(const std::vector<SubsurfaceSpec>& ys, const std::string& name) {
  try {
    return find_subsurface(ys, name);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
}

void emit_section(Emitter& out, const FlatSurface& s, const Section& t) {
  for (size_t i = 0; i < t.edges().size(); ++i) {
    Json e = edge_json(t.edges()[i]);
    e["index"] = i;
    out("section-edge", e);
  }
  auto v = section_violations(s, t.edges());
  out("section", {{"edges", t.edges().size()}, {"faces", t.faces().size()}, {"valid", v.empty()}});
}

Json section_file(const Section& t) {
  Json edges = Json::array();
  for (const auto& e : t.edges()) edges.push_back(key_json(e.key()));
  return {{"schema", "veering-section/1"}, {"edges", edges}};
}

// Edges named by a section file; unresolvable keys become violations.
std::vector<TauEdge> read_section_file(const FlatSurface& s, const std::string& path, std::vector<std::string>& bad) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read section file " + path);
  std::vector<TauEdge> edges;
  try {
    const Json j = Json::parse(in);
    for (const auto& k : j.at("edges")) {
      ConnectionKey key{k.at("tri").get<int>(), k.at("corner").get<int>(), parse_vec(s, k.at("hol"))};
      if (key.tri < 0 || static_cast<size_t>(key.tri) >= s.triangles().size() || key.corner < 0 || key.corner > 2) {
        bad.push_back("edge " + to_string(key) + " names no corner");
        continue;
      }
      auto sc = s.connection(key);
      auto e = sc ? is_tau_edge(s, *sc) : std::nullopt;
      if (e)
        edges.push_back(*e);
      else
        bad.push_back("edge " + to_string(key) + (sc ? " is not a tau-edge" : " is not a saddle connection"));
    }
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(std::string("bad section file: ") + e.what());
  }
  return edges;
}

int cmd_info(const RunConfig& cfg, Emitter& out) {
  SurfacePtr s = load(cfg);
  int punctures = 0;
  for (const auto& c : s->cone_points()) {
    punctures += c.puncture;
    out("cone", {{"id", c.id}, {"angle_pi", c.angle_pi}, {"puncture", c.puncture}});
  }
  const auto ys = subsurfaces(*s);
  Json names = Json::array();
  for (const auto& y : ys) names.push_back(y.name);
  out("surface", {{"name", s->document().name},
                  {"triangles", s->triangles().size()},
                  {"cone_points", s->cone_points().size()},
                  {"punctures", punctures},
                  {"euler_char", s->euler_char()},
                  {"half_translation", s->half_translation()},
                  {"monodromy", s->monodromy() ? s->monodromy()->word : ""},
                  {"subsurfaces", names}});
  auto axis = find_axis_connection(*s, bound(*s, cfg.bx), bound(*s, cfg.by));
  Json h = {{"bound_x", cfg.bx}, {"bound_y", cfg.by}, {"holds", !axis}};
  if (axis) h["violation"] = std::string(axis->hol.y.sign() == 0 ? "horizontal" : "vertical") + " saddle connection " +
                             to_string(axis->hol);
  out("hypothesis", h);
  return axis ? 1 : 0;
}

int cmd_tau_edges(const RunConfig& cfg, Emitter& out) {
  SurfacePtr s = load(cfg);
  const auto es = tau_edges(*s, cfg);
  for (size_t i = 0; i < es.size(); ++i) {
    Json e = edge_json(es[i]);
    e["index"] = i;
    e["width"] = es[i].rect.width().to_string();
    e["height"] = es[i].rect.height().to_string();
    out("tau-edge", e);
  }
  out("tau-edges", {{"count", es.size()}, {"bound_x", cfg.bx}, {"bound_y", cfg.by}});
  return 0;
}

int cmd_section(const RunConfig& cfg, Emitter& out, const std::string& mode, const std::vector<long>& picks,
                const std::string& save) {
  SurfacePtr s = load(cfg);
  Section t;
  if (mode == "init") {
    t = initial_section(*s);
  } else {
    const auto es = tau_edges(*s, cfg);
    std::vector<TauEdge> chosen;
    for (long i : picks) chosen.push_back(tau_at(es, i));
    try {
      t = extend_to_section(*s, chosen);
    } catch (const SectionError& e) {
      throw InputError(e.what());
    }
  }
  emit_section(out, *s, t);
  if (!save.empty()) {
    std::ofstream f(save);
    if (!f) throw InputError("cannot write " + save);
    f << section_file(t).dump(2) << '\n';
  }
  return section_violations(*s, t.edges()).empty() ? 0 : 1;
}

int cmd_sweep(const RunConfig& cfg, Emitter& out, const std::string& dir, int steps, bool period) {
  SurfacePtr s = load(cfg);
  const Section t0 = initial_section(*s);
  std::vector<FlipMove> moves;
  long signed_count = 0;
  if (period) {
    if (!s->monodromy()) throw InputError("--period needs a monodromy");
    for (const auto& p : pockets_between(*s, t0, apply_monodromy(*s, *s->monodromy(), t0),
                                         FlipPolicy::widest_crossing, 1, cfg.budget)) {
      signed_count += static_cast<long>(p.orientation) * p.tet_count;
      for (size_t i = 0; i < p.tets.size(); ++i) {
        Json m = {{"step", moves.size()}, {"tet_top", to_string(p.tets[i].top)},
                  {"tet_bottom", to_string(p.tets[i].bottom)}, {"orientation", p.orientation}};
        out("flip", m);
        moves.push_back({});
      }
    }
    out("sweep", {{"period", true}, {"flips", moves.size()}, {"tau", std::abs(signed_count)}, {"upward", signed_count > 0}});
    return 0;
  }
  const FlipDir d = dir == "down" ? FlipDir::down : FlipDir::up;
  const auto r = sweep(*s, t0, d, [&](const Section&, size_t n) { return n >= static_cast<size_t>(steps); },
                       FlipPolicy::fifo, static_cast<unsigned>(cfg.seed), static_cast<size_t>(cfg.budget));
  for (size_t i = 0; i < r.moves.size(); ++i)
    out("flip", {{"step", i}, {"old", to_string(r.moves[i].old_edge.key())}, {"new", to_string(r.moves[i].new_edge.key())},
                 {"tet_top", to_string(r.moves[i].tet.top)}, {"tet_bottom", to_string(r.moves[i].tet.bottom)}});
  long invalid = 0;
  for (const auto& t : r.sections) invalid += !section_violations(*s, t.edges()).empty();
  out("sweep", {{"period", false}, {"dir", dir}, {"flips", r.moves.size()}, {"invalid_sections", invalid}});
  return invalid ? 1 : 0;
}

int cmd_hull(const RunConfig& cfg, Emitter& out, const std::string& which, const std::string& spec, int side) {
  SurfacePtr s = load(cfg);
  const ArcOrCurve arc = parse_arc(*s, cfg, spec);
  if (which == "retract") {
    const auto r = retract_to_tau(*s, arc);
    for (const auto& e : r) out("retract-edge", edge_json(e));
    out("retract", {{"edges", r.size()}});
    return 0;
  }
  const auto* path = std::get_if<ArcPath>(&arc);
  if (!path) throw InputError(which + " takes a connection or path, not a curve");
  if (which == "rhull") {
    const auto r = rect_hull_edges(*s, path->pieces);
    for (const auto& e : r) out("rhull-edge", edge_json(e));
    out("rhull", {{"edges", r.size()}});
    return 0;
  }
  if (path->pieces.size() == 1) {
    const TriHullResult h = tri_hull(*s, path->pieces.front(), side);
    for (const auto& c : h.path) out("thull-edge", conn_json(c));
    Json poly = Json::array();
    for (const auto& p : h.polygon) poly.push_back(vec_json(p));
    const auto v = polygon_violations(*s, h);
    out("thull", {{"side", side}, {"edges", h.path.size()}, {"degenerate", h.degenerate()}, {"polygon", poly},
                  {"violations", v}});
    return v.empty() ? 0 : 1;
  }
  const auto r = thull_push(*s, path->pieces, side);
  for (const auto& c : r) out("thull-edge", conn_json(c));
  out("thull", {{"side", side}, {"edges", r.size()}});
  return 0;
}

int cmd_pocket(const RunConfig& cfg, Emitter& out, const std::string& name) {
  SurfacePtr s = load(cfg);
  const auto ys = subsurfaces(*s);
  const SubsurfaceSpec& y = subsurface(ys, name);
  if (!y.annular()) {
    out("pocket", {{"subsurface", name}, {"status", "unsupported"}, {"reason", "Y-pocket is built for annuli only"}});
    return 0;
  }
  const YPocket u = y_pocket(*s, y);
  for (const auto& e : u.boundary) out("tau-boundary", edge_json(e));
  out("y-pocket", {{"subsurface", name},
                   {"tets", u.pocket.tet_count},
                   {"bottom_to_lower", report_json(u.bottom_to_lower)},
                   {"top_to_upper", report_json(u.top_to_upper)}});
  const IsolatedPocketResult r = isolated_pocket(*s, u, y);
  Json body = {{"subsurface", name}, {"lambda_distance", report_json(r.lambda_distance)}, {"found", r.pocket.has_value()}};
  if (!r.pocket) {
    body["reason"] = r.reason;
    out("isolated-pocket", body);
    return 0;
  }
  const IsolatedPocket& v = *r.pocket;
  const MaximalCylinder cyl = maximal_cylinder(*s, *y.core);
  const auto bad = isolated_pocket_violations(*s, cyl, v);
  const auto emb = check_pocket_embedding(*s, v, *s->monodromy(), cfg.k);
  body["a"] = v.a_index;
  body["b"] = v.b_index;
  body["tets"] = v.tet_count();
  body["span"] = report_json(v.span);
  body["violations"] = bad;
  body["embedding_k"] = cfg.k;
  body["embedding_violations"] = emb.violations;
  out("isolated-pocket", body);
  return bad.empty() && emb.ok() ? 0 : 1;
}

int cmd_project(const RunConfig& cfg, Emitter& out, const std::string& name) {
  SurfacePtr s = load(cfg);
  const auto ys = subsurfaces(*s);
  const SubsurfaceSpec& y = subsurface(ys, name);
  if (!y.annular()) {
    out("projection", {{"subsurface", name}, {"status", "unsupported"}, {"reason", "distance is built for annuli"}});
    return 0;
  }
  const MaximalCylinder cyl = maximal_cylinder(*s, *y.core);
  const ProjectionReport d = annular_distance(cyl);
  Json body = {{"subsurface", name}, {"modulus", cyl.modulus().to_string()}, {"d_lambda", report_json(d)},
               {"twist", d.twist}};
  const Section t0 = initial_section(*s);
  if (auto lo = section_distance(*s, cyl, t0, vertical())) body["d_t0_lower"] = report_json(*lo);
  if (auto hi = section_distance(*s, cyl, t0, horizontal())) body["d_t0_upper"] = report_json(*hi);
  out("projection", body);
  if (!s->monodromy()) return 0;
  const int tau = period_tet_count(*s, t0, *s->monodromy());
  const BoundVerdict v = check_projection_bound(true, y.euler, d, tau);
  out("bound", {{"subsurface", name}, {"alpha", v.alpha}, {"beta", v.beta}, {"d_w", v.d_w}, {"tau", v.tau},
                {"margin", v.margin}, {"vacuous", v.vacuous}, {"holds", v.holds}});
  return v.holds ? 0 : 1;
}

int cmd_check(const RunConfig& cfg, Emitter& out, const std::string& suite, const std::string& section_path,
              CheckConfig cc) {
  SurfacePtr s = load(cfg);
  cc.seed = cfg.seed;
  cc.bound = bound(*s, cfg.bx);
  cc.embed_k = cfg.k;
  Rng rng(cc.seed);
  std::vector<CheckRow> rows;
  if (!section_path.empty()) {
    std::vector<std::string> bad;
    const auto edges = read_section_file(*s, section_path, bad);
    for (auto& v : section_violations(*s, edges)) bad.push_back(v);
    rows.push_back({"sections", "section-file", 1, static_cast<long>(bad.size()), false, bad.empty() ? "" : bad.front()});
  }
  const bool all = suite == "all";
  const bool theorems = suite == "theorems" || (all && !subsurfaces(*s).empty());
  if (all || suite != "theorems") {
    const SamplePool pool = make_pool(*s, cc);
    if (all || suite == "hulls")
      for (auto& r : hull_suite(*s, pool, cc, rng)) rows.push_back(r);
    if (all || suite == "sections")
      for (auto& r : section_suite(*s, pool, cc, rng)) rows.push_back(r);
  }
  if (theorems)
    for (auto& r : theorem_suite(*s, cc)) rows.push_back(r);
  long failed = 0, unsupported = 0;
  for (const auto& r : rows) {
    failed += !r.passed();
    unsupported += r.unsupported;
    out("check", {{"suite", r.suite},
                  {"name", r.name},
                  {"status", r.unsupported ? "unsupported" : r.passed() ? "pass" : "fail"},
                  {"samples", r.samples},
                  {"violations", r.violations},
                  {"note", r.note}});
  }
  out("summary", {{"surface", s->document().name}, {"suite", suite}, {"seed", cfg.seed}, {"rows", rows.size()},
                  {"failed", failed}, {"unsupported", unsupported}, {"theorems_run", theorems}});
  return failed ? 1 : 0;
}

// One fundamental slab: the tetrahedra between T0 and f(T0).
int cmd_build(const RunConfig& cfg, Emitter& out, const std::string& path) {
  SurfacePtr s = load(cfg);
  if (!s->monodromy()) throw InputError("build needs a monodromy");
  const Monodromy& f = *s->monodromy();
  const Section t0 = initial_section(*s);
  std::vector<Pocket> pockets;
  try {
    pockets = pockets_between(*s, t0, apply_monodromy(*s, f, t0), FlipPolicy::widest_crossing, 1, cfg.budget);
  } catch (const UnboundedError& e) {
    throw InputError(std::string("budget error: ") + e.what());
  }
  std::vector<Tetrahedron> tets;
  long tau = 0;
  for (const auto& p : pockets) {
    tau += static_cast<long>(p.orientation) * p.tet_count;
    for (size_t i = 0; i < p.tets.size(); ++i) {
      const Section& before = p.steps[i];
      const TetraKey& key = p.tets[i];
      std::optional<Tetrahedron> t;
      if (int e = before.find(key.bottom); e >= 0) t = tetrahedron_from_edge(*s, before.edges()[e], TetraMode::above);
      if ((!t || !(t->key() == key)) && before.find(key.top) >= 0)
        t = tetrahedron_from_edge(*s, before.edges()[before.find(key.top)], TetraMode::below);
      if (!t || !(t->key() == key)) throw SectionError("slab tetrahedron not rebuilt from its flip");
      tets.push_back(*t);
    }
  }
  // A top face meets the bottom face with the same key, or across the slab
  // with its image under the map carrying the top section to the bottom one.
  const Monodromy down = tau > 0 ? inverse(*s, f) : f;
  auto preimage = [&](const FaceKey& k) {
    std::array<ConnectionKey, 3> e;
    for (int i = 0; i < 3; ++i) e[i] = apply_monodromy(*s, down, s->connection_or_throw(k[i])).canonical();
    return make_face_key(e[0], e[1], e[2]);
  };
  std::map<FaceKey, std::pair<size_t, int>> bottoms;
  for (size_t i = 0; i < tets.size(); ++i)
    for (int j = 0; j < 2; ++j) bottoms.emplace(tets[i].bottom_faces[j], std::make_pair(i, j));
  Json gluings = Json::array();
  long unmatched = 0;
  for (size_t i = 0; i < tets.size(); ++i)
    for (int j = 0; j < 2; ++j) {
      const FaceKey& k = tets[i].top_faces[j];
      bool mono = false;
      auto it = bottoms.find(k);
      if (it == bottoms.end()) {
        mono = true;
        it = bottoms.find(preimage(k));
      }
      if (it == bottoms.end()) {
        ++unmatched;
        continue;
      }
      gluings.push_back({{"tet", i}, {"face", "top" + std::to_string(j)}, {"to_tet", it->second.first},
                         {"to_face", "bottom" + std::to_string(it->second.second)}, {"monodromy", mono}});
    }
  static const char* kCorner[] = {"bottom", "right", "top", "left"};
  Json tj = Json::array();
  for (size_t i = 0; i < tets.size(); ++i) {
    Json corners = Json::array();
    for (int c = 0; c < 4; ++c)
      corners.push_back({{"corner", kCorner[c]}, {"cone", tets[i].corners[c].cone}, {"pos", vec_json(tets[i].corners[c].pos)}});
    tj.push_back({{"id", i}, {"corners", corners}, {"top_edge", edge_json(tets[i].top_edge)},
                  {"bottom_edge", edge_json(tets[i].bottom_edge)}});
  }
  const bool upward = tau > 0;
  tau = std::abs(tau);
  Json doc = {{"schema", "veering-slab/1"}, {"surface", s->document().name}, {"word", f.word}, {"tau", tau},
              {"t0", section_file(t0)}, {"t0_is_bottom", upward}, {"tetrahedra", tj}, {"gluings", gluings}};
  if (!path.empty()) {
    std::ofstream file(path);
    if (!file) throw InputError("cannot write " + path);
    file << doc.dump(2) << '\n';
  }
  for (size_t i = 0; i < tets.size(); ++i)
    out("tetrahedron", {{"id", i}, {"top", to_string(tets[i].top_edge.key())}, {"bottom", to_string(tets[i].bottom_edge.key())}});
  out("build", {{"tau", tau}, {"tetrahedra", tets.size()}, {"gluings", gluings.size()}, {"unmatched_faces", unmatched},
                {"export", path}});
  return unmatched ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Veering triangulations of flat surfaces"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  std::string format = "text";
  app.add_option("-s,--surface", cfg.input, "surface file");
  app.add_option("-w,--word", cfg.word, "R/L word of a punctured-torus bundle")->check([](const std::string& w) {
    return w.find_first_not_of("RL") == std::string::npos && !w.empty() ? "" : "word must be over R and L";
  });
  app.add_option("--format", format, "text or structured")->check(CLI::IsMember({"text", "structured"}));
  app.add_option("--seed", cfg.seed, "seed of the sampling generator");
  app.add_option("--budget", cfg.budget, "flip budget of sweeps and pockets");
  app.add_option("-k", cfg.k, "monodromy range of embedding checks")->check(CLI::PositiveNumber);

  auto* info = app.add_subcommand("info", "cone points, Euler characteristic, hypothesis check");
  info->add_option("--bound-x", cfg.bx);
  info->add_option("--bound-y", cfg.by);
  auto* tau = app.add_subcommand("tau-edges", "tau-edges inside a box");
  tau->add_option("--bound-x", cfg.bx);
  tau->add_option("--bound-y", cfg.by);

  auto* section = app.add_subcommand("section", "initial or extended section");
  std::string mode, save;
  std::vector<long> picks;
  section->add_option("mode", mode)->required()->check(CLI::IsMember({"init", "extend"}));
  section->add_option("--edges", picks, "tau-edge indices to extend")->delimiter(',');
  section->add_option("--bound-x", cfg.bx);
  section->add_option("--bound-y", cfg.by);
  section->add_option("--save", save, "write the section file");

  auto* sweep_cmd = app.add_subcommand("sweep", "flip sequence from the initial section");
  std::string dir = "up";
  int steps = 8;
  bool period = false;
  sweep_cmd->add_option("--dir", dir)->check(CLI::IsMember({"up", "down"}));
  auto* steps_opt = sweep_cmd->add_option("--steps", steps)->check(CLI::NonNegativeNumber);
  sweep_cmd->add_flag("--period", period, "flip through one period of the monodromy")->excludes(steps_opt);

  std::string arc;
  std::string side_name = "left";
  std::array<CLI::App*, 3> hulls{};
  for (int i = 0; i < 3; ++i) {
    static const char* kNames[] = {"rhull", "thull", "retract"};
    hulls[i] = app.add_subcommand(kNames[i], "hull or retraction of an arc");
    hulls[i]->add_option("--input", arc, "arc spec, JSON text or file")->required();
    hulls[i]->add_option("--bound-x", cfg.bx);
    hulls[i]->add_option("--bound-y", cfg.by);
  }
  hulls[1]->add_option("--side", side_name)->check(CLI::IsMember({"left", "right"}));

  std::string name;
  auto* pocket = app.add_subcommand("pocket", "Y-pocket and isolated pocket of a subsurface");
  pocket->add_option("--subsurface", name)->required();
  auto* project = app.add_subcommand("project", "subsurface projection distances and the bound");
  project->add_option("--subsurface", name)->required();

  auto* check = app.add_subcommand("check", "property and theorem suites");
  std::string suite = "all", section_path;
  CheckConfig cc;
  check->add_option("--suite", suite)->check(CLI::IsMember({"all", "hulls", "sections", "theorems"}));
  check->add_option("--bound", cfg.bx, "enumeration box of sampled connections");
  check->add_option("--pairs", cc.pairs)->check(CLI::PositiveNumber);
  check->add_option("--subsets", cc.subsets)->check(CLI::PositiveNumber);
  check->add_option("--steps", cc.sweep_steps)->check(CLI::PositiveNumber);
  check->add_option("--section-file", section_path, "also validate a saved section");

  auto* build = app.add_subcommand("build", "export one fundamental slab of the mapping torus");
  std::string export_path;
  build->add_option("--export", export_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  cfg.format = format == "structured" ? Format::structured : Format::text;
  Emitter out(cfg.format);
  try {
    if (cfg.budget <= 0) throw InputError("budget error: budgets must be positive");
    if (*info) return cmd_info(cfg, out);
    if (*tau) return cmd_tau_edges(cfg, out);
    if (*section) return cmd_section(cfg, out, mode, picks, save);
    if (*sweep_cmd) return cmd_sweep(cfg, out, dir, steps, period);
    for (int i = 0; i < 3; ++i)
      if (*hulls[i]) return cmd_hull(cfg, out, hulls[i]->get_name(), arc, side_name == "left" ? 1 : -1);
    if (*pocket) return cmd_pocket(cfg, out, name);
    if (*project) return cmd_project(cfg, out, name);
    if (*check) return cmd_check(cfg, out, suite, section_path, cc);
    if (*build) return cmd_build(cfg, out, export_path);
  } catch (const InputError& e) {
    out("error", {{"kind", "input"}, {"message", e.what()}});
    return 2;
  } catch (const std::exception& e) {
    out("error", {{"kind", "internal"}, {"message", e.what()}});
    return 2;
  }
  return 2;
}
