// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "veering/checks.hpp"

using namespace veering;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void verdict(int id, bool ok, const std::string& detail) {
  failures += !ok;
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << detail << std::endl;
}

std::string data(const char* name) { return std::string(VEERING_DATA_DIR) + "/" + name; }

SurfacePtr bundle(const std::string& w) { return FlatSurface::load(punctured_torus_bundle(w)); }

// Letters of the unique factorization of a nonnegative SL2(Z) matrix into
// R = [[1,1],[0,1]] and L = [[1,0],[1,1]], peeled from the left.
long factor_letters(IntMatrix m) {
  long n = 0;
  while (!(m[0][0] == 1 && m[0][1] == 0 && m[1][0] == 0 && m[1][1] == 1)) {
    if (m[0][0] >= m[1][0] && m[0][1] >= m[1][1]) {
      m[0][0] -= m[1][0];
      m[0][1] -= m[1][1];
    } else if (m[1][0] >= m[0][0] && m[1][1] >= m[0][1]) {
      m[1][0] -= m[0][0];
      m[1][1] -= m[0][1];
    } else {
      return -1;
    }
    ++n;
  }
  return n;
}

std::vector<std::string> words_of_length(int n) {
  std::vector<std::string> out;
  for (int a = 1; a < n; ++a) out.push_back(std::string(a, 'R') + std::string(n - a, 'L'));
  std::string alt = n % 2 ? "R" : "";
  for (int i = 0; i < n / 2; ++i) alt += "RL";
  if (std::find(out.begin(), out.end(), alt) == out.end()) out.push_back(alt);
  return out;
}

void tet_counts() {
  long cases = 0, bad = 0;
  double worst = 0;
  std::string first_bad;
  for (int n = 2; n <= 8; ++n)
    for (const auto& w : words_of_length(n)) {
      const long want = factor_letters(word_matrix(w));
      const auto t0 = Clock::now();
      auto s = bundle(w);
      const long got = period_tet_count(*s, initial_section(*s), *s->monodromy());
      const double dt = seconds_since(t0);
      worst = std::max(worst, dt);
      ++cases;
      if (got != want || dt >= 60) {
        if (!bad++) first_bad = w + ": " + std::to_string(got) + " vs " + std::to_string(want);
      }
    }
  std::ostringstream os;
  os << cases << " words of length 2-8, " << bad << " mismatches, slowest " << static_cast<int>(worst * 1000) << " ms";
  if (bad) os << ", first " << first_bad;
  verdict(1, bad == 0, os.str());
}

void flip_orders(const FlatSurface& s, const SamplePool& pool, Rng& rng) {
  CheckRow r = check_flip_order(s, pool, 24, rng);
  verdict(2, !r.unsupported && r.passed() && r.samples >= 20,
          std::to_string(r.samples) + " golden-torus section pairs x 4 flip orders, " + std::to_string(r.violations) +
              " disagreements" + (r.note.empty() ? "" : ": " + r.note));
}

struct Surfaces {
  std::string label;
  SurfacePtr s;
  SamplePool pool;
};

void extension(std::vector<Surfaces>& ss, Rng& rng) {
  long samples = 0, bad = 0;
  std::string note, names;
  for (int i = 0; i < 2; ++i) {
    CheckRow r = check_section_extension(*ss[i].s, ss[i].pool, i == 0 ? 60 : 50, rng);
    samples += r.samples;
    bad += r.violations + r.unsupported;
    if (note.empty()) note = r.note;
    names += (i ? ", " : "") + ss[i].label;
  }
  verdict(3, bad == 0 && samples >= 100,
          std::to_string(samples) + " subsets on " + names + ", " + std::to_string(bad) + " invalid" +
              (note.empty() ? "" : ": " + note));
}

void hulls(std::vector<Surfaces>& ss, Rng& rng, std::array<CheckRow, 2>& retraction) {
  std::array<long, 3> n{}, v{};
  std::string note;
  for (auto& x : ss) {
    const std::array<CheckRow, 3> rows{check_rect_hull_disjoint(*x.s, x.pool, 100000, rng),
                                       check_polygons(*x.s, x.pool, 100000, rng),
                                       check_polygon_disjoint(*x.s, x.pool, 100000, rng)};
    for (int i = 0; i < 3; ++i) {
      n[i] += rows[i].samples;
      v[i] += rows[i].violations;
      if (note.empty() && !rows[i].note.empty() && rows[i].violations) note = x.label + " " + rows[i].note;
    }
    CheckRow id = check_retraction_identity(*x.s, x.pool);
    CheckRow lip = check_retraction_lipschitz(*x.s, x.pool, 100000, rng);
    for (auto [acc, row] : {std::pair{&retraction[0], &id}, std::pair{&retraction[1], &lip}}) {
      acc->samples += row->samples;
      acc->violations += row->violations;
      if (acc->note.empty() && row->violations) acc->note = x.label + " " + row->note;
    }
  }
  std::ostringstream os;
  os << "disjoint pairs " << n[0] << " (" << v[0] << " crossings), polygons " << n[1] << " (" << v[1]
     << " bad), leaf-joined pairs " << n[2] << " (" << v[2] << " overlaps)";
  if (!note.empty()) os << ": " << note;
  verdict(4, v[0] + v[1] + v[2] == 0 && n[0] >= 1000 && n[1] >= 200 && n[2] >= 200, os.str());
}

void retraction(const std::array<CheckRow, 2>& r) {
  std::ostringstream os;
  os << "identity on " << r[0].samples << " tau-edges (" << r[0].violations << " moved), " << r[1].samples
     << " adjacent pairs (" << r[1].violations << " crossings)";
  if (!r[0].note.empty()) os << ": " << r[0].note;
  if (!r[1].note.empty()) os << ": " << r[1].note;
  verdict(5, r[0].violations + r[1].violations == 0 && r[0].samples > 0 && r[1].samples >= 500, os.str());
}

void arc_graph(const FlatSurface& s) {
  CheckRow r = check_arc_graph(s, 50);
  TorusLadder ladder(s, 50);
  const size_t edges = ladder.edges().size();
  verdict(6, !r.unsupported && r.passed() && edges >= 50,
          std::to_string(edges) + " tau-edges, " + std::to_string(r.samples) + " pairs, " +
              std::to_string(r.violations) + " BFS/Farey mismatches" + (r.violations ? ": " + r.note : ""));
}

struct Twist {
  int n;
  SurfacePtr s;
  SubsurfaceSpec y;
  MaximalCylinder cyl;
  ProjectionReport d;
  long tau;
};

void projection_bound(const std::vector<Twist>& ts) {
  long worst_slack = 0, bad = 0;
  std::string detail;
  for (const auto& t : ts) {
    const BoundVerdict v = check_projection_bound(true, t.y.euler, t.d, t.tau);
    worst_slack = std::max(worst_slack, v.margin);
    if (!v.holds || v.margin > 15 || t.tau != t.n + 1) ++bad;
    detail += (detail.empty() ? "" : " ") + std::to_string(t.n) + ":" + std::to_string(t.d.hi) + "/" +
              std::to_string(t.tau);
  }
  verdict(7, bad == 0,
          "R^nL n=3..12, d_W/|tau| " + detail + ", max slack " + std::to_string(worst_slack) + ", " +
              std::to_string(bad) + " violations");
}

void isolated(const std::vector<Twist>& ts) {
  long cases = 0, bad = 0;
  std::string detail, problem;
  for (const auto& t : ts) {
    if (t.d.lo <= 10 && t.d.hi <= 10) continue;
    ++cases;
    std::vector<std::string> issues;
    try {
      const YPocket u = y_pocket(*t.s, t.y);
      const IsolatedPocketResult r = isolated_pocket(*t.s, u, t.y);
      if (!r.pocket) {
        issues.push_back("no pocket: " + r.reason);
      } else {
        const IsolatedPocket& v = *r.pocket;
        for (auto& m : isolated_pocket_violations(*t.s, t.cyl, v)) issues.push_back(m);
        if (v.span.lo < t.d.hi - 10) issues.push_back("d(V-,V+) below d_W - 10");
        if (v.tet_count() < v.span.hi) issues.push_back("tet_count below d(V-,V+)");
        for (auto& m : check_pocket_embedding(*t.s, v, *t.s->monodromy(), 3).violations) issues.push_back(m);
        detail += (detail.empty() ? "" : " ") + std::to_string(t.n) + ":" + std::to_string(v.span.lo) + ">=" +
                  std::to_string(t.d.hi - 10) + "," + std::to_string(v.tet_count()) + "tets";
      }
    } catch (const std::exception& e) {
      issues.push_back(e.what());
    }
    if (!issues.empty()) {
      ++bad;
      if (problem.empty()) problem = "n=" + std::to_string(t.n) + " " + issues.front();
    }
  }
  verdict(8, cases > 0 && bad == 0,
          std::to_string(cases) + " twists with d_W > 10 [" + detail + "], embedding k=3, " + std::to_string(bad) +
              " failing" + (problem.empty() ? "" : ": " + problem));
}

std::string run(const std::string& cmd, int& status) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) {
    status = -1;
    return out;
  }
  std::array<char, 4096> buf;
  while (size_t k = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), k);
  status = pclose(p);
  return out;
}

void determinism() {
  const std::string cmd = std::string(VEERING_CLI_PATH) + " --surface " + data("golden_torus.json") +
                          " --format structured --seed 11 check --suite all";
  int s1 = 0, s2 = 0;
  const std::string a = run(cmd, s1), b = run(cmd, s2);
  const bool ok = s1 == 0 && s2 == 0 && !a.empty() && a == b;
  verdict(9, ok,
          "two check runs, " + std::to_string(a.size()) + " and " + std::to_string(b.size()) + " bytes, " +
              (a == b ? "identical" : "differ") + ", exit " + std::to_string(s1) + "/" + std::to_string(s2));
}

}  // namespace

int main() {
  const auto start = Clock::now();
  Rng rng(2024);

  tet_counts();

  std::vector<Surfaces> ss;
  auto add = [&](const std::string& label, SurfacePtr s, int bound) {
    CheckConfig cfg;
    cfg.bound = Scalar(bound);
    SamplePool pool = make_pool(*s, cfg);
    ss.push_back({label, std::move(s), std::move(pool)});
  };
  add("golden torus", load_surface_file(data("golden_torus.json")), 10);
  add("golden pillowcase", load_surface_file(data("golden_pillowcase.json")), 6);
  add("RRL bundle", bundle("RRL"), 3);

  flip_orders(*ss[0].s, ss[0].pool, rng);
  extension(ss, rng);
  std::array<CheckRow, 2> retr{};
  hulls(ss, rng, retr);
  retraction(retr);
  arc_graph(*ss[0].s);

  std::vector<Twist> ts;
  for (int n = 3; n <= 12; ++n) {
    auto s = bundle(std::string(n, 'R') + "L");
    SubsurfaceSpec y = subsurfaces(*s).front();
    MaximalCylinder cyl = maximal_cylinder(*s, *y.core);
    ProjectionReport d = annular_distance(cyl);
    const long tau = period_tet_count(*s, initial_section(*s), *s->monodromy());
    ts.push_back({n, s, y, cyl, d, tau});
  }
  projection_bound(ts);
  isolated(ts);
  determinism();

  std::cout << (failures ? "FAILED " : "ALL PASSED ") << failures << " of 9 failing, "
            << static_cast<int>(seconds_since(start)) << " s" << std::endl;
  return failures ? 1 : 0;
}
