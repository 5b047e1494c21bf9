#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>

#include "support.hpp"

using namespace veering::test;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run cli(const std::string& args) {
  Run r;
  FILE* p = popen((std::string(VEERING_CLI_PATH) + " " + args + " 2>&1").c_str(), "r");
  REQUIRE(p);
  std::array<char, 4096> buf;
  while (size_t k = fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), k);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

bool has(const Run& r, const std::string& s) { return r.out.find(s) != std::string::npos; }

}  // namespace

TEST_CASE("info reports the surface and the hypothesis") {
  const Run g = cli("--surface " + data("golden_torus.json") + " info");
  CHECK(g.code == 0);
  CHECK(has(g, "euler_char=-1"));
  CHECK(has(g, "punctures=1"));
  const Run s = cli("--surface " + data("square_torus.json") + " info");
  CHECK(s.code == 1);
  CHECK(has(s, "horizontal saddle connection"));
  const std::string bad = "/tmp/veering_bad_surface.json";
  std::ofstream(bad) << "{ not json";
  const Run b = cli("--surface " + bad + " info");
  CHECK(b.code == 2);
  CHECK(has(b, "parse error"));
}

TEST_CASE("build exports one slab") {
  const std::string path = "/tmp/veering_slab_rl.json";
  const Run rl = cli("--word RL --format structured build --export " + path);
  CHECK(rl.code == 0);
  CHECK(has(rl, R"("tau":2)"));
  CHECK(has(rl, R"("unmatched_faces":0)"));
  std::ifstream f(path);
  CHECK(f.good());
  const Run r2l = cli("--word RRL build");
  CHECK(r2l.code == 0);
  CHECK(has(r2l, "tau=3"));
  const Run none = cli("--budget 0 --word RL build");
  CHECK(none.code == 2);
  CHECK(has(none, "budget"));
}

TEST_CASE("check runs hull and section suites without subsurfaces") {
  const std::string args = "--surface " + data("golden_torus.json") +
                           " --format structured --seed 5 check --pairs 20 --subsets 8 --steps 3";
  const Run a = cli(args);
  CHECK(a.code == 0);
  CHECK(has(a, R"("schema":"veering-cli/1")"));
  CHECK(has(a, R"("theorems_run":false)"));
  CHECK_FALSE(has(a, R"("suite":"theorems")"));
  CHECK(cli(args).out == a.out);
}

TEST_CASE("corrupted section files are reported") {
  const std::string good = "/tmp/veering_section.json", bad = "/tmp/veering_section_bad.json";
  REQUIRE(cli("--surface " + data("golden_torus.json") + " section init --save " + good).code == 0);
  const std::string g = "--surface " + data("golden_torus.json") + " check --suite sections --subsets 2 --steps 1";
  const Run ok = cli(g + " --section-file " + good);
  CHECK(ok.code == 0);
  CHECK(has(ok, "name=section-file status=pass"));
  std::ofstream(bad) << R"({"schema": "veering-section/1", "edges": [
    {"tri": 0, "corner": 0, "hol": ["[1]", "[0]"]},
    {"tri": 0, "corner": 1, "hol": ["[5]", "[3]"]}]})";
  const Run r = cli(g + " --section-file " + bad);
  CHECK(r.code == 1);
  CHECK(has(r, "name=section-file status=fail"));
}

TEST_CASE("input errors exit with code 2") {
  CHECK(cli("--word RL pocket --subsurface missing").code == 2);
  CHECK(cli("--word RXL info").code == 2);
  CHECK(cli("--surface " + data("golden_torus.json") + " rhull --input '{\"tau\": 999}'").code == 2);
  CHECK(cli("info").code == 2);
}

TEST_CASE("hull commands accept arc specs") {
  const std::string g = "--surface " + data("golden_torus.json");
  const Run r = cli(g + " rhull --input '{\"tau\": 0}'");
  CHECK(r.code == 0);
  CHECK(has(r, "rhull edges=1"));
  const Run t = cli(g + R"( thull --side right --input '{"connection": {"polygon": 0, "vertex": 0, "holonomy": ["[1, 1]", "[2, -1]"]}}')");
  CHECK(t.code == 0);
  CHECK(has(t, "thull side=-1"));
  const Run c = cli(g + R"( retract --input '{"curve": {"polygon": 0, "point": ["[1/4]", "[1/8]"], "holonomy": ["[1]", "[1]"]}}')");
  CHECK(c.code == 0);
  CHECK(has(c, "retract edges="));
}

TEST_CASE("projection and pocket commands on a twisted bundle") {
  const Run p = cli("--word RRRRL project --subsurface twist-annulus");
  CHECK(p.code == 0);
  CHECK(has(p, "holds=true"));
  const Run q = cli("--word RRRL pocket --subsurface twist-annulus");
  CHECK(q.code == 0);
  CHECK(has(q, "found=false"));
}
