#include <doctest.h>

#include "support.hpp"

using namespace veering;
using namespace veering::test;

namespace {

std::vector<std::string> render(const std::vector<CheckRow>& rows) {
  std::vector<std::string> out;
  for (const auto& r : rows)
    out.push_back(r.name + ":" + std::to_string(r.samples) + ":" + std::to_string(r.violations) + ":" + r.note);
  return out;
}

}  // namespace

TEST_CASE("suites pass and repeat under a fixed seed") {
  auto g = golden();
  CheckConfig cfg;
  cfg.pairs = 30;
  cfg.subsets = 8;
  cfg.sweep_steps = 3;
  cfg.section_pairs = 3;
  const SamplePool pool = make_pool(*g, cfg);
  CHECK(pool.sections.size() == 7);
  std::vector<std::vector<std::string>> runs;
  for (int k = 0; k < 2; ++k) {
    Rng rng(cfg.seed);
    auto rows = hull_suite(*g, pool, cfg, rng);
    for (auto& r : section_suite(*g, pool, cfg, rng)) rows.push_back(r);
    for (const auto& r : rows) CHECK_MESSAGE(r.passed(), r.name << ": " << r.note);
    runs.push_back(render(rows));
  }
  CHECK(runs[0] == runs[1]);
}

TEST_CASE("half-translation surfaces flag the polygon overlap row") {
  auto p = pillowcase();
  CheckConfig cfg;
  cfg.bound = Scalar(2);
  cfg.sweep_steps = 2;
  const SamplePool pool = make_pool(*p, cfg);
  Rng rng(3);
  const CheckRow r = check_polygon_disjoint(*p, pool, 10, rng);
  CHECK(r.unsupported);
  CHECK(r.passed());
}
