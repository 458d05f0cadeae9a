#include "monolab/kernels.hpp"

#include <doctest.h>

#include <random>

using namespace monolab;
using namespace monolab::kernels;

namespace {

std::vector<GraphPoint> random_graph(std::size_t n, std::uint64_t seed,
                                     int dim = 2) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<GraphPoint> pts;
  for (std::size_t i = 0; i < n; ++i) {
    Vec x(dim), v(dim);
    for (int k = 0; k < dim; ++k) {
      x[k] = u(rng);
      v[k] = u(rng);
    }
    // Duplicate some x's so the distinct-x filters get exercised.
    if (i % 7 == 0 && !pts.empty()) x = pts.back().x;
    pts.push_back({x, v});
  }
  return pts;
}

} // namespace

TEST_CASE("serial and parallel scans agree bitwise") {
  NormSpec spec;
  spec.p = 3.0;
  spec.weights = {1.0, 2.0};
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull}) {
    auto pts = random_graph(257, seed);

    auto a = min_pair_inner_serial(pts);
    auto b = min_pair_inner(pts);
    CHECK(a.found == b.found);
    CHECK(a.value == b.value);
    CHECK(a.i == b.i);
    CHECK(a.j == b.j);

    auto c = min_strong_ratio_serial(pts, spec);
    auto d = min_strong_ratio(pts, spec);
    CHECK(c.found == d.found);
    CHECK(c.value == d.value);
    CHECK(c.i == d.i);
    CHECK(c.j == d.j);

    auto e = max_hypo_ratio_serial(pts);
    auto f = max_hypo_ratio(pts);
    CHECK(e.found == f.found);
    CHECK(e.value == f.value);
    CHECK(e.i == f.i);
    CHECK(e.j == f.j);

    auto cands = random_graph(64, seed + 100);
    auto m1 = extension_margin_serial(cands, pts);
    auto m2 = extension_margin(cands, pts);
    CHECK(m1 == m2);
  }
}

TEST_CASE("pair scan values on hand-built graphs") {
  std::vector<GraphPoint> inc = {{{0}, {0}}, {{1}, {1}}};
  auto s = min_pair_inner(inc);
  REQUIRE(s.found);
  CHECK(s.value == 1.0);

  std::vector<GraphPoint> dec = {{{0}, {1}}, {{1}, {0}}};
  s = min_pair_inner(dec);
  REQUIRE(s.found);
  CHECK(s.value == -1.0);
  CHECK(s.i == 0);
  CHECK(s.j == 1);
}

TEST_CASE("hypo ratio of the negated identity is 1") {
  std::vector<GraphPoint> pts;
  for (int k = 0; k <= 8; ++k) {
    double x = -1.0 + 0.25 * k;
    pts.push_back({{x}, {-x}});
  }
  auto s = max_hypo_ratio(pts);
  REQUIRE(s.found);
  CHECK(s.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("strong ratio skips vertical pairs") {
  std::vector<GraphPoint> pts = {{{0}, {0}}, {{0}, {1}}, {{0}, {-3}}};
  NormSpec spec = NormSpec::euclidean(1);
  auto s = min_strong_ratio(pts, spec);
  CHECK(!s.found);
}

TEST_CASE("extension margin against a singleton graph") {
  std::vector<GraphPoint> graph = {{{0}, {0}}};
  std::vector<GraphPoint> cands = {{{0.5}, {0.0}}, {{0.5}, {-1.0}}};
  auto m = extension_margin(cands, graph);
  CHECK(m[0] == 0.0);
  CHECK(m[1] == -0.5);
}
