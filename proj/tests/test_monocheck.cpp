#include "monolab/monocheck.hpp"

#include "monolab/catalog.hpp"
#include "monolab/error.hpp"
#include "monolab/normgeom.hpp"

#include <doctest.h>

#include <cmath>

using namespace monolab;
using namespace monolab::monocheck;
using monolab::Box;
using opmodel::SampledGraph;

namespace {

const NormSpec kE1 = NormSpec::euclidean(1);
const NormSpec kE2 = NormSpec::euclidean(2);

SampledGraph graph_of(std::vector<GraphPoint> pts, int n = 1) {
  return SampledGraph{n, std::move(pts)};
}

Box ball(const GraphPoint& pt, double rx = 1.0, double rv = 1.0) {
  return Box{pt.x, rx, pt.v, rv};
}

} // namespace

TEST_CASE("monotone witness on tiny graphs") {
  auto pass = monotone_witness(graph_of({{{0}, {0}}, {{1}, {1}}}), kE1);
  CHECK(pass.pass());

  auto fail = monotone_witness(graph_of({{{0}, {1}}, {{1}, {0}}}), kE1);
  REQUIRE(fail.fail());
  REQUIRE(fail.witness_pair.has_value());
  CHECK(*fail.value == -1.0);
  // The witness re-validates under direct arithmetic.
  auto [p, q] = *fail.witness_pair;
  double s = 0;
  for (size_t i = 0; i < p.x.size(); ++i)
    s += (p.v[i] - q.v[i]) * (p.x[i] - q.x[i]);
  CHECK(s == -1.0);
}

TEST_CASE("normal-cone samples are monotone (brute force over pairs)") {
  auto op = catalog::builtin("normal_cone_halfline");
  Box b{{0.0}, 1.0, {0.0}, 1.0};
  auto g = opmodel::sample_graph(*op, b, 7, kE1);
  CHECK(monotone_witness(g, kE1).pass());
}

TEST_CASE("strong modulus: identity, diagonal map, normal cone") {
  auto id = catalog::builtin("identity");
  Box b{{0.0}, 1.0, {0.0}, 1.0};
  auto v = strong_modulus(opmodel::sample_graph(*id, b, 5, kE1), kE1);
  REQUIRE(v.pass());
  CHECK(*v.sigma_hat == doctest::Approx(1.0).epsilon(1e-12));

  auto lin = catalog::builtin("linear", {{"matrix", {2, 0, 0, 5}}});
  Box b2{{0.0, 0.0}, 1.0, {0.0, 0.0}, 1.0};
  auto v2 = strong_modulus(opmodel::sample_graph(*lin, b2, 5, kE2), kE2);
  REQUIRE(v2.pass());
  CHECK(*v2.sigma_hat == doctest::Approx(2.0).epsilon(1e-9));

  auto nc = catalog::builtin("normal_cone_halfline");
  auto v3 = strong_modulus(opmodel::sample_graph(*nc, b, 5, kE1), kE1);
  REQUIRE(v3.pass());
  CHECK(*v3.sigma_hat == doctest::Approx(0.0).epsilon(1e-12));

  // All points share one x: DEGENERATE.
  auto v4 = strong_modulus(graph_of({{{0}, {0}}, {{0}, {1}}}), kE1);
  CHECK(v4.status == Verdict::Status::Inconclusive);
}

TEST_CASE("strong modulus fails on a non-monotone sample") {
  auto v = strong_modulus(graph_of({{{0}, {1}}, {{1}, {0}}}), kE1);
  CHECK(v.fail());
}

TEST_CASE("hypo modulus: identity 0, negated identity 1, single-x 0") {
  auto id = catalog::builtin("identity");
  Box b{{0.0}, 1.0, {0.0}, 1.0};
  auto v = hypo_modulus(opmodel::sample_graph(*id, b, 5, kE1));
  REQUIRE(v.pass());
  CHECK(*v.r_hat == 0.0);

  auto neg = catalog::builtin("neg_identity");
  auto v2 = hypo_modulus(opmodel::sample_graph(*neg, b, 5, kE1));
  REQUIRE(v2.pass());
  CHECK(*v2.r_hat == doctest::Approx(1.0).epsilon(1e-12));

  auto v3 = hypo_modulus(graph_of({{{0}, {-1}}, {{0}, {1}}}));
  REQUIRE(v3.pass());
  CHECK(*v3.r_hat == 0.0);
}

TEST_CASE("scaling: strong modulus of c*T is c times that of T") {
  auto lin = catalog::builtin("linear", {{"matrix", {2, 0, 0, 5}}});
  Box b2{{0.0, 0.0}, 1.0, {0.0, 0.0}, 50.0};
  for (double c : {0.5, 2.0, 3.0}) {
    auto scaled = opmodel::op_scale(lin, c);
    auto base = strong_modulus(opmodel::sample_graph(*lin, b2, 5, kE2), kE2);
    auto sc = strong_modulus(opmodel::sample_graph(*scaled, b2, 5, kE2), kE2);
    REQUIRE(base.pass());
    REQUIRE(sc.pass());
    CHECK(*sc.sigma_hat == doctest::Approx(c * *base.sigma_hat).epsilon(1e-9));
  }
}

TEST_CASE("shear arithmetic: hypo modulus drops by sigma under the shear") {
  auto neg = catalog::builtin("neg_identity"); // r_hat = 1
  Box b{{0.0}, 1.0, {0.0}, 1.0};
  auto g = opmodel::sample_graph(*neg, b, 5, kE1);
  for (double sigma : {0.25, 0.5, 1.0, 2.0}) {
    SampledGraph sheared = g;
    for (auto& pt : sheared.points)
      pt = normgeom::shear_vertical(pt, sigma, kE1);
    auto v = hypo_modulus(sheared);
    REQUIRE(v.pass());
    CHECK(*v.r_hat == doctest::Approx(std::max(0.0, 1.0 - sigma)).epsilon(1e-9));
  }
}

TEST_CASE("monotone sets shear into strongly monotone sets") {
  auto nc = catalog::builtin("normal_cone_halfline");
  Box b{{0.0}, 1.0, {0.0}, 1.0};
  auto g = opmodel::sample_graph(*nc, b, 5, kE1);
  for (double sigma : {0.5, 1.0}) {
    SampledGraph sheared = g;
    for (auto& pt : sheared.points)
      pt = normgeom::shear_vertical(pt, sigma, kE1);
    auto v = strong_modulus(sheared, kE1);
    REQUIRE(v.pass());
    CHECK(*v.sigma_hat >= sigma - 1e-9);
  }
}

TEST_CASE("isc probe: identity passes, halfline cone fails off the corner") {
  std::vector<double> radii{0.5, 0.25, 0.125};
  auto id = catalog::builtin("identity");
  auto v = isc_probe(*id, {{0.0}, {0.0}}, radii, kE1);
  CHECK(v.pass());

  auto nc = catalog::builtin("normal_cone_halfline");
  auto fail = isc_probe(*nc, {{0.0}, {-1.0}}, radii, kE1);
  REQUIRE(fail.fail());
  REQUIRE(fail.witness_point.has_value());
  CHECK(fail.witness_point->x[0] > 0.0);
  CHECK(*fail.value > 0.5); // distance from -1 to {0} is 1

  auto pass = isc_probe(*nc, {{0.0}, {0.0}}, radii, kE1);
  CHECK(pass.pass());
}

TEST_CASE("isc probe rejects points off the graph") {
  auto id = catalog::builtin("identity");
  CHECK_THROWS_AS(isc_probe(*id, {{0.0}, {0.5}}, {0.25}, kE1), Error);
}

TEST_CASE("type-A search: example 3.5 yields the axis witness") {
  auto op = catalog::builtin("example35_sum");
  GraphPoint pt{{0.0, 0.0}, {0.0, 0.0}};
  Box b = ball(pt);
  auto v = typeA_witness_search(*op, pt, b, 5, kE2);
  REQUIRE(v.fail());
  REQUIRE(v.witness_point.has_value());
  // Witness of the form ((alpha, 0), (0, 0)) with alpha > 0.
  CHECK(v.witness_point->x[0] > 0.0);
  CHECK(v.witness_point->x[1] == 0.0);
  CHECK(v.witness_point->v[0] == 0.0);
  CHECK(v.witness_point->v[1] == 0.0);
  CHECK(v.certified); // exact against the closed-form graph
}

TEST_CASE("type-A search: identity passes, singleton fails to the right") {
  auto id = catalog::builtin("identity");
  GraphPoint origin{{0.0}, {0.0}};
  auto v = typeA_witness_search(*id, origin, ball(origin), 9, kE1);
  CHECK(v.pass());

  auto single = catalog::builtin("singleton_graph");
  auto v2 = typeA_witness_search(*single, origin, ball(origin), 9, kE1);
  REQUIRE(v2.fail());
  REQUIRE(v2.witness_point.has_value());
  CHECK(v2.witness_point->x[0] > 0.0);
  CHECK(v2.witness_point->v[0] == 0.0);
  CHECK(*v2.value >= 0.0);
}

TEST_CASE("type-A search: truncated identity fails at the gap edge") {
  auto op = catalog::builtin("truncated_identity");
  GraphPoint edge{{0.0}, {0.0}};
  Box b = ball(edge, 0.25, 0.25);
  auto v = typeA_witness_search(*op, edge, b, 9, kE1);
  CHECK(v.fail());

  GraphPoint inner{{-1.0}, {-1.0}};
  auto v2 = typeA_witness_search(*op, inner, ball(inner, 0.5, 0.5), 9, kE1);
  CHECK(v2.pass());
}
