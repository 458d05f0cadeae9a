#include "monolab/catalog.hpp"

#include "monolab/error.hpp"
#include "monolab/monocheck.hpp"

#include <doctest.h>

#include <cmath>

using namespace monolab;
using namespace monolab::catalog;

TEST_CASE("every catalog entry instantiates and lists expectations") {
  for (const auto& name : list_names()) {
    auto op = builtin(name);
    auto e = expected(name);
    CHECK(op->dim() == e.dim);
    CHECK(!e.points.empty());
  }
  CHECK_THROWS_AS(builtin("no_such_operator"), Error);
  CHECK_THROWS_AS(expected("no_such_operator"), Error);
}

TEST_CASE("reference points lie on their graphs") {
  for (const auto& name : list_names()) {
    auto op = builtin(name);
    auto e = expected(name);
    NormSpec spec = NormSpec::euclidean(e.dim);
    for (const auto& p : e.points) {
      Box b = box_at(p.at, p.x_radius, p.v_radius);
      auto vs = opmodel::evaluate(*op, p.at.x, b, 1e-10, spec);
      CHECK(vs.contains(p.at.v, 1e-9, spec));
    }
  }
}

TEST_CASE("example35_sum: hint graph equals the composite graph on the box") {
  auto hinted = builtin("example35_sum");
  // Strip the hint to force the honest composite evaluation path.
  auto bare = std::make_shared<opmodel::Operator>(*hinted);
  bare->pieces_hint = nullptr;
  NormSpec e2 = NormSpec::euclidean(2);
  Box b{{0.0, 0.0}, 1.0, {0.0, 0.0}, 1.0};
  auto g1 = opmodel::sample_graph(*hinted, b, 5, e2);
  auto g2 = opmodel::sample_graph(*bare, b, 5, e2);
  REQUIRE(!g1.points.empty());
  REQUIRE(g1.points.size() == g2.points.size());
  for (size_t i = 0; i < g1.points.size(); ++i) {
    CHECK(g1.points[i].x == g2.points[i].x);
    CHECK(g1.points[i].v == g2.points[i].v);
  }
  // And membership cross-validates in both directions.
  for (const auto& p : g1.points) {
    auto vs = opmodel::evaluate(*bare, p.x, b, 1e-10, e2);
    CHECK(vs.contains(p.v, 1e-10, e2));
  }
}

TEST_CASE("abs subdifferential values") {
  auto op = builtin("abs_subdifferential");
  NormSpec e1 = NormSpec::euclidean(1);
  Box b{{0.0}, 2.0, {0.0}, 2.0};
  auto at0 = opmodel::evaluate(*op, {0.0}, b, 1e-10, e1);
  CHECK(at0.contains({-1.0}, 1e-12, e1));
  CHECK(at0.contains({1.0}, 1e-12, e1));
  CHECK(at0.contains({0.0}, 1e-12, e1));
  CHECK(!at0.contains({1.5}, 1e-9, e1));
  auto neg = opmodel::evaluate(*op, {-1.5}, b, 1e-10, e1).points();
  REQUIRE(neg.size() == 1);
  CHECK(neg[0][0] == -1.0);
}

TEST_CASE("expected moduli are reproduced by the sampled estimators") {
  for (const auto& name : list_names()) {
    auto e = expected(name);
    if (!e.strong_modulus && !e.hypo_modulus) continue;
    auto op = builtin(name);
    NormSpec spec = NormSpec::euclidean(e.dim);
    GraphPoint center = e.points.front().at;
    Box b{Vec(e.dim, 0.0), e.box_x_radius, Vec(e.dim, 0.0), 50.0};
    auto g = opmodel::sample_graph(*op, b, 5, spec);
    if (e.strong_modulus && *e.strong_modulus >= 0.0) {
      auto v = monocheck::strong_modulus(g, spec);
      REQUIRE(v.pass());
      CHECK(*v.sigma_hat == doctest::Approx(*e.strong_modulus).epsilon(1e-9));
    }
    if (e.hypo_modulus) {
      auto v = monocheck::hypo_modulus(g);
      REQUIRE(v.pass());
      CHECK(*v.r_hat == doctest::Approx(*e.hypo_modulus).epsilon(1e-9));
    }
  }
}

TEST_CASE("normal_cone_box and normal_cone_polyhedron slices") {
  auto ncb = builtin("normal_cone_box"); // [0, 1]
  NormSpec e1 = NormSpec::euclidean(1);
  Box b{{0.0}, 2.0, {0.0}, 2.0};
  CHECK(opmodel::evaluate(*ncb, {0.0}, b, 1e-10, e1).contains({-1.0}, 1e-12, e1));
  CHECK(opmodel::evaluate(*ncb, {1.0}, b, 1e-10, e1).contains({1.0}, 1e-12, e1));
  auto mid = opmodel::evaluate(*ncb, {0.5}, b, 1e-10, e1).points();
  REQUIRE(mid.size() == 1);
  CHECK(mid[0][0] == 0.0);

  auto tri = builtin("normal_cone_polyhedron");
  NormSpec e2 = NormSpec::euclidean(2);
  Box b2{{0.0, 0.0}, 2.0, {0.0, 0.0}, 2.0};
  // Vertex (0,0): cone spanned by (-1,0) and (0,-1).
  auto corner = opmodel::evaluate(*tri, {0.0, 0.0}, b2, 1e-10, e2);
  CHECK(corner.contains({-1.0, -1.0}, 1e-12, e2));
  CHECK(corner.contains({0.0, -1.0}, 1e-12, e2));
  CHECK(!corner.contains({1.0, 0.0}, 1e-9, e2));
}

TEST_CASE("truncated identity has a genuine gap") {
  auto op = builtin("truncated_identity");
  NormSpec e1 = NormSpec::euclidean(1);
  Box b{{0.0}, 2.0, {0.0}, 2.0};
  CHECK(opmodel::evaluate(*op, {0.25}, b, 1e-10, e1).empty());
  CHECK(!opmodel::evaluate(*op, {0.0}, b, 1e-10, e1).empty());
  CHECK(!opmodel::evaluate(*op, {0.5}, b, 1e-10, e1).empty());
}

TEST_CASE("catalog parameters are honored") {
  auto lin = builtin("linear", {{"matrix", {3.0}}});
  NormSpec e1 = NormSpec::euclidean(1);
  Box b{{1.0}, 1.0, {3.0}, 1.0};
  auto pts = opmodel::evaluate(*lin, {1.0}, b, 1e-10, e1).points();
  REQUIRE(pts.size() == 1);
  CHECK(pts[0][0] == 3.0);

  auto gap = builtin("truncated_identity", {{"gap", {-0.5, 0.5}}});
  CHECK(opmodel::evaluate(*gap, {0.0}, b, 1e-10, e1).empty());
  CHECK_THROWS_AS(builtin("linear", {{"matrix", {1, 2, 3}}}), Error);
}
