#include "monolab/geometry.hpp"

#include <doctest.h>

using namespace monolab::geom;

namespace {

Polyhedron triangle() { // {x >= 0, y >= 0, x + y <= 1}
  Polyhedron p;
  p.dim = 2;
  p.cons.push_back({{Rat(-1), Rat(0)}, Rat(0), false});
  p.cons.push_back({{Rat(0), Rat(-1)}, Rat(0), false});
  p.cons.push_back({{Rat(1), Rat(1)}, Rat(1), false});
  return p;
}

RatVec rv(std::vector<double> v) { return to_rat(v); }

} // namespace

TEST_CASE("strict system feasibility and point construction") {
  StrictSystem s;
  s.dim = 2;
  s.ineqs.push_back({rv({1, 0}), Rat(1), false});   // x <= 1
  s.ineqs.push_back({rv({-1, 0}), Rat(0), true});   // x > 0
  s.ineqs.push_back({rv({0, 1}), Rat(0), true});    // y < 0
  auto z = solve_strict(s);
  REQUIRE(z.has_value());
  CHECK((*z)[0] > 0);
  CHECK((*z)[0] <= 1);
  CHECK((*z)[1] < 0);

  s.ineqs.push_back({rv({0, -1}), Rat(0), false}); // y >= 0: contradiction
  CHECK(!solve_strict(s).has_value());
}

TEST_CASE("equalities are eliminated exactly") {
  StrictSystem s;
  s.dim = 3;
  s.eqs.push_back({rv({1, 1, 0}), Rat(2)});  // x + y = 2
  s.eqs.push_back({rv({0, 1, -1}), Rat(0)}); // y = z
  s.ineqs.push_back({rv({0, 0, 1}), Rat(1), false}); // z <= 1
  auto z = solve_strict(s);
  REQUIRE(z.has_value());
  CHECK((*z)[0] + (*z)[1] == Rat(2));
  CHECK((*z)[1] == (*z)[2]);
  CHECK((*z)[2] <= Rat(1));
}

TEST_CASE("vertex enumeration of the triangle") {
  auto rep = v_rep(triangle());
  REQUIRE(rep.vertices.size() == 3);
  CHECK(rep.rays.empty());
  CHECK(rep.lines.empty());
  CHECK(rep.vertices[0] == rv({0, 0}));
  CHECK(rep.vertices[1] == rv({0, 1}));
  CHECK(rep.vertices[2] == rv({1, 0}));
}

TEST_CASE("faces of the triangle: 1 body + 3 edges + 3 vertices") {
  auto faces = faces_of(triangle());
  int by_dim[3] = {0, 0, 0};
  for (const auto& f : faces) by_dim[f.dim]++;
  CHECK(by_dim[2] == 1);
  CHECK(by_dim[1] == 3);
  CHECK(by_dim[0] == 3);
}

TEST_CASE("implicit equalities are detected") {
  Polyhedron p; // {x <= 0, x >= 0} = {x = 0} as inequalities
  p.dim = 2;
  p.cons.push_back({rv({1, 0}), Rat(0), false});
  p.cons.push_back({rv({-1, 0}), Rat(0), false});
  auto impl = implicit_equalities(p);
  CHECK(impl.size() == 2);
  CHECK(affine_dim(p) == 1);
}

TEST_CASE("cone from halfspaces: first orthant polar") {
  // {d : -d <= 0} in R^2 = first orthant; rays e1, e2.
  Cone c = cone_from_halfspaces(2, {rv({-1, 0}), rv({0, -1})}, {});
  REQUIRE(c.rays.size() == 2);
  CHECK(c.lineality.empty());
  CHECK(cone_contains(c, rv({1, 2})));
  CHECK(!cone_contains(c, rv({-1, 2})));
}

TEST_CASE("polar round trip is the identity on cones") {
  Cone c = cone_generated(2, {rv({1, 0}), rv({1, 1})}, {});
  Cone cc = polar(polar(c));
  CHECK(cone_equal(c, cc));
}

TEST_CASE("cone intersection of halfplanes") {
  Cone a = cone_generated(2, {rv({0, 1})}, {rv({1, 0})}); // upper halfplane
  Cone b = cone_generated(2, {rv({1, 0})}, {rv({0, 1})}); // right halfplane
  Cone c = cone_intersect(a, b);
  CHECK(cone_contains(c, rv({1, 1})));
  CHECK(!cone_contains(c, rv({-1, 1})));
  CHECK(!cone_contains(c, rv({1, -1})));
  // first quadrant
  CHECK(cone_equal(c, cone_generated(2, {rv({1, 0}), rv({0, 1})}, {})));
}

TEST_CASE("lineality is recovered") {
  // {d : d_1 = 0} = the x-axis line.
  Cone c = cone_from_halfspaces(2, {}, {rv({0, 1})});
  CHECK(c.rays.empty());
  REQUIRE(c.lineality.size() == 1);
  CHECK(cone_contains(c, rv({-3, 0})));
}

TEST_CASE("exact squared distance to a polyhedron") {
  auto [d2, nearest] = sqdist(rv({2, 2}), triangle());
  // Nearest point on {x+y=1} is (1/2, 1/2); distance^2 = 2*(3/2)^2 = 9/2.
  CHECK(d2 == Rat(9) / 2);
  CHECK(nearest == rv({0.5, 0.5}));

  auto [d0, n0] = sqdist(rv({0.25, 0.25}), triangle());
  CHECK(d0 == 0);
}

TEST_CASE("elimination projects exactly") {
  // {(x, y) : 0 <= y <= 1, x = y + 1} projected to x gives [1, 2].
  Polyhedron p;
  p.dim = 2;
  p.cons.push_back({rv({0, -1}), Rat(0), false});
  p.cons.push_back({rv({0, 1}), Rat(1), false});
  p.cons.push_back({rv({1, -1}), Rat(1), true});
  Polyhedron q = eliminate(p, {1});
  CHECK(q.dim == 1);
  CHECK(contains(q, rv({1})));
  CHECK(contains(q, rv({2})));
  CHECK(contains(q, rv({1.5})));
  CHECK(!contains(q, rv({0.99})));
  CHECK(!contains(q, rv({2.01})));
}

TEST_CASE("quadratic minimization over a polytope") {
  // min xy over the triangle: attained 0 on the legs; min of x^2+y^2 at 0.
  RatMat qxy = {{Rat(0), Rat(1) / 2}, {Rat(1) / 2, Rat(0)}};
  auto m1 = quad_min(triangle(), qxy, rv({0, 0}));
  REQUIRE(m1.has_value());
  CHECK(m1->value == 0);

  RatMat qid = {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}};
  auto m2 = quad_min(triangle(), qid, rv({0, 0}));
  REQUIRE(m2.has_value());
  CHECK(m2->value == 0);
  CHECK(m2->argmin == rv({0, 0}));

  // min x^2 + y^2 - x - y over the triangle: stationary at (1/2, 1/2),
  // value -1/2.
  auto m3 = quad_min(triangle(), qid, rv({-1, -1}));
  REQUIRE(m3.has_value());
  CHECK(m3->value == Rat(-1) / 2);

  // Indefinite: min -x^2 over [0,1]^2 is -1 at x = 1.
  Polyhedron sq;
  sq.dim = 2;
  sq.cons.push_back({rv({-1, 0}), Rat(0), false});
  sq.cons.push_back({rv({0, -1}), Rat(0), false});
  sq.cons.push_back({rv({1, 0}), Rat(1), false});
  sq.cons.push_back({rv({0, 1}), Rat(1), false});
  RatMat qneg = {{Rat(-1), Rat(0)}, {Rat(0), Rat(0)}};
  auto m4 = quad_min(sq, qneg, rv({0, 0}));
  REQUIRE(m4.has_value());
  CHECK(m4->value == Rat(-1));
}

TEST_CASE("relint point lands strictly inside") {
  auto z = relint_point(triangle());
  REQUIRE(z.has_value());
  CHECK((*z)[0] > 0);
  CHECK((*z)[1] > 0);
  CHECK((*z)[0] + (*z)[1] < 1);
}

TEST_CASE("map and translate") {
  // Image of the triangle under z -> 2z: inverse map is z/2.
  RatMat inv = {{Rat(1) / 2, Rat(0)}, {Rat(0), Rat(1) / 2}};
  Polyhedron big = map_poly(triangle(), inv);
  CHECK(contains(big, rv({1, 1})));
  CHECK(!contains(big, rv({1.5, 1.5})));

  Polyhedron moved = translate(triangle(), rv({10, 0}));
  CHECK(contains(moved, rv({10.5, 0.25})));
  CHECK(!contains(moved, rv({0.5, 0.25})));
}
