#include "monolab/opmodel.hpp"

#include "monolab/error.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace monolab;
using namespace monolab::opmodel;
using geom::Rat;
using geom::RatVec;

namespace {

OperatorPtr identity_op(int n = 1) {
  geom::Polyhedron p;
  p.dim = 2 * n;
  for (int i = 0; i < n; ++i) {
    RatVec row(2 * n, Rat(0));
    row[i] = -1;
    row[n + i] = 1;
    p.cons.push_back({row, Rat(0), true}); // v = x
  }
  return make_polyhedral_graph(n, {p});
}

OperatorPtr halfline_cone() { // N(.;[0, inf)) on R
  geom::Polyhedron hl;
  hl.dim = 1;
  hl.cons.push_back({{Rat(-1)}, Rat(0), false});
  return make_normal_cone({ConvexSet::Kind::Polyhedron, hl});
}

OperatorPtr parabola_cone() {
  return make_normal_cone({ConvexSet::Kind::ParabolaEpigraph, {}});
}

OperatorPtr line_cone() { // N(.;R x {0})
  geom::Polyhedron line;
  line.dim = 2;
  line.cons.push_back({{Rat(0), Rat(1)}, Rat(0), true});
  return make_normal_cone({ConvexSet::Kind::Polyhedron, line});
}

Box box1(double r = 1.0, double rv = 1.0) { return Box{{0.0}, r, {0.0}, rv}; }

Box box2(double r = 1.0, double rv = 1.0) {
  return Box{{0.0, 0.0}, r, {0.0, 0.0}, rv};
}

const NormSpec kE1 = NormSpec::euclidean(1);
const NormSpec kE2 = NormSpec::euclidean(2);

bool has_point(const std::vector<Vec>& pts, const Vec& p, double tol = 1e-12) {
  for (const auto& q : pts) {
    double d = 0;
    for (size_t i = 0; i < p.size(); ++i) d = std::max(d, std::abs(q[i] - p[i]));
    if (d <= tol) return true;
  }
  return false;
}

} // namespace

TEST_CASE("normal cone of the halfline: endpoint slice and interior point") {
  auto op = halfline_cone();
  Box b = box1(5.0, 5.0);
  ValueSet at0 = evaluate(*op, {0.0}, b, 1e-10, kE1);
  REQUIRE(!at0.empty());
  CHECK(at0.contains({-5.0}, 1e-10, kE1));
  CHECK(at0.contains({0.0}, 1e-10, kE1));
  CHECK(at0.contains({-2.5}, 1e-10, kE1));
  CHECK(!at0.contains({0.5}, 1e-10, kE1));
  CHECK(!at0.contains({-5.5}, 1e-10, kE1)); // clipped by the v-ball

  ValueSet at1 = evaluate(*op, {1.0}, b, 1e-10, kE1);
  REQUIRE(at1.finite());
  auto pts = at1.points();
  REQUIRE(pts.size() == 1);
  CHECK(pts[0][0] == 0.0);

  ValueSet off = evaluate(*op, {-1.0}, b, 1e-10, kE1);
  CHECK(off.empty());
}

TEST_CASE("sum of identity and halfline cone at 0 is the full negative slice") {
  auto sum = op_sum(identity_op(), halfline_cone());
  Box b = box1(5.0, 5.0);
  ValueSet at0 = evaluate(*sum, {0.0}, b, 1e-10, kE1);
  CHECK(at0.contains({-5.0}, 1e-10, kE1));
  CHECK(at0.contains({0.0}, 1e-10, kE1));
  CHECK(!at0.contains({0.5}, 1e-10, kE1));

  ValueSet at2 = evaluate(*sum, {2.0}, b, 1e-10, kE1);
  auto pts = at2.points();
  REQUIRE(pts.size() == 1);
  CHECK(pts[0][0] == 2.0); // 2 + 0
}

TEST_CASE("example 3.5 sum: line slice at the origin, empty elsewhere") {
  auto sum = op_sum(parabola_cone(), line_cone());
  Box b = box2();
  ValueSet at0 = evaluate(*sum, {0.0, 0.0}, b, 1e-10, kE2);
  REQUIRE(!at0.empty());
  CHECK(at0.contains({0.0, 1.0}, 1e-10, kE2));
  CHECK(at0.contains({0.0, -1.0}, 1e-10, kE2));
  CHECK(at0.contains({0.0, 0.0}, 1e-10, kE2));
  CHECK(!at0.contains({0.5, 0.0}, 1e-10, kE2));

  ValueSet off = evaluate(*sum, {0.1, 0.01}, b, 1e-10, kE2);
  CHECK(off.empty());
}

TEST_CASE("parabola cone evaluation: interior, boundary ray, outside") {
  auto op = parabola_cone();
  Box b = box2(2.0, 2.0);
  ValueSet interior = evaluate(*op, {0.0, 1.0}, b, 1e-10, kE2);
  auto pts = interior.points();
  REQUIRE(pts.size() == 1);
  CHECK(pts[0] == Vec{0.0, 0.0});

  ValueSet boundary = evaluate(*op, {1.0, 1.0}, b, 1e-10, kE2);
  REQUIRE(!boundary.empty());
  CHECK(boundary.contains({1.0, -0.5}, 1e-10, kE2)); // 0.5 * (2, -1)
  CHECK(!boundary.contains({1.0, 0.5}, 1e-10, kE2));
  CHECK(boundary.contains({0.0, 0.0}, 1e-10, kE2));

  CHECK(evaluate(*op, {1.0, 0.5}, b, 1e-10, kE2).empty());
}

TEST_CASE("op_inverse twice reproduces the graph on any box") {
  auto op = halfline_cone();
  auto twice = op_inverse(op_inverse(op));
  Box b = box1(2.0, 2.0);
  auto g1 = sample_graph(*op, b, 5, kE1);
  auto g2 = sample_graph(*twice, b, 5, kE1);
  REQUIRE(g1.points.size() == g2.points.size());
  for (size_t i = 0; i < g1.points.size(); ++i) {
    CHECK(g1.points[i].x == g2.points[i].x);
    CHECK(g1.points[i].v == g2.points[i].v);
  }
}

TEST_CASE("op_shift_J on the identity: x + sigma x") {
  auto shifted = op_shift_J(identity_op(), 1.0, kE1);
  Box b = Box{{2.0}, 1.0, {4.0}, 1.0};
  auto pts = evaluate(*shifted, {2.0}, b, 1e-10, kE1).points();
  REQUIRE(pts.size() == 1);
  CHECK(pts[0][0] == 4.0);
}

TEST_CASE("shift round trip reproduces samples to 1e-12") {
  auto op = halfline_cone();
  auto round = op_shift_J(op_shift_J(op, 0.7, kE1), -0.7, kE1);
  Box b = box1(2.0, 2.0);
  auto g1 = sample_graph(*op, b, 5, kE1);
  auto g2 = sample_graph(*round, b, 5, kE1);
  REQUIRE(g1.points.size() == g2.points.size());
  for (size_t i = 0; i < g1.points.size(); ++i) {
    CHECK(std::abs(g1.points[i].x[0] - g2.points[i].x[0]) <= 1e-12);
    CHECK(std::abs(g1.points[i].v[0] - g2.points[i].v[0]) <= 1e-12);
  }
}

TEST_CASE("localization equals filtering the parent samples") {
  auto op = halfline_cone();
  Box small{{0.0}, 0.5, {0.0}, 0.5};
  auto local = op_localize(op, small);
  auto gl = sample_graph(*local, small, 5, kE1);
  auto gp = sample_graph(*op, small, 5, kE1);
  REQUIRE(gl.points.size() == gp.points.size());
  for (size_t i = 0; i < gl.points.size(); ++i) {
    CHECK(gl.points[i].x == gp.points[i].x);
    CHECK(gl.points[i].v == gp.points[i].v);
  }
  // Outside its own box the localization is empty.
  Box wide = box1(3.0, 3.0);
  CHECK(evaluate(*local, {1.0}, wide, 1e-10, kE1).empty());
}

TEST_CASE("sample_graph: identity grid includes the diagonal corners") {
  auto g = sample_graph(*identity_op(), box1(), 3, kE1);
  std::vector<Vec> flat;
  for (const auto& p : g.points) flat.push_back({p.x[0], p.v[0]});
  CHECK(has_point(flat, {-1.0, -1.0}));
  CHECK(has_point(flat, {0.0, 0.0}));
  CHECK(has_point(flat, {1.0, 1.0}));
}

TEST_CASE("sample_graph: halfline cone includes both branch directions") {
  auto g = sample_graph(*halfline_cone(), box1(), 3, kE1);
  std::vector<Vec> flat;
  for (const auto& p : g.points) flat.push_back({p.x[0], p.v[0]});
  CHECK(has_point(flat, {0.0, 0.0}));
  CHECK(has_point(flat, {0.0, -1.0}));
  CHECK(has_point(flat, {1.0, 0.0}));
}

TEST_CASE("sample_graph: example 3.5 samples lie on the value line") {
  auto sum = op_sum(parabola_cone(), line_cone());
  auto g = sample_graph(*sum, box2(), 5, kE2);
  REQUIRE(!g.points.empty());
  for (const auto& p : g.points) {
    CHECK(p.x[0] == 0.0);
    CHECK(p.x[1] == 0.0);
    CHECK(p.v[0] == 0.0);
    CHECK(std::abs(p.v[1]) <= 1.0 + 1e-12);
  }
}

TEST_CASE("sampled pairs re-validate under evaluate") {
  auto ops = {halfline_cone(), op_sum(identity_op(), halfline_cone())};
  for (const auto& op : ops) {
    Box b = box1(2.0, 2.0);
    auto g = sample_graph(*op, b, 5, kE1);
    for (const auto& p : g.points) {
      auto vs = evaluate(*op, p.x, b, 1e-10, kE1);
      CHECK(vs.contains(p.v, 1e-10, kE1));
    }
  }
}

TEST_CASE("graph-inclusion lemma on finite sampled graphs") {
  // T and S sampled with dom T inside dom S; R := gph(T - S) pointwise.
  // Then gph T lies inside gph(R + S) on the sample.
  std::vector<GraphPoint> t_pts = {{{0.0}, {1.0}}, {{1.0}, {2.0}}};
  std::vector<GraphPoint> s_pts = {{{0.0}, {0.5}}, {{1.0}, {1.0}}, {{2.0}, {0.0}}};
  auto T = make_sampled_graph(1, t_pts);
  auto S = make_sampled_graph(1, s_pts);
  auto R = op_sum(T, op_scale(S, -1.0));
  auto RS = op_sum(R, S);
  Box b = box1(3.0, 3.0);
  for (const auto& p : t_pts) {
    auto vs = evaluate(*RS, p.x, b, 1e-10, kE1);
    CHECK(vs.contains(p.v, 1e-10, kE1));
  }
}

TEST_CASE("transvection maps piece vertices onto the shifted-inverse graph") {
  // Vertices of gph T within a window map exactly onto the vertices of
  // gph (T + sigma I)^{-1} within the transformed window.
  auto op = halfline_cone();
  double sigma = 2.0;
  auto target = op_inverse(op_sum(op, op_scale(identity_op(), sigma)));
  auto pieces = polyhedral_pieces(*op);
  auto target_pieces = polyhedral_pieces(*target);
  REQUIRE(pieces);
  REQUIRE(target_pieces);

  geom::Polyhedron hull = box_hull(box1(4.0, 4.0), 1);
  std::vector<RatVec> lhs;
  for (const auto& p : *pieces) {
    auto clipped = geom::intersect(p, hull);
    if (geom::is_empty(clipped)) continue;
    for (auto z : geom::v_rep(clipped).vertices)
      lhs.push_back({z[1] + geom::to_rat(sigma) * z[0], z[0]});
  }
  std::sort(lhs.begin(), lhs.end());
  lhs.erase(std::unique(lhs.begin(), lhs.end()), lhs.end());

  // Image of the window under Delta_sigma: {(u, w) : |w| <= 4, |u - sigma w| <= 4}.
  geom::Polyhedron img_hull;
  img_hull.dim = 2;
  img_hull.cons.push_back({{Rat(0), Rat(1)}, Rat(4), false});
  img_hull.cons.push_back({{Rat(0), Rat(-1)}, Rat(4), false});
  img_hull.cons.push_back({{Rat(1), geom::to_rat(-sigma)}, Rat(4), false});
  img_hull.cons.push_back({{Rat(-1), geom::to_rat(sigma)}, Rat(4), false});
  std::vector<RatVec> rhs;
  for (const auto& p : *target_pieces) {
    auto clipped = geom::intersect(p, img_hull);
    if (geom::is_empty(clipped)) continue;
    for (auto z : geom::v_rep(clipped).vertices) rhs.push_back(z);
  }
  std::sort(rhs.begin(), rhs.end());
  rhs.erase(std::unique(rhs.begin(), rhs.end()), rhs.end());
  CHECK(lhs == rhs);
}

TEST_CASE("dimension mismatches are rejected") {
  CHECK_THROWS_AS(op_sum(identity_op(1), parabola_cone()), Error);
}

TEST_CASE("scaling by zero collapses values onto the domain") {
  auto z = op_scale(halfline_cone(), 0.0);
  Box b = box1(2.0, 2.0);
  auto pts = evaluate(*z, {0.0}, b, 1e-10, kE1).points();
  REQUIRE(pts.size() == 1);
  CHECK(pts[0][0] == 0.0);
  CHECK(evaluate(*z, {-1.0}, b, 1e-10, kE1).empty());
}
