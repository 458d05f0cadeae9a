#include "monolab/catalog.hpp"

#include "monolab/error.hpp"

#include <cmath>

namespace monolab::catalog {

using geom::LinCon;
using geom::Polyhedron;
using geom::Rat;
using geom::RatVec;
using opmodel::ConvexSet;

namespace {

// One graph piece from equality rows v = A x + c and extra inequality rows
// on x alone (a.x <= b).
Polyhedron affine_piece(int n, const std::vector<std::vector<double>>& a,
                        const std::vector<double>& c,
                        const std::vector<std::pair<std::vector<double>, double>>&
                            x_cons = {}) {
  Polyhedron p;
  p.dim = 2 * n;
  for (int i = 0; i < n; ++i) {
    RatVec row(2 * n, Rat(0));
    row[n + i] = 1;
    for (int j = 0; j < n; ++j) row[j] = geom::to_rat(-a[i][j]);
    p.cons.push_back({row, geom::to_rat(c[i]), true});
  }
  for (const auto& [ax, b] : x_cons) {
    RatVec row(2 * n, Rat(0));
    for (int j = 0; j < n; ++j) row[j] = geom::to_rat(ax[j]);
    p.cons.push_back({row, geom::to_rat(b), false});
  }
  return p;
}

Polyhedron interval_set(double lo, double hi) {
  Polyhedron p;
  p.dim = 1;
  p.cons.push_back({{Rat(-1)}, geom::to_rat(-lo), false});
  p.cons.push_back({{Rat(1)}, geom::to_rat(hi), false});
  return p;
}

std::vector<double> get_or(const Params& params, const std::string& key,
                           std::vector<double> fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

} // namespace

Box box_at(const GraphPoint& pt, double x_radius, double v_radius) {
  return Box{pt.x, x_radius, pt.v, v_radius};
}

OperatorPtr builtin(const std::string& name, const Params& params) {
  if (name == "identity" || name == "neg_identity") {
    int n = static_cast<int>(get_or(params, "dim", {1})[0]);
    double s = name == "identity" ? 1.0 : -1.0;
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) a[i][i] = s;
    return opmodel::make_polyhedral_graph(
        n, {affine_piece(n, a, std::vector<double>(n, 0.0))});
  }
  if (name == "linear") {
    auto flat = get_or(params, "matrix", {2, 0, 0, 5});
    int n = static_cast<int>(std::lround(std::sqrt(double(flat.size()))));
    if (n * n != static_cast<int>(flat.size()))
      throw Error(ErrorCode::BadParams, "linear: matrix must be square");
    std::vector<std::vector<double>> a(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a[i][j] = flat[i * n + j];
    return opmodel::make_polyhedral_graph(
        n, {affine_piece(n, a, std::vector<double>(n, 0.0))});
  }
  if (name == "abs_subdifferential") {
    std::vector<Polyhedron> pieces;
    pieces.push_back(affine_piece(1, {{0}}, {-1}, {{{1}, 0}}));  // x<=0, v=-1
    pieces.push_back(affine_piece(1, {{0}}, {1}, {{{-1}, 0}}));  // x>=0, v=+1
    Polyhedron mid; // {0} x [-1, 1]
    mid.dim = 2;
    mid.cons.push_back({{Rat(1), Rat(0)}, Rat(0), true});
    mid.cons.push_back({{Rat(0), Rat(1)}, Rat(1), false});
    mid.cons.push_back({{Rat(0), Rat(-1)}, Rat(1), false});
    pieces.push_back(mid);
    return opmodel::make_polyhedral_graph(1, pieces);
  }
  if (name == "normal_cone_halfline") {
    Polyhedron hl;
    hl.dim = 1;
    hl.cons.push_back({{Rat(-1)}, Rat(0), false}); // x >= 0
    return opmodel::make_normal_cone({ConvexSet::Kind::Polyhedron, hl});
  }
  if (name == "normal_cone_box") {
    auto lo = get_or(params, "lo", {0});
    auto hi = get_or(params, "hi", {1});
    int n = static_cast<int>(lo.size());
    Polyhedron p;
    p.dim = n;
    for (int i = 0; i < n; ++i) {
      RatVec a(n, Rat(0));
      a[i] = -1;
      p.cons.push_back({a, geom::to_rat(-lo[i]), false});
      a[i] = 1;
      p.cons.push_back({a, geom::to_rat(hi[i]), false});
    }
    return opmodel::make_normal_cone({ConvexSet::Kind::Polyhedron, p});
  }
  if (name == "normal_cone_polyhedron") {
    auto b = get_or(params, "b", {0, 0, 1});
    auto flat = get_or(params, "a", {-1, 0, 0, -1, 1, 1}); // triangle
    int m = static_cast<int>(b.size());
    int n = static_cast<int>(flat.size()) / m;
    Polyhedron p;
    p.dim = n;
    for (int i = 0; i < m; ++i) {
      RatVec a(n);
      for (int j = 0; j < n; ++j) a[j] = geom::to_rat(flat[i * n + j]);
      p.cons.push_back({a, geom::to_rat(b[i]), false});
    }
    return opmodel::make_normal_cone({ConvexSet::Kind::Polyhedron, p});
  }
  if (name == "normal_cone_parabola")
    return opmodel::make_normal_cone({ConvexSet::Kind::ParabolaEpigraph, {}});
  if (name == "normal_cone_line") {
    Polyhedron line;
    line.dim = 2;
    line.cons.push_back({{Rat(0), Rat(1)}, Rat(0), true}); // y = 0
    return opmodel::make_normal_cone({ConvexSet::Kind::Polyhedron, line});
  }
  if (name == "example35_sum") {
    auto sum = opmodel::op_sum(builtin("normal_cone_parabola"),
                               builtin("normal_cone_line"));
    // The sum graph in closed form: {(0,0)} x ({0} x R); validated against
    // the composite evaluation by the test suite.
    Polyhedron line;
    line.dim = 4;
    line.cons.push_back({{Rat(1), Rat(0), Rat(0), Rat(0)}, Rat(0), true});
    line.cons.push_back({{Rat(0), Rat(1), Rat(0), Rat(0)}, Rat(0), true});
    line.cons.push_back({{Rat(0), Rat(0), Rat(1), Rat(0)}, Rat(0), true});
    auto op = std::make_shared<opmodel::Operator>(*sum);
    op->pieces_hint =
        std::make_shared<const std::vector<Polyhedron>>(std::vector<Polyhedron>{line});
    return op;
  }
  if (name == "singleton_graph") {
    auto pt = get_or(params, "point", {0, 0});
    int n = static_cast<int>(pt.size()) / 2;
    GraphPoint gp;
    gp.x.assign(pt.begin(), pt.begin() + n);
    gp.v.assign(pt.begin() + n, pt.end());
    return opmodel::make_sampled_graph(n, {gp});
  }
  if (name == "truncated_identity") {
    auto gap = get_or(params, "gap", {0.0, 0.5});
    std::vector<Polyhedron> pieces;
    pieces.push_back(affine_piece(1, {{1}}, {0}, {{{1}, gap[0]}}));   // x <= g0
    pieces.push_back(affine_piece(1, {{1}}, {0}, {{{-1}, -gap[1]}})); // x >= g1
    return opmodel::make_polyhedral_graph(1, pieces);
  }
  if (name == "relu_graph") {
    std::vector<Polyhedron> pieces;
    pieces.push_back(affine_piece(1, {{0}}, {0}, {{{1}, 0}}));  // x<=0, v=0
    pieces.push_back(affine_piece(1, {{1}}, {0}, {{{-1}, 0}})); // x>=0, v=x
    return opmodel::make_polyhedral_graph(1, pieces);
  }
  throw Error(ErrorCode::UnknownName, "no catalog operator named '" + name + "'");
}

namespace {

PointExpectation pe(Vec x, Vec v, Verdict::Status s, const char* prov,
                    double rx = 1.0, double rv = 1.0) {
  PointExpectation p;
  p.at = {std::move(x), std::move(v)};
  p.local_max = s;
  p.provenance = prov;
  p.x_radius = rx;
  p.v_radius = rv;
  return p;
}

constexpr auto kPass = Verdict::Status::Pass;
constexpr auto kFail = Verdict::Status::Fail;

} // namespace

CatalogEntry expected(const std::string& name) {
  CatalogEntry e;
  e.name = name;
  if (name == "identity") {
    e.dim = 1;
    e.description = "T(x) = x";
    e.points = {pe({0}, {0}, kPass, "exact"), pe({0.5}, {0.5}, kPass, "exact"),
                pe({-0.5}, {-0.5}, kPass, "exact")};
    e.strong_modulus = 1.0;
    e.hypo_modulus = 0.0;
    e.moduli_provenance = "exact";
    return e;
  }
  if (name == "linear") {
    e.dim = 2;
    e.description = "T(x) = diag(2,5) x";
    e.points = {pe({0, 0}, {0, 0}, kPass, "exact"),
                pe({0.5, 0.5}, {1, 2.5}, kPass, "exact"),
                pe({-0.5, 0.25}, {-1, 1.25}, kPass, "exact")};
    e.strong_modulus = 2.0; // min Rayleigh quotient over the grid
    e.hypo_modulus = 0.0;
    e.moduli_provenance = "derived";
    return e;
  }
  if (name == "neg_identity") {
    e.dim = 1;
    e.description = "T(x) = -x";
    e.points = {pe({0}, {0}, kFail, "exact"), pe({0.5}, {-0.5}, kFail, "exact"),
                pe({-0.5}, {0.5}, kFail, "exact")};
    e.strong_modulus = -1.0;
    e.hypo_modulus = 1.0;
    e.moduli_provenance = "derived";
    return e;
  }
  if (name == "abs_subdifferential") {
    e.dim = 1;
    e.description = "subdifferential of |x|";
    e.points = {pe({-1}, {-1}, kPass, "reference"), pe({0}, {0}, kPass, "reference"),
                pe({0}, {1}, kPass, "reference")};
    e.strong_modulus = 0.0;
    e.hypo_modulus = 0.0;
    e.moduli_provenance = "derived";
    return e;
  }
  if (name == "normal_cone_halfline") {
    e.dim = 1;
    e.description = "N(.;[0,inf))";
    e.points = {pe({0}, {0}, kPass, "reference"), pe({1}, {0}, kPass, "reference"),
                pe({0}, {-1}, kPass, "reference")};
    e.strong_modulus = 0.0;
    e.hypo_modulus = 0.0;
    e.moduli_provenance = "derived";
    return e;
  }
  if (name == "normal_cone_box") {
    e.dim = 1;
    e.description = "N(.;[0,1])";
    e.points = {pe({0}, {-0.5}, kPass, "reference"), pe({0.5}, {0}, kPass, "reference"),
                pe({1}, {0.5}, kPass, "reference")};
    return e;
  }
  if (name == "normal_cone_polyhedron") {
    e.dim = 2;
    e.description = "N(.;triangle {x>=0, y>=0, x+y<=1})";
    e.points = {pe({0.25, 0.25}, {0, 0}, kPass, "reference"),
                pe({0, 0.5}, {-1, 0}, kPass, "reference"),
                pe({0, 0}, {-1, -1}, kPass, "reference")};
    return e;
  }
  if (name == "normal_cone_parabola") {
    e.dim = 2;
    e.description = "N(.;{(a,b) : b >= a^2})";
    e.points = {pe({0, 0}, {0, 0}, kPass, "reference", 0.5, 0.5),
                pe({0, 0.5}, {0, 0}, kPass, "reference", 0.25, 0.5),
                pe({0, 0}, {0, -0.5}, kPass, "reference", 0.5, 0.5)};
    return e;
  }
  if (name == "normal_cone_line") {
    e.dim = 2;
    e.description = "N(.;R x {0})";
    e.points = {pe({0, 0}, {0, 0}, kPass, "reference"),
                pe({0.5, 0}, {0, 1}, kPass, "reference"),
                pe({-0.5, 0}, {0, -1}, kPass, "reference")};
    return e;
  }
  if (name == "example35_sum") {
    e.dim = 2;
    e.description = "N(.;parabola epigraph) + N(.;R x {0})";
    e.points = {pe({0, 0}, {0, 0}, kFail, "reference"),
                pe({0, 0}, {0, 0.5}, kFail, "derived"),
                pe({0, 0}, {0, -0.5}, kFail, "derived")};
    e.is_sum = true;
    e.qualification = false; // int(dom T2) is empty
    e.hypo_modulus = 0.0;
    e.moduli_provenance = "exact";
    return e;
  }
  if (name == "singleton_graph") {
    e.dim = 1;
    e.description = "graph {(0,0)} only";
    e.points = {pe({0}, {0}, kFail, "derived")};
    return e;
  }
  if (name == "truncated_identity") {
    e.dim = 1;
    e.description = "identity with the graph removed on (0, 0.5)";
    e.points = {pe({-1}, {-1}, kPass, "derived", 0.5, 0.5),
                pe({0}, {0}, kFail, "derived", 0.25, 0.25),
                pe({0.5}, {0.5}, kFail, "derived", 0.25, 0.25)};
    return e;
  }
  if (name == "relu_graph") {
    e.dim = 1;
    e.description = "graph of max(0, x)";
    e.points = {pe({-1}, {0}, kPass, "reference"), pe({0}, {0}, kPass, "reference"),
                pe({1}, {1}, kPass, "reference")};
    e.strong_modulus = 0.0;
    e.hypo_modulus = 0.0;
    e.moduli_provenance = "derived";
    return e;
  }
  throw Error(ErrorCode::UnknownName, "no catalog entry named '" + name + "'");
}

std::vector<std::string> list_names() {
  return {"identity",
          "linear",
          "neg_identity",
          "abs_subdifferential",
          "normal_cone_halfline",
          "normal_cone_box",
          "normal_cone_polyhedron",
          "normal_cone_parabola",
          "normal_cone_line",
          "example35_sum",
          "singleton_graph",
          "truncated_identity",
          "relu_graph"};
}

} // namespace monolab::catalog
