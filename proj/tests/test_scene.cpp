#include "monolab/scene.hpp"

#include "monolab/error.hpp"
#include "monolab/plot.hpp"
#include "monolab/report.hpp"

#include <doctest.h>

using namespace monolab;
using namespace monolab::scene;

namespace {

const char* kMinimalScene = R"(# minimal scene
[norm]
p = 2

[operator T]
kind = catalog
name = identity

[analysis mono]
op = T
kind = monotone_witness
point = 0 0
x_radius = 1
v_radius = 1
density = 5
)";

const char* kExample35Scene = R"([norm]
p = 2

[operator P]
kind = catalog
name = normal_cone_parabola

[operator L]
kind = catalog
name = normal_cone_line

[operator T]
kind = sum
of = P L

[analysis extension]
op = T
kind = typeA_witness_search
point = 0 0 0 0
x_radius = 1
v_radius = 1
density = 5

[analysis psd]
op = T
kind = psd_criterion
point = 0 0 0 0
sigma = 0
x_radius = 1
v_radius = 1
density = 5
)";

} // namespace

TEST_CASE("minimal scene parses into one operator and one request") {
  Scene sc = parse_scene(kMinimalScene);
  CHECK(sc.operators.size() == 1);
  CHECK(sc.requests.size() == 1);
  CHECK(sc.requests[0].kind == "monotone_witness");
}

TEST_CASE("undefined operator reference names the culprit") {
  const char* bad = R"([operator A]
kind = catalog
name = identity

[analysis x]
op = T9
kind = monotone_witness
)";
  try {
    parse_scene(bad);
    FAIL("expected UNKNOWN_OPERATOR");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownOperator);
    CHECK(std::string(e.what()).find("T9") != std::string::npos);
  }
}

TEST_CASE("parse errors carry line information") {
  try {
    parse_scene("[operator A]\nkind catalog\n");
    FAIL("expected PARSE_ERROR");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("example 3.5 scene: three operators, two requests") {
  Scene sc = parse_scene(kExample35Scene);
  CHECK(sc.operators.size() == 3);
  CHECK(sc.requests.size() == 2);
}

TEST_CASE("scene echo round trip is a fixed point") {
  for (const char* text : {kMinimalScene, kExample35Scene}) {
    std::string once = emit_scene(parse_scene(text));
    std::string twice = emit_scene(parse_scene(once));
    CHECK(once == twice);
  }
}

TEST_CASE("run_analyses embeds verdicts and never aborts on errors") {
  Scene sc = parse_scene(kMinimalScene);
  RunOptions opt;
  auto rep = run_analyses(sc, opt);
  CHECK(rep["schema"] == "monolab-report/1");
  REQUIRE(rep["requests"].size() == 1);
  CHECK(rep["requests"][0]["verdict"]["status"] == "PASS");

  // A failing request is embedded, not thrown.
  const char* with_bad = R"([operator T]
kind = catalog
name = identity

[analysis broken]
op = T
kind = isc_probe
point = 0 0.5
)";
  auto rep2 = run_analyses(parse_scene(with_bad), opt);
  REQUIRE(rep2["requests"].size() == 1);
  CHECK(rep2["requests"][0].contains("error"));
  CHECK(rep2["requests"][0]["error_code"] == "POINT_NOT_IN_SET");
}

TEST_CASE("reports are byte-identical across runs") {
  Scene sc = parse_scene(kExample35Scene);
  RunOptions opt;
  auto a = report::canonical_json(run_analyses(sc, opt));
  auto b = report::canonical_json(run_analyses(sc, opt));
  CHECK(a == b);
  CHECK(a.find("\"schema\":\"monolab-report/1\"") != std::string::npos);
}

TEST_CASE("canonical json formatting") {
  nlohmann::json j;
  j["b"] = 1.5;
  j["a"] = nlohmann::json::array({1, 2});
  j["s"] = "x\"y";
  CHECK(report::canonical_json(j) == "{\"a\":[1,2],\"b\":1.5,\"s\":\"x\\\"y\"}");
  nlohmann::json third = 1.0 / 3.0;
  CHECK(report::canonical_json(third) == "0.33333333333333331");
}

TEST_CASE("inline polyhedral and affine operators") {
  const char* inline_scene = R"([operator G]
kind = polyhedral_graph
dim = 1
piece = 1 -1 = 0 ; 1 0 <= 0
piece = 1 -1 = 0 ; -1 0 <= -0.5

[operator A]
kind = affine
matrix = 2

[analysis mono]
op = G
kind = monotone_witness
point = -1 -1
x_radius = 1
v_radius = 1
)";
  Scene sc = parse_scene(inline_scene);
  CHECK(sc.operators.size() == 2);
  auto rep = run_analyses(sc, RunOptions{});
  CHECK(rep["requests"][0]["verdict"]["status"] == "PASS");
}

TEST_CASE("composite scene operators: shift, scale, localize, inverse") {
  const char* text = R"([operator T]
kind = catalog
name = identity

[operator S]
kind = shift_j
of = T
sigma = 1

[operator H]
kind = scale
of = S
factor = 0.5

[operator I]
kind = inverse
of = H

[operator L]
kind = localize
of = T
x_radius = 0.5
v_radius = 0.5

[analysis strong]
op = S
kind = strong_modulus
point = 0 0
x_radius = 1
v_radius = 3
density = 5
)";
  Scene sc = parse_scene(text);
  auto rep = run_analyses(sc, RunOptions{});
  auto& v = rep["requests"][0]["verdict"];
  CHECK(v["status"] == "PASS");
  CHECK(v["moduli"]["sigma_hat"].get<double>() == doctest::Approx(2.0));
}

TEST_CASE("deterministic svg output") {
  auto op = scene::parse_scene(kMinimalScene).operators[0].second;
  Box b{{0.0}, 1.0, {0.0}, 1.0};
  plot::PlotOptions popt;
  NormSpec e1 = NormSpec::euclidean(1);
  auto svg1 = plot::render_plot(*op, b, popt, e1);
  auto svg2 = plot::render_plot(*op, b, popt, e1);
  CHECK(svg1 == svg2);
  CHECK(svg1.find("<svg") == 0);
  CHECK(svg1.find("width=\"800\" height=\"600\"") != std::string::npos);
  CHECK(svg1.find("<line") != std::string::npos); // the diagonal
}

TEST_CASE("shear overlay tilts the diagonal to slope 2") {
  Scene sc = parse_scene(kMinimalScene);
  auto op = sc.operators[0].second;
  Box b{{0.0}, 1.0, {0.0}, 3.0};
  plot::PlotOptions popt;
  popt.shear_sigma = 1.0;
  NormSpec e1 = NormSpec::euclidean(1);
  auto svg = plot::render_plot(*op, b, popt, e1);
  // Two polylines: the graph and its sheared image (dashed).
  CHECK(svg.find("stroke-dasharray") != std::string::npos);
}
