#pragma once

#include "monolab/opmodel.hpp"
#include "monolab/verdict.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace monolab::scene {

using monolab::Box;
using opmodel::OperatorPtr;

struct AnalysisRequest {
  std::string name;
  std::string kind;
  std::string op_name;
  GraphPoint point;
  bool has_point = false;
  double x_radius = 1.0;
  double v_radius = 1.0;
  int density = 7;
  double sigma = 0.0;
  double lambda = 1.0;
  std::vector<double> lambdas{0.5, 1.0, 2.0};
  std::vector<double> radii{0.5, 0.25, 0.125};
  std::optional<double> tol;
};

/// One parsed section, kept for the canonical echo.
struct RawSection {
  std::string kind; // "norm" | "operator" | "analysis"
  std::string name;
  std::vector<std::pair<std::string, std::string>> entries;
};

struct Scene {
  double norm_p = 2.0;
  std::optional<Vec> norm_weights;
  std::vector<std::pair<std::string, OperatorPtr>> operators;
  std::vector<AnalysisRequest> requests;
  std::vector<RawSection> raw;
  std::string source_text;

  NormSpec spec_for(int n) const;
  OperatorPtr find_operator(const std::string& name) const;
};

/// Parses the line-oriented scene format; throws Error with PARSE_ERROR /
/// UNKNOWN_OPERATOR / DIMENSION_MISMATCH diagnostics carrying line numbers.
Scene parse_scene(const std::string& text);

/// Canonical textual echo; parse(emit(parse(t))) is a fixed point.
std::string emit_scene(const Scene& s);

struct RunOptions {
  std::uint64_t seed = 0;
  std::optional<double> tol;
  std::string plot_dir; // empty: no plots
};

/// Executes the requests in declaration order; per-request failures are
/// embedded, never thrown. Returns the report document (canonical emission
/// via report::canonical_json).
nlohmann::json run_analyses(const Scene& s, const RunOptions& opt);

/// True when some request ended INCONCLUSIVE (CLI exit code 2).
bool any_inconclusive(const nlohmann::json& report);

} // namespace monolab::scene
