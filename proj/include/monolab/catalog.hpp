#pragma once

#include "monolab/opmodel.hpp"
#include "monolab/verdict.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace monolab::catalog {

using monolab::Box;
using opmodel::OperatorPtr;

using Params = std::map<std::string, std::vector<double>>;

/// Expected analysis outcome at one reference graph point. Provenance:
/// "exact" (closed form), "derived" (independent computation), "reference"
/// (established fact about the instance).
struct PointExpectation {
  GraphPoint at;
  Verdict::Status local_max = Verdict::Status::Pass;
  double x_radius = 1.0;
  double v_radius = 1.0;
  std::string provenance = "exact";
};

struct CatalogEntry {
  std::string name;
  std::string description;
  int dim = 1;
  std::vector<PointExpectation> points;
  double box_x_radius = 1.0; // default box radii for whole-entry analyses
  double box_v_radius = 1.0;
  std::optional<double> strong_modulus; // sampled on the default box
  std::optional<double> hypo_modulus;
  std::string moduli_provenance;
  bool is_sum = false;
  std::optional<bool> qualification; // dom T1 cap int(dom T2) nonempty
};

/// Instantiates a named operator. Supported names: identity, linear,
/// neg_identity, abs_subdifferential, normal_cone_halfline, normal_cone_box,
/// normal_cone_polyhedron, normal_cone_parabola, normal_cone_line,
/// example35_sum, singleton_graph, truncated_identity, relu_graph.
OperatorPtr builtin(const std::string& name, const Params& params = {});

/// Ground-truth expectations consumed by the acceptance suite.
CatalogEntry expected(const std::string& name);

std::vector<std::string> list_names();

/// Box centered at a reference graph point.
Box box_at(const GraphPoint& pt, double x_radius, double v_radius);

} // namespace monolab::catalog
