#pragma once

#include "monolab/opmodel.hpp"

#include <optional>
#include <string>

namespace monolab::plot {

using monolab::Box;
using opmodel::Operator;

struct PlotOptions {
  std::optional<double> shear_sigma;       // overlay the vertical-shear image
  std::vector<GraphPoint> probe_points;    // dots
  std::vector<GraphPoint> witness_points;  // crosses
  int samples = 33;
  // For n >= 2: graph-space coordinates to project onto (x_i vs v_j).
  int slice_x_axis = 0;
  int slice_v_axis = 0;
};

/// Deterministic SVG (fixed 800x600 canvas, 40px margins) of gph op within
/// the box. n = 1 draws exact piece segments; higher dimensions draw the
/// selected 2-D coordinate slice as a sampled scatter.
std::string render_plot(const Operator& op, const Box& box,
                        const PlotOptions& opt, const NormSpec& spec);

} // namespace monolab::plot
