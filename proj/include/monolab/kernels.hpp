#pragma once

#include "monolab/normgeom.hpp"

#include <cstddef>
#include <vector>

namespace monolab::kernels {

/// Result of an extremal scan over ordered point pairs. Ties are broken by
/// lexicographically smallest (i, j), so serial and parallel scans agree
/// bitwise for any thread count.
struct PairScan {
  bool found = false;
  double value = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
};

// min over pairs i < j of <v_i - v_j, x_i - x_j>
PairScan min_pair_inner_serial(const std::vector<GraphPoint>& pts);
PairScan min_pair_inner(const std::vector<GraphPoint>& pts);

// min over pairs with x_i != x_j of <dv, dx> / <J(x_i) - J(x_j), dx>
PairScan min_strong_ratio_serial(const std::vector<GraphPoint>& pts,
                                 const NormSpec& spec);
PairScan min_strong_ratio(const std::vector<GraphPoint>& pts,
                          const NormSpec& spec);

// max over pairs with x_i != x_j of -<dv, dx> / ||dx||^2 (Euclidean)
PairScan max_hypo_ratio_serial(const std::vector<GraphPoint>& pts);
PairScan max_hypo_ratio(const std::vector<GraphPoint>& pts);

/// For each candidate pair, the min over graph samples of
/// <cand.v - y.v, cand.x - y.x> (the monotone-extension margin).
std::vector<double> extension_margin_serial(const std::vector<GraphPoint>& cands,
                                            const std::vector<GraphPoint>& graph);
std::vector<double> extension_margin(const std::vector<GraphPoint>& cands,
                                     const std::vector<GraphPoint>& graph);

} // namespace monolab::kernels
