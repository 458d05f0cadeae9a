#include "monolab/kernels.hpp"

#include <algorithm>
#include <limits>
#include <utility>

namespace monolab::kernels {

namespace {

inline double inner_diff(const GraphPoint& a, const GraphPoint& b) {
  double s = 0.0;
  for (size_t k = 0; k < a.x.size(); ++k)
    s += (a.v[k] - b.v[k]) * (a.x[k] - b.x[k]);
  return s;
}

inline bool better_min(const PairScan& cand, const PairScan& cur) {
  if (!cur.found) return true;
  if (cand.value != cur.value) return cand.value < cur.value;
  if (cand.i != cur.i) return cand.i < cur.i;
  return cand.j < cur.j;
}

// Extremal value over one row i (pairs (i, j), j > i), for a generic pair
// functor returning {has_value, value}; minimizes when minimize is true.
template <typename F>
PairScan row_scan(const std::vector<GraphPoint>& pts, std::size_t i, F&& f,
                  bool minimize) {
  PairScan best;
  for (std::size_t j = i + 1; j < pts.size(); ++j) {
    auto [ok, val] = f(pts[i], pts[j]);
    if (!ok) continue;
    double v = minimize ? val : -val;
    PairScan cand{true, v, i, j};
    if (better_min(cand, best)) best = cand;
  }
  return best;
}

template <typename F>
PairScan full_scan_serial(const std::vector<GraphPoint>& pts, F&& f,
                          bool minimize) {
  PairScan best;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    PairScan row = row_scan(pts, i, f, minimize);
    if (row.found && better_min(row, best)) best = row;
  }
  if (best.found && !minimize) best.value = -best.value;
  return best;
}

template <typename F>
PairScan full_scan_parallel(const std::vector<GraphPoint>& pts, F&& f,
                            bool minimize) {
  const std::size_t n = pts.size();
  std::vector<PairScan> rows(n);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < static_cast<long long>(n); ++i)
    rows[i] = row_scan(pts, static_cast<std::size_t>(i), f, minimize);
  PairScan best;
  for (const auto& row : rows)
    if (row.found && better_min(row, best)) best = row;
  if (best.found && !minimize) best.value = -best.value;
  return best;
}

auto inner_fn() {
  return [](const GraphPoint& a, const GraphPoint& b) {
    return std::pair<bool, double>{true, inner_diff(a, b)};
  };
}

auto strong_fn(const NormSpec& spec) {
  return [&spec](const GraphPoint& a, const GraphPoint& b) {
    if (a.x == b.x) return std::pair<bool, double>{false, 0.0};
    Vec ja = normgeom::duality_map(a.x, spec);
    Vec jb = normgeom::duality_map(b.x, spec);
    double den = 0.0;
    for (size_t k = 0; k < a.x.size(); ++k)
      den += (ja[k] - jb[k]) * (a.x[k] - b.x[k]);
    if (den <= 0.0) return std::pair<bool, double>{false, 0.0};
    return std::pair<bool, double>{true, inner_diff(a, b) / den};
  };
}

auto hypo_fn() {
  return [](const GraphPoint& a, const GraphPoint& b) {
    if (a.x == b.x) return std::pair<bool, double>{false, 0.0};
    double den = 0.0;
    for (size_t k = 0; k < a.x.size(); ++k)
      den += (a.x[k] - b.x[k]) * (a.x[k] - b.x[k]);
    return std::pair<bool, double>{true, -inner_diff(a, b) / den};
  };
}

} // namespace

PairScan min_pair_inner_serial(const std::vector<GraphPoint>& pts) {
  return full_scan_serial(pts, inner_fn(), true);
}
PairScan min_pair_inner(const std::vector<GraphPoint>& pts) {
  return full_scan_parallel(pts, inner_fn(), true);
}

PairScan min_strong_ratio_serial(const std::vector<GraphPoint>& pts,
                                 const NormSpec& spec) {
  return full_scan_serial(pts, strong_fn(spec), true);
}
PairScan min_strong_ratio(const std::vector<GraphPoint>& pts,
                          const NormSpec& spec) {
  return full_scan_parallel(pts, strong_fn(spec), true);
}

PairScan max_hypo_ratio_serial(const std::vector<GraphPoint>& pts) {
  return full_scan_serial(pts, hypo_fn(), false);
}
PairScan max_hypo_ratio(const std::vector<GraphPoint>& pts) {
  return full_scan_parallel(pts, hypo_fn(), false);
}

std::vector<double> extension_margin_serial(const std::vector<GraphPoint>& cands,
                                            const std::vector<GraphPoint>& graph) {
  std::vector<double> out(cands.size(), 0.0);
  for (std::size_t c = 0; c < cands.size(); ++c) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& g : graph) m = std::min(m, inner_diff(cands[c], g));
    out[c] = m;
  }
  return out;
}

std::vector<double> extension_margin(const std::vector<GraphPoint>& cands,
                                     const std::vector<GraphPoint>& graph) {
  std::vector<double> out(cands.size(), 0.0);
#pragma omp parallel for schedule(static)
  for (long long c = 0; c < static_cast<long long>(cands.size()); ++c) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& g : graph)
      m = std::min(m, inner_diff(cands[static_cast<std::size_t>(c)], g));
    out[c] = m;
  }
  return out;
}

} // namespace monolab::kernels
