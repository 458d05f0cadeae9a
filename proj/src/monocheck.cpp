#include "monolab/monocheck.hpp"

#include "monolab/error.hpp"
#include "monolab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace monolab {

const char* status_name(Verdict::Status s) {
  switch (s) {
    case Verdict::Status::Pass: return "PASS";
    case Verdict::Status::Fail: return "FAIL";
    case Verdict::Status::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

namespace monocheck {

using geom::Rat;
using geom::RatVec;

namespace {

Vec vsub_d(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

constexpr double kUnboundedRatio = 1e12;

} // namespace

Verdict monotone_witness(const SampledGraph& g, const NormSpec& spec,
                         double tol) {
  (void)spec; // the pairing is norm-independent
  if (g.points.empty()) throw Error(ErrorCode::EmptyGraph, "monotone_witness");
  Verdict v;
  v.name = "monotone_witness";
  v.resolution.tol = tol;
  auto scan = kernels::min_pair_inner(g.points);
  if (!scan.found || scan.value >= -tol) {
    v.status = Verdict::Status::Pass;
    v.certified = true; // exhaustive over the given sample
    v.value = scan.found ? scan.value : 0.0;
  } else {
    v.status = Verdict::Status::Fail;
    v.certified = true;
    v.value = scan.value;
    v.witness_pair = {g.points[scan.i], g.points[scan.j]};
  }
  return v;
}

Verdict strong_modulus(const SampledGraph& g, const NormSpec& spec,
                       double tol) {
  if (g.points.size() < 2)
    throw Error(ErrorCode::Degenerate, "strong_modulus needs >= 2 points");
  Verdict v;
  v.name = "strong_modulus";
  v.resolution.tol = tol;
  auto scan = kernels::min_strong_ratio(g.points, spec);
  if (!scan.found) {
    v.status = Verdict::Status::Inconclusive;
    v.detail = "DEGENERATE: all sample points share one x";
    return v;
  }
  auto mono = kernels::min_pair_inner(g.points);
  if (mono.found && mono.value < -tol) {
    v.status = Verdict::Status::Fail;
    v.value = mono.value;
    v.witness_pair = {g.points[mono.i], g.points[mono.j]};
    v.detail = "negative pairing; the sample is not monotone";
    return v;
  }
  v.status = Verdict::Status::Pass;
  v.sigma_hat = std::max(0.0, scan.value);
  v.witness_pair = {g.points[scan.i], g.points[scan.j]};
  return v;
}

Verdict hypo_modulus(const SampledGraph& g, double tol) {
  if (g.points.empty()) throw Error(ErrorCode::EmptyGraph, "hypo_modulus");
  Verdict v;
  v.name = "hypo_modulus";
  v.resolution.tol = tol;
  auto scan = kernels::max_hypo_ratio(g.points);
  if (!scan.found) {
    v.status = Verdict::Status::Pass;
    v.r_hat = 0.0;
    v.detail = "no pairs with distinct x";
    return v;
  }
  if (scan.value > kUnboundedRatio) {
    v.status = Verdict::Status::Inconclusive;
    v.witness_pair = {g.points[scan.i], g.points[scan.j]};
    v.detail = "UNBOUNDED: pairing ratio diverges along the witnessed pair";
    return v;
  }
  v.status = Verdict::Status::Pass;
  v.r_hat = std::max(0.0, scan.value);
  v.witness_pair = {g.points[scan.i], g.points[scan.j]};
  return v;
}

Verdict isc_probe(const Operator& op, const GraphPoint& pt,
                  const std::vector<double>& radii, const NormSpec& spec,
                  int density, double tol) {
  Verdict v;
  v.name = "isc_probe";
  v.resolution.density = density;
  v.resolution.tol = tol;
  v.resolution.radii = radii;
  const int n = op.dim();

  {
    Box home{pt.x, 1.0, pt.v, 1.0};
    auto at = opmodel::evaluate(op, pt.x, home, tol, spec);
    if (!at.contains(pt.v, std::max(tol, 1e-9), spec))
      throw Error(ErrorCode::PointNotInSet, "isc_probe: pt not on the graph");
  }

  int skipped_off_domain = 0;
  for (double rho : radii) {
    double eps = std::max(1e-6, rho);
    Box probe{pt.x, rho, pt.v, std::max(1.0, 10 * eps)};
    std::vector<double> axis;
    for (int k = 0; k < density; ++k)
      axis.push_back(-1.0 + 2.0 * k / (density - 1));
    std::vector<int> idx(n, 0);
    while (true) {
      Vec x(n);
      for (int i = 0; i < n; ++i) x[i] = pt.x[i] + rho * axis[idx[i]];
      if (normgeom::norm(vsub_d(x, pt.x), spec) <= rho * (1 + 1e-12)) {
        auto vs = opmodel::evaluate(op, x, probe, tol, spec);
        if (vs.empty()) {
          ++skipped_off_domain;
        } else {
          double d = vs.distance(pt.v, spec);
          if (d > eps) {
            v.status = Verdict::Status::Fail;
            v.certified = true;
            v.witness_point = GraphPoint{x, pt.v};
            v.value = d;
            v.detail = "no value near v-bar above x (certified counterexample)";
            return v;
          }
        }
      }
      int i = 0;
      while (i < n && ++idx[i] == density) idx[i++] = 0;
      if (i == n) break;
    }
  }
  v.status = Verdict::Status::Pass;
  v.detail = "resolution-limited";
  if (skipped_off_domain > 0)
    v.resolution.note =
        "off-domain samples skipped: " + std::to_string(skipped_off_domain);
  return v;
}

namespace {

// Exact lower bound of <x* - y*, x - y> over (y, y*) in one bounded piece.
std::optional<double> piece_margin(const geom::Polyhedron& piece, int n,
                                   const GraphPoint& cand) {
  // Quadratic in z = (y, y*): <x*, x> - <z_v, x> - <x*, z_x> + <z_v, z_x>.
  const int d = 2 * n;
  geom::RatMat q(d, RatVec(d, Rat(0)));
  for (int i = 0; i < n; ++i) {
    q[i][n + i] = Rat(1) / 2;
    q[n + i][i] = Rat(1) / 2;
  }
  RatVec c(d, Rat(0));
  RatVec xs = geom::to_rat(cand.x), vs = geom::to_rat(cand.v);
  for (int i = 0; i < n; ++i) {
    c[i] = -vs[i];
    c[n + i] = -xs[i];
  }
  auto qm = geom::quad_min(piece, q, c);
  if (!qm) return std::nullopt;
  Rat constant = geom::dot(vs, xs);
  return geom::to_double(qm->value + constant);
}

} // namespace

Verdict typeA_witness_search(const Operator& op, const GraphPoint& pt,
                             const Box& box, int density, const NormSpec& spec,
                             double tol) {
  const int n = op.dim();
  box.validate(n);
  Verdict v;
  v.name = "typeA_witness_search";
  v.resolution.density = density;
  v.resolution.tol = tol;

  SampledGraph g = opmodel::sample_graph(op, box, density, spec); // EMPTY_GRAPH
  auto pieces = opmodel::polyhedral_pieces(op);

  // Candidate grid over the open interior of the box: extension points on
  // the closed-ball boundary do not refute maximality for any open
  // neighborhood inside the box.
  std::vector<double> axis;
  for (int k = 0; k < density; ++k)
    axis.push_back(-1.0 + 2.0 * k / (density - 1));
  std::vector<Vec> xs, vs;
  std::vector<int> idx(n, 0);
  auto enumerate = [&](const Vec& center, double radius, std::vector<Vec>& out) {
    std::fill(idx.begin(), idx.end(), 0);
    while (true) {
      Vec p(n);
      for (int i = 0; i < n; ++i) p[i] = center[i] + radius * axis[idx[i]];
      if (normgeom::norm(vsub_d(p, center), spec) < radius * (1 - 1e-9))
        out.push_back(p);
      int i = 0;
      while (i < n && ++idx[i] == density) idx[i++] = 0;
      if (i == n) break;
    }
  };
  enumerate(box.x_center, box.x_radius, xs);
  enumerate(box.v_center, box.v_radius, vs);

  struct Cand {
    GraphPoint pt;
    double dist2;
  };
  std::vector<Cand> cands;
  double skip_tol = std::max(tol, 1e-9);
  for (const auto& x : xs) {
    // On-graph filtering per x.
    std::optional<opmodel::ValueSet> at;
    RatVec zx;
    if (pieces) zx = geom::to_rat(x);
    if (!pieces) at = opmodel::evaluate(op, x, box, tol, spec);
    for (const auto& val : vs) {
      bool on_graph = false;
      if (pieces) {
        RatVec z = zx;
        RatVec zv = geom::to_rat(val);
        z.insert(z.end(), zv.begin(), zv.end());
        for (const auto& piece : *pieces)
          if (geom::contains(piece, z)) {
            on_graph = true;
            break;
          }
      } else {
        on_graph = at->contains(val, skip_tol, spec);
      }
      if (on_graph) continue;
      double d2 = 0;
      for (int i = 0; i < n; ++i) {
        d2 += (x[i] - pt.x[i]) * (x[i] - pt.x[i]);
        d2 += (val[i] - pt.v[i]) * (val[i] - pt.v[i]);
      }
      cands.push_back({GraphPoint{x, val}, d2});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.dist2 != b.dist2) return a.dist2 < b.dist2;
    if (a.pt.x != b.pt.x) return a.pt.x > b.pt.x; // positive side first
    return a.pt.v > b.pt.v;
  });

  std::vector<GraphPoint> flat;
  flat.reserve(cands.size());
  for (const auto& c : cands) flat.push_back(c.pt);
  auto margins = kernels::extension_margin(flat, g.points);

  for (size_t c = 0; c < flat.size(); ++c) {
    if (margins[c] < -tol) continue;
    if (pieces) {
      // Upgrade to an exact certificate against every clipped piece.
      geom::Polyhedron hull = opmodel::box_hull(box, n);
      bool ok = true;
      for (const auto& piece : *pieces) {
        geom::Polyhedron clipped = geom::intersect(piece, hull);
        if (geom::is_empty(clipped)) continue;
        auto m = piece_margin(clipped, n, flat[c]);
        if (m && *m < -tol) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      v.certified = true;
    }
    v.status = Verdict::Status::Fail;
    v.witness_point = flat[c];
    v.value = margins[c];
    v.detail = "monotone extension point inside the box";
    return v;
  }
  v.status = Verdict::Status::Pass;
  v.detail = "no extension point at this resolution";
  return v;
}

} // namespace monocheck
} // namespace monolab
