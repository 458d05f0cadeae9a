#include "monolab/resolvent.hpp"

#include "monolab/error.hpp"
#include "monolab/kernels.hpp"
#include "monolab/monocheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace monolab::resolvent {

using geom::Polyhedron;
using geom::Rat;
using geom::RatVec;

namespace {

Vec vsub_d(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

// Solutions of (x, (y - alpha x) / beta) in some piece, clipped to the
// Euclidean ball. alpha = 0 recovers plain v-slices (inverse solve).
SolveResult solve_affine_pieces(const std::vector<Polyhedron>& pieces, int n,
                                double alpha, double beta, const Vec& y,
                                const Vec& ball_center, double ball_radius) {
  SolveResult res;
  Rat al = geom::to_rat(alpha), be = geom::to_rat(beta);
  RatVec yr = geom::to_rat(y);
  RatVec c = geom::to_rat(ball_center);
  Rat r2 = geom::to_rat(ball_radius) * geom::to_rat(ball_radius);
  std::set<RatVec> seen;

  auto push_point = [&](const RatVec& z) {
    RatVec d = geom::vsub(z, c);
    if (geom::dot(d, d) > r2) return;
    if (seen.insert(z).second) res.points.push_back(geom::to_double(z));
  };

  for (const auto& piece : pieces) {
    Polyhedron q;
    q.dim = n;
    bool infeasible = false;
    for (const auto& con : piece.cons) {
      RatVec a(n, Rat(0));
      Rat rhs = be * con.b;
      for (int i = 0; i < n; ++i) {
        a[i] = be * con.a[i] - al * con.a[n + i];
        rhs -= con.a[n + i] * yr[i];
      }
      if (geom::is_zero(a)) {
        if (con.eq ? (rhs != 0) : (rhs < 0)) {
          infeasible = true;
          break;
        }
        continue;
      }
      q.cons.push_back({a, rhs, con.eq});
    }
    if (infeasible || geom::is_empty(q)) continue;
    int dim = geom::affine_dim(q);
    if (dim == 0) {
      auto z = geom::relint_point(q);
      if (z) push_point(*z);
      continue;
    }
    // Positive-dimensional solution set: classify against the ball.
    auto [d2, nearest] = geom::sqdist(c, q);
    if (d2 > r2) continue;
    if (d2 == r2) {
      push_point(nearest);
      continue;
    }
    res.continuum = true;
    res.points.clear();
    res.points.push_back(geom::to_double(nearest));
    // A second, distinct solution inside the ball.
    Polyhedron clipped = q;
    for (int i = 0; i < n; ++i) {
      RatVec a(n, Rat(0));
      a[i] = 1;
      clipped.cons.push_back({a, c[i] + geom::to_rat(ball_radius), false});
      a[i] = -1;
      clipped.cons.push_back({a, -(c[i] - geom::to_rat(ball_radius)), false});
    }
    std::vector<RatVec> cands = geom::v_rep(clipped).vertices;
    auto ri = geom::relint_point(clipped, &c);
    if (ri) cands.push_back(*ri);
    for (const auto& cand : cands) {
      if (cand == nearest) continue;
      RatVec mid = geom::vscale(Rat(1) / 2, geom::vadd(cand, nearest));
      for (const auto& z : {cand, mid}) {
        RatVec d = geom::vsub(z, c);
        if (geom::dot(d, d) <= r2 && z != nearest) {
          res.points.push_back(geom::to_double(z));
          return res;
        }
      }
    }
    return res;
  }
  std::sort(res.points.begin(), res.points.end());
  return res;
}

// Projection onto the parabola epigraph {b >= a^2}: boundary parameters solve
// 2a^3 + (1 - 2 y2) a - y1 = 0. The resolvent of a normal cone is the metric
// projection for every lambda > 0.
std::vector<double> parabola_boundary_roots(double y1, double y2) {
  auto g = [&](double a) { return 2 * a * a * a + (1 - 2 * y2) * a - y1; };
  auto dg = [&](double a) { return 6 * a * a + (1 - 2 * y2); };
  auto polish = [&](double a) {
    for (int it = 0; it < 60; ++it) {
      double d = dg(a);
      if (d == 0) break;
      double step = g(a) / d;
      a -= step;
      if (std::abs(step) < 1e-16 * (1 + std::abs(a))) break;
    }
    return a;
  };
  auto bisect = [&](double lo, double hi) -> std::optional<double> {
    double glo = g(lo), ghi = g(hi);
    if (glo == 0) return lo;
    if (ghi == 0) return hi;
    if ((glo < 0) == (ghi < 0)) return std::nullopt;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      double gm = g(mid);
      if (gm == 0) return mid;
      if ((gm < 0) == (glo < 0)) {
        lo = mid;
        glo = gm;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };
  double m = 2.0 + std::abs(y1) + std::sqrt(std::abs(2 * y2 - 1) / 6.0 + 1.0);
  std::vector<std::pair<double, double>> intervals;
  if (1 - 2 * y2 >= 0) {
    intervals.push_back({-m, m});
  } else {
    double s = std::sqrt((2 * y2 - 1) / 6.0);
    intervals.push_back({-m, -s});
    intervals.push_back({-s, s});
    intervals.push_back({s, m});
  }
  std::vector<double> roots;
  for (auto [lo, hi] : intervals) {
    auto r = bisect(lo, hi);
    if (!r) continue;
    double a = polish(*r);
    bool dup = false;
    for (double b : roots)
      if (std::abs(a - b) < 1e-12 * (1 + std::abs(a))) dup = true;
    if (!dup) roots.push_back(a);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

bool parabola_payload(const Operator& op) {
  const auto* nc = std::get_if<opmodel::NormalConeData>(&op.payload());
  return nc && nc->set.kind == opmodel::ConvexSet::Kind::ParabolaEpigraph;
}

SolveResult parabola_resolvent(const Vec& y, const Vec& ball_center,
                               double ball_radius) {
  SolveResult res;
  auto in_ball = [&](const Vec& x) {
    double d2 = 0;
    for (size_t i = 0; i < x.size(); ++i)
      d2 += (x[i] - ball_center[i]) * (x[i] - ball_center[i]);
    return d2 <= ball_radius * ball_radius * (1 + 1e-12);
  };
  Rat a1 = geom::to_rat(y[0]), b1 = geom::to_rat(y[1]);
  if (b1 > a1 * a1) {
    if (in_ball(y)) res.points.push_back(y); // interior: J(x) alone carries y
    return res;
  }
  for (double a : parabola_boundary_roots(y[0], y[1])) {
    double tau = a * a - y[1]; // lambda * tau >= 0 required
    if (tau < -1e-12) continue;
    Vec x{a, a * a};
    if (in_ball(x)) res.points.push_back(x);
  }
  std::sort(res.points.begin(), res.points.end());
  return res;
}

// Grid-refinement fallback: residual r(x) = dist(y - alpha J(x), beta T(x)).
SolveResult solve_grid_refine(const Operator& op, bool use_duality_map,
                              double alpha, double beta, const Vec& y,
                              const Box& ball, const NormSpec& spec,
                              double tol) {
  const int n = op.dim();
  SolveResult res;
  auto residual = [&](const Vec& x) -> double {
    Box wide{x, 1.0, Vec(n, 0.0), 1e6};
    Vec target(n);
    Vec j = use_duality_map ? normgeom::duality_map(x, spec) : x;
    for (int i = 0; i < n; ++i) target[i] = (y[i] - alpha * j[i]) / beta;
    auto vs = opmodel::evaluate(op, x, wide, tol, spec);
    if (vs.empty()) return std::numeric_limits<double>::infinity();
    return beta * vs.distance(target, spec);
  };
  const int coarse = 33;
  double step = 2.0 * ball.x_radius / (coarse - 1);
  std::vector<Vec> cands;
  std::vector<double> axis;
  for (int k = 0; k < coarse; ++k) axis.push_back(-1.0 + 2.0 * k / (coarse - 1));
  std::vector<int> idx(n, 0);
  while (true) {
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = ball.x_center[i] + ball.x_radius * axis[idx[i]];
    if (normgeom::norm(vsub_d(x, ball.x_center), spec) <= ball.x_radius * (1 + 1e-12) &&
        residual(x) <= 4.0 * step * (1 + alpha + beta))
      cands.push_back(x);
    int i = 0;
    while (i < n && ++idx[i] == coarse) idx[i++] = 0;
    if (i == n) break;
  }
  for (int level = 0; level < 5; ++level) {
    double sub = step / 4.0;
    std::vector<Vec> next;
    for (const auto& c0 : cands) {
      Vec best = c0;
      double bestr = residual(c0);
      std::vector<int> jdx(n, 0);
      while (true) {
        Vec x(n);
        for (int i = 0; i < n; ++i) x[i] = c0[i] + sub * (jdx[i] - 2);
        double r = residual(x);
        if (r < bestr) {
          bestr = r;
          best = x;
        }
        int i = 0;
        while (i < n && ++jdx[i] == 5) jdx[i++] = 0;
        if (i == n) break;
      }
      next.push_back(best);
    }
    cands = std::move(next);
    step = sub;
  }
  // Cluster and accept.
  std::sort(cands.begin(), cands.end());
  double solve_tol = std::max(tol, 1e-7);
  for (const auto& c0 : cands) {
    double r = residual(c0);
    if (r > solve_tol) {
      if (r < 1e-3) res.solver_limit = true;
      continue;
    }
    bool dup = false;
    for (const auto& p : res.points) {
      double d = 0;
      for (int i = 0; i < n; ++i) d = std::max(d, std::abs(p[i] - c0[i]));
      if (d < 16 * step) dup = true;
    }
    if (!dup && normgeom::norm(vsub_d(c0, ball.x_center), spec) <=
                    ball.x_radius * (1 + 1e-9))
      res.points.push_back(c0);
  }
  res.note = "grid refinement, final step " + std::to_string(step);
  return res;
}

} // namespace

namespace {

// Cached piece views keep probe loops from re-deriving the graph per query.
struct PieceCache {
  bool computed = false;
  std::optional<std::vector<Polyhedron>> pieces;
  const std::optional<std::vector<Polyhedron>>& get(const Operator& op) {
    if (!computed) {
      pieces = opmodel::polyhedral_pieces(op);
      computed = true;
    }
    return pieces;
  }
};

SolveResult resolvent_solve_cached(const Operator& op, double lambda,
                                   const Vec& y_star, const NormSpec& spec,
                                   const Box& box, double tol,
                                   PieceCache& cache) {
  if (!(lambda > 0)) throw Error(ErrorCode::BadParams, "lambda must be positive");
  const int n = op.dim();
  if (static_cast<int>(y_star.size()) != n)
    throw Error(ErrorCode::DimensionMismatch, "resolvent_solve query");
  if (spec.is_euclidean()) {
    if (parabola_payload(op))
      return parabola_resolvent(y_star, box.x_center, box.x_radius);
    const auto& pieces = cache.get(op);
    if (pieces)
      return solve_affine_pieces(*pieces, n, 1.0, lambda, y_star, box.x_center,
                                 box.x_radius);
  }
  Box ball = box;
  return solve_grid_refine(op, true, 1.0, lambda, y_star, ball, spec, tol);
}

SolveResult shifted_solve_cached(const Operator& op, double sigma, const Vec& y,
                                 const Box& box, double tol, PieceCache& cache) {
  const int n = op.dim();
  NormSpec spec = NormSpec::euclidean(n);
  const auto& pieces = cache.get(op);
  if (pieces)
    return solve_affine_pieces(*pieces, n, sigma, 1.0, y, box.x_center,
                               box.x_radius);
  return solve_grid_refine(op, true, sigma, 1.0, y, box, spec, tol);
}

} // namespace

SolveResult resolvent_solve(const Operator& op, double lambda, const Vec& y_star,
                            const NormSpec& spec, const Box& box, double tol) {
  PieceCache cache;
  return resolvent_solve_cached(op, lambda, y_star, spec, box, tol, cache);
}

SolveResult shifted_solve(const Operator& op, double sigma, const Vec& y,
                          const Box& box, double tol) {
  PieceCache cache;
  return shifted_solve_cached(op, sigma, y, box, tol, cache);
}

namespace {

SolveResult inverse_solve_cached(const Operator& op, const Vec& v_star,
                                 const Box& box, const NormSpec& spec,
                                 double tol, PieceCache& cache) {
  const int n = op.dim();
  if (spec.is_euclidean()) {
    const auto& pieces = cache.get(op);
    if (pieces)
      return solve_affine_pieces(*pieces, n, 0.0, 1.0, v_star, box.x_center,
                                 box.x_radius);
    if (parabola_payload(op)) {
      SolveResult res;
      Box wide{box.x_center, box.x_radius, Vec(n, 0.0), 1e6};
      // {x : v* in N(x)}: explicit from the ray structure.
      Rat q1 = geom::to_rat(v_star[0]), q2 = geom::to_rat(v_star[1]);
      if (q2 < 0) {
        Rat a = -q1 / (2 * q2);
        Vec x{geom::to_double(a), geom::to_double(a * a)};
        if (box.in_x_ball(x, spec, 1e-12)) res.points.push_back(x);
        return res;
      }
      if (q1 == 0 && q2 == 0) {
        res.continuum = true;
        res.points = {Vec{0.0, 0.0}, Vec{0.0, 0.5}};
        return res;
      }
      return res;
    }
  }
  return solve_grid_refine(op, false, 0.0, 1.0, v_star, box, spec, tol);
}

} // namespace

SolveResult inverse_solve(const Operator& op, const Vec& v_star, const Box& box,
                          const NormSpec& spec, double tol) {
  PieceCache cache;
  return inverse_solve_cached(op, v_star, box, spec, tol, cache);
}

double localization_lipschitz(const LocalizationProbe& probe,
                              const NormSpec& spec) {
  std::vector<std::pair<Vec, Vec>> solved;
  for (const auto& q : probe.queries)
    if (q.solutions.size() == 1 && !q.continuum)
      solved.push_back({q.y, q.solutions[0]});
  if (solved.size() < 2)
    throw Error(ErrorCode::Degenerate,
                "localization_lipschitz needs >= 2 solved queries");
  double ell = 0.0;
  for (size_t i = 0; i < solved.size(); ++i)
    for (size_t j = i + 1; j < solved.size(); ++j) {
      double dy = normgeom::dual_norm(vsub_d(solved[i].first, solved[j].first), spec);
      if (dy == 0.0) continue;
      double dx = normgeom::norm(vsub_d(solved[i].second, solved[j].second), spec);
      ell = std::max(ell, dx / dy);
    }
  return ell;
}

namespace {

struct ScanOutcome {
  std::vector<LocalizationProbe::Query> queries;
  bool escape = false;       // some solution left the interior of the primal ball
  bool solver_limit = false;
  std::optional<Vec> bad_query; // zero or multiple solutions
  std::string bad_kind;
};

// One image-ball scan at the given radius.
template <typename Solver>
ScanOutcome scan_image_ball(const Vec& center, double radius, int density,
                            const NormSpec& spec, bool dual_ball,
                            const Vec& primal_center, double primal_radius,
                            Solver&& solve) {
  ScanOutcome out;
  const int n = static_cast<int>(center.size());
  std::vector<Vec> ys;
  std::vector<double> axis;
  for (int k = 0; k < density; ++k)
    axis.push_back(-1.0 + 2.0 * k / (density - 1));
  std::vector<int> idx(n, 0);
  while (true) {
    Vec y(n);
    for (int i = 0; i < n; ++i) y[i] = center[i] + radius * axis[idx[i]];
    double d = dual_ball ? normgeom::dual_norm(vsub_d(y, center), spec)
                         : normgeom::norm(vsub_d(y, center), spec);
    if (d <= radius * (1 + 1e-12)) ys.push_back(y);
    int i = 0;
    while (i < n && ++idx[i] == density) idx[i++] = 0;
    if (i == n) break;
  }
  struct Key {
    double d2;
    Vec y;
  };
  std::vector<Key> order;
  for (auto& y : ys) {
    double d2 = 0;
    for (int i = 0; i < n; ++i) d2 += (y[i] - center[i]) * (y[i] - center[i]);
    order.push_back({d2, y});
  }
  std::sort(order.begin(), order.end(), [](const Key& a, const Key& b) {
    if (a.d2 != b.d2) return a.d2 < b.d2;
    return a.y > b.y;
  });
  for (const auto& [d2, y] : order) {
    SolveResult sr = solve(y);
    if (sr.solver_limit) out.solver_limit = true;
    LocalizationProbe::Query q{y, sr.points, sr.continuum};
    for (const auto& x : sr.points) {
      double dist = normgeom::norm(vsub_d(x, primal_center), spec);
      if (dist > 0.95 * primal_radius) out.escape = true;
    }
    if (!out.bad_query && (sr.count() == 0 || sr.count() >= 2)) {
      out.bad_query = y;
      out.bad_kind = sr.count() == 0 ? "no solution" : "multiple solutions";
    }
    out.queries.push_back(std::move(q));
  }
  return out;
}

template <typename Solver>
std::pair<Verdict, LocalizationProbe>
run_localization_probe(const std::string& name, const Vec& image_center,
                       const Vec& primal_center, double primal_radius,
                       double rho0, int density, const NormSpec& spec,
                       bool dual_ball, double parameter, double tol,
                       Solver&& solve) {
  Verdict v;
  v.name = name;
  v.resolution.density = density;
  v.resolution.tol = tol;
  LocalizationProbe probe;
  probe.image_center = image_center;
  probe.primal_center = primal_center;
  probe.parameter = parameter;
  probe.solver_tol = tol;

  double rho = rho0;
  ScanOutcome last;
  bool settled = false;
  for (int attempt = 0; attempt < 8 && !settled; ++attempt, rho /= 2) {
    ScanOutcome first = scan_image_ball(image_center, rho, density, spec,
                                        dual_ball, primal_center,
                                        primal_radius, solve);
    if (first.escape) continue; // shrink the image ball and retry
    probe.radii = {rho, rho / 2, rho / 4};
    ScanOutcome mid = scan_image_ball(image_center, rho / 2, density, spec,
                                      dual_ball, primal_center, primal_radius,
                                      solve);
    last = scan_image_ball(image_center, rho / 4, density, spec, dual_ball,
                           primal_center, primal_radius, solve);
    last.solver_limit |= first.solver_limit || mid.solver_limit;
    settled = true;
  }
  if (!settled) {
    v.status = Verdict::Status::Inconclusive;
    v.detail = "solutions kept escaping the primal ball while shrinking";
    return {v, probe};
  }
  probe.queries = last.queries;
  for (const auto& q : probe.queries) {
    if (q.continuum || q.solutions.size() > 1) probe.single_valued = false;
    if (q.solutions.empty()) probe.full_domain = false;
  }
  v.resolution.radii = probe.radii;
  if (last.solver_limit) {
    v.status = Verdict::Status::Inconclusive;
    v.detail = "SOLVER_LIMIT propagated from the resolvent solver";
    return {v, probe};
  }
  if (last.bad_query) {
    v.status = Verdict::Status::Fail;
    v.witness_query = last.bad_query;
    v.detail = last.bad_kind + " at the witnessed query";
    return {v, probe};
  }
  v.status = Verdict::Status::Pass;
  v.detail = "single-valued with full domain at probe resolution";
  try {
    probe.ell_hat = localization_lipschitz(probe, spec);
    v.ell_hat = probe.ell_hat;
  } catch (const Error&) {
  }
  return {v, probe};
}

void require_on_graph(const Operator& op, const GraphPoint& pt,
                      const NormSpec& spec, double tol) {
  Box home{pt.x, 1.0, pt.v, 1.0};
  auto at = opmodel::evaluate(op, pt.x, home, tol, spec);
  if (!at.contains(pt.v, std::max(tol, 1e-9), spec))
    throw Error(ErrorCode::PointNotInSet, "probe point not on the graph");
}

} // namespace

std::pair<Verdict, LocalizationProbe>
minty_local_probe(const Operator& op, const GraphPoint& pt, double lambda,
                  const Box& box, int density, const NormSpec& spec,
                  double tol) {
  if (!(lambda > 0)) throw Error(ErrorCode::BadParams, "lambda must be positive");
  require_on_graph(op, pt, spec, tol);
  Vec j = normgeom::duality_map(pt.x, spec);
  Vec center(j.size());
  for (size_t i = 0; i < j.size(); ++i) center[i] = j[i] + lambda * pt.v[i];
  double rho0 = 0.5 * lambda * box.v_radius;
  Box ball{pt.x, box.x_radius, pt.v, box.v_radius};
  PieceCache cache;
  auto [v, probe] = run_localization_probe(
      "minty_local_probe", center, pt.x, box.x_radius, rho0, density, spec,
      /*dual_ball=*/!spec.is_euclidean(), lambda, tol, [&](const Vec& y) {
        return resolvent_solve_cached(op, lambda, y, spec, ball, tol, cache);
      });
  v.resolution.lambdas = {lambda};
  return {v, probe};
}

std::pair<Verdict, LocalizationProbe>
strong_inverse_probe(const Operator& op, const GraphPoint& pt, const Box& box,
                     int density, const NormSpec& spec, double tol) {
  require_on_graph(op, pt, spec, tol);
  double rho0 = 0.5 * box.v_radius;
  Box ball{pt.x, box.x_radius, pt.v, box.v_radius};
  PieceCache cache;
  return run_localization_probe(
      "strong_inverse_probe", pt.v, pt.x, box.x_radius, rho0, density, spec,
      /*dual_ball=*/!spec.is_euclidean(), 0.0, tol, [&](const Vec& y) {
        return inverse_solve_cached(op, y, ball, spec, tol, cache);
      });
}

std::pair<Verdict, LocalizationProbe>
shifted_resolvent_probe(const Operator& op, double sigma, const GraphPoint& pt,
                        const Box& box, int density, double tol) {
  const int n = op.dim();
  NormSpec spec = NormSpec::euclidean(n);
  require_on_graph(op, pt, spec, tol);
  Vec center(pt.v.size());
  for (size_t i = 0; i < pt.v.size(); ++i) center[i] = pt.v[i] + sigma * pt.x[i];
  double rho0 = 0.25 * (box.v_radius + sigma * box.x_radius);
  Box ball{pt.x, box.x_radius, pt.v, box.v_radius};
  PieceCache cache;
  return run_localization_probe(
      "shifted_resolvent_probe", center, pt.x, box.x_radius, rho0, density,
      spec, /*dual_ball=*/false, sigma, tol, [&](const Vec& y) {
        return shifted_solve_cached(op, sigma, y, ball, tol, cache);
      });
}

Verdict local_max_via_resolvent(const Operator& op, const GraphPoint& pt,
                                const Box& box, int density,
                                const NormSpec& spec,
                                std::vector<double> lambdas, double tol) {
  Verdict v;
  v.name = "local_max_via_resolvent";
  v.resolution.density = density;
  v.resolution.tol = tol;
  v.resolution.lambdas = lambdas;

  auto g = opmodel::sample_graph(op, box, density, spec);
  Verdict mono = monocheck::monotone_witness(g, spec, tol);
  v.parts.push_back(mono);
  if (mono.fail()) {
    v.status = Verdict::Status::Fail;
    v.witness_pair = mono.witness_pair;
    v.detail = "not locally monotone on the sampled graph";
    return v;
  }
  bool inconclusive = false;
  for (double lambda : lambdas) {
    auto [mv, probe] = minty_local_probe(op, pt, lambda, box, density, spec, tol);
    v.parts.push_back(mv);
    if (mv.fail()) {
      v.status = Verdict::Status::Fail;
      v.witness_query = mv.witness_query;
      v.detail = "resolvent localization fails at lambda = " + std::to_string(lambda);
      return v;
    }
    if (mv.status == Verdict::Status::Inconclusive) inconclusive = true;
  }
  v.status = inconclusive ? Verdict::Status::Inconclusive : Verdict::Status::Pass;
  if (!inconclusive) v.detail = "monotone and resolvent-localizable at probe resolution";
  return v;
}

} // namespace monolab::resolvent
