#pragma once

#include "monolab/opmodel.hpp"
#include "monolab/verdict.hpp"

namespace monolab::resolvent {

using monolab::Box;
using opmodel::Operator;

struct SolveResult {
  bool solver_limit = false;
  bool continuum = false;          // a positive-dimensional solution set
  std::vector<Vec> points;         // isolated solutions (two reps if continuum)
  std::string note;
  std::size_t count() const { return continuum ? 2 : points.size(); }
};

/// All x in the primal ball of box with y_star in J(x) + lambda T(x).
/// Exact for polyhedral graphs under the Euclidean norm (per-piece affine
/// substitution); the parabola normal cone has a dedicated root solver;
/// everything else falls back to grid refinement.
SolveResult resolvent_solve(const Operator& op, double lambda, const Vec& y_star,
                            const NormSpec& spec, const Box& box,
                            double tol = 1e-9);

/// Solutions of y in sigma x + T(x) within the primal ball (Euclidean).
SolveResult shifted_solve(const Operator& op, double sigma, const Vec& y,
                          const Box& box, double tol = 1e-9);

/// Solutions of v_star in T(x) within the primal ball.
SolveResult inverse_solve(const Operator& op, const Vec& v_star, const Box& box,
                          const NormSpec& spec, double tol = 1e-9);

struct LocalizationProbe {
  Vec image_center;
  Vec primal_center;
  std::vector<double> radii; // image-ball schedule actually scanned
  double parameter = 1.0;    // lambda (resolvent) or sigma (shifted)
  double solver_tol = 1e-9;

  struct Query {
    Vec y;
    std::vector<Vec> solutions;
    bool continuum = false;
  };
  std::vector<Query> queries; // from the finest scanned radius

  bool single_valued = true;
  bool full_domain = true;
  double ell_hat = 0.0;
  std::string note;
};

/// max over solved query pairs of ||x1 - x2|| / ||y1 - y2||.
double localization_lipschitz(const LocalizationProbe& probe,
                              const NormSpec& spec);

/// Probes a continuous single-valued localization of (J + lambda T)^{-1}
/// around (J(x_bar) + lambda x_bar^*, x_bar).
std::pair<Verdict, LocalizationProbe>
minty_local_probe(const Operator& op, const GraphPoint& pt, double lambda,
                  const Box& box, int density, const NormSpec& spec,
                  double tol = 1e-9);

/// Probes a continuous single-valued localization of T^{-1} around
/// (x_bar^*, x_bar); combined with a positive strong modulus this decides
/// local strong maximal monotonicity.
std::pair<Verdict, LocalizationProbe>
strong_inverse_probe(const Operator& op, const GraphPoint& pt, const Box& box,
                     int density, const NormSpec& spec, double tol = 1e-9);

/// Probes the localization of (T + sigma I)^{-1} around (v_bar + sigma x_bar,
/// x_bar); Euclidean setting.
std::pair<Verdict, LocalizationProbe>
shifted_resolvent_probe(const Operator& op, double sigma, const GraphPoint& pt,
                        const Box& box, int density, double tol = 1e-9);

/// Local monotonicity plus the resolvent localization over a lambda set.
Verdict local_max_via_resolvent(const Operator& op, const GraphPoint& pt,
                                const Box& box, int density,
                                const NormSpec& spec,
                                std::vector<double> lambdas = {0.5, 1.0, 2.0},
                                double tol = 1e-9);

} // namespace monolab::resolvent
