#pragma once

#include "monolab/opmodel.hpp"
#include "monolab/verdict.hpp"

namespace monolab::monocheck {

using monolab::Box;
using opmodel::Operator;
using opmodel::SampledGraph;

/// PASS if <v1 - v2, x1 - x2> >= -tol for all sample pairs, FAIL with the
/// violating pair otherwise.
Verdict monotone_witness(const SampledGraph& g, const NormSpec& spec,
                         double tol = 1e-9);

/// sigma_hat = min over pairs with distinct x of
/// <dv, dx> / <J(x1) - J(x2), dx>. FAIL when some pair has negative
/// numerator; DEGENERATE (Inconclusive) when all points share one x.
Verdict strong_modulus(const SampledGraph& g, const NormSpec& spec,
                       double tol = 1e-9);

/// r_hat = max(0, max over pairs of -<dv, dx> / ||dx||^2), Euclidean.
Verdict hypo_modulus(const SampledGraph& g, double tol = 1e-9);

/// Graphical inner-semicontinuity probe at pt along a decreasing radius
/// schedule; eps(rho) = max(1e-6, rho). Samples off the domain are skipped
/// (domain coverage is reported separately by qualification checks).
Verdict isc_probe(const Operator& op, const GraphPoint& pt,
                  const std::vector<double>& radii, const NormSpec& spec,
                  int density = 9, double tol = 1e-9);

/// Searches box \ gph op for a monotone extension point against the sampled
/// graph. FAIL(witness) refutes type-(A) local maximality; with polyhedral
/// pieces the witness margin is re-validated exactly against every piece.
Verdict typeA_witness_search(const Operator& op, const GraphPoint& pt,
                             const Box& box, int density, const NormSpec& spec,
                             double tol = 1e-9);

} // namespace monolab::monocheck
