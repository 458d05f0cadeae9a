#pragma once

#include "monolab/opmodel.hpp"
#include "monolab/verdict.hpp"

namespace monolab::vardiff {

using monolab::Box;
using opmodel::Operator;

/// The limiting normal cone / coderivative as a finite union of polyhedral
/// cones. In finite dimensions the mixed and normal limiting constructions
/// coincide, so a single union serves both.
using ConeUnion = std::vector<geom::Cone>;

/// Regular (Fréchet) normal cone to a finite union of polyhedra at z:
/// the intersection over member pieces of the polars of their tangent cones.
geom::Cone regular_normal_cone(const std::vector<geom::Polyhedron>& pieces,
                               const geom::RatVec& z);

/// Limiting normal cone at z: the face-constant regular cones attained on
/// strata whose closure contains z, plus the regular cone at z itself.
ConeUnion limiting_normal_cone(const std::vector<geom::Polyhedron>& pieces,
                               const geom::RatVec& z);

/// Coderivative graphs as cones in (w, z)-coordinates:
/// z in D*T(u,v)(w) iff (z, -w) is normal to gph T at (u,v).
geom::Cone regular_coderivative(const Operator& op, const GraphPoint& pt);
ConeUnion limiting_coderivative(const Operator& op, const GraphPoint& pt);

/// Exact sign of inf <z,w> - sigma ||w||^2 over a polyhedral cone of (w,z)
/// pairs, via quadratic minimization over the generator simplex.
struct ConePsd {
  bool psd = true;
  geom::RatVec witness; // a (w, z) with negative value when !psd
};
ConePsd cone_psd_check(const geom::Cone& cone, const geom::Rat& sigma);

/// One stratum cone together with a representative graph point.
struct CellCone {
  geom::Cone cone; // in (w, z)-space
  GraphPoint rep;
  bool exact = true;
};

/// All coderivative cones attained on gph op within the box: exact stratum
/// enumeration for polyhedral graphs, sampled graph points otherwise.
std::vector<CellCone> collect_coderivative_cells(const Operator& op,
                                                 const Box& box, int density);

/// Theorem-style positive semidefiniteness check over the box (Euclidean).
Verdict psd_criterion(const Operator& op, const Box& box, double sigma,
                      int density, double tol = 1e-9);

/// Hypomonotonicity estimate plus psd_criterion; sigma > 0 decides the
/// strong version.
Verdict local_max_via_coderivative(const Operator& op, const GraphPoint& pt,
                                   const Box& box, int density,
                                   double sigma = 0.0, double tol = 1e-9);

/// Supremal sigma passing psd_criterion on the box, by bisection over the
/// (fixed) collected cones.
double max_psd_sigma(const Operator& op, const Box& box, int density,
                     double tol = 1e-7);

/// Domain qualification bookkeeping for sum composites:
/// dom T1 cap int(dom T2) nonempty?
struct Qualification {
  bool computed = false;
  bool interior_dom_b_nonempty = false;
  bool qualified = false; // dom T1 cap int(dom T2) != empty
  std::string detail;
};
Qualification sum_qualification(const Operator& sum_op);

} // namespace monolab::vardiff
