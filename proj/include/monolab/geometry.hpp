#pragma once

#include "monolab/rational.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace monolab::geom {

/// Linear constraint a.z <= b, or a.z == b when eq is set.
struct LinCon {
  RatVec a;
  Rat b;
  bool eq = false;
};

/// Convex polyhedron {z : all constraints hold} in H-form.
struct Polyhedron {
  int dim = 0;
  std::vector<LinCon> cons;
};

Polyhedron make_poly(int dim, std::vector<LinCon> cons);
bool contains(const Polyhedron& p, const RatVec& z);
Polyhedron intersect(const Polyhedron& p, const Polyhedron& q);

/// Constraint of a strict/weak inequality system: a.z <= b, or a.z < b.
struct StrictCon {
  RatVec a;
  Rat b;
  bool strict = false;
};

struct StrictSystem {
  int dim = 0;
  std::vector<std::pair<RatVec, Rat>> eqs; // a.z == b
  std::vector<StrictCon> ineqs;
};

// Fourier-Motzkin elimination with strictness tracking. Returns a feasible
// point or nullopt. When target is given, coordinates are chosen as close to
// it as the (open) feasible intervals allow.
std::optional<RatVec> solve_strict(const StrictSystem& sys,
                                   const RatVec* target = nullptr);

bool is_empty(const Polyhedron& p);
int affine_dim(const Polyhedron& p); // -1 for empty

/// Point in the relative interior, or nullopt when empty.
std::optional<RatVec> relint_point(const Polyhedron& p,
                                   const RatVec* target = nullptr);

/// Indices of constraints that hold with equality on all of p (includes eq rows).
std::vector<int> implicit_equalities(const Polyhedron& p);

struct VRep {
  std::vector<RatVec> vertices;
  std::vector<RatVec> rays;  // extreme rays of the recession cone
  std::vector<RatVec> lines; // lineality basis
};
VRep v_rep(const Polyhedron& p);

struct Face {
  std::vector<int> active; // canonical active set (all constraints tight on the face)
  Polyhedron poly;
  int dim = 0;
};
/// All nonempty faces, p itself included, each with its canonical active set.
std::vector<Face> faces_of(const Polyhedron& p);

/// Projects away the listed coordinates (exact FM elimination).
Polyhedron eliminate(const Polyhedron& p, std::vector<int> drop);

/// Image of p under an invertible linear map z -> M z.
Polyhedron map_poly(const Polyhedron& p, const RatMat& m_inverse);
/// Translate p by t.
Polyhedron translate(const Polyhedron& p, const RatVec& t);

/// Polyhedral cone in V-form: {sum l_i r_i + span(lineality) : l >= 0}.
struct Cone {
  int dim = 0;
  std::vector<RatVec> rays;
  std::vector<RatVec> lineality;
};

Cone cone_from_halfspaces(int dim, const std::vector<RatVec>& leq0,
                          const std::vector<RatVec>& eq0);
/// H-form: (normal, is_equality) rows with C = {x : n.x <= 0 / n.x == 0}.
std::vector<std::pair<RatVec, bool>> cone_halfspaces(const Cone& c);
Cone cone_generated(int dim, const std::vector<RatVec>& rays,
                    const std::vector<RatVec>& lines);
Cone polar(const Cone& c);
Cone cone_intersect(const Cone& a, const Cone& b);
bool cone_contains(const Cone& c, const RatVec& x);
bool cone_equal(const Cone& a, const Cone& b);
bool cone_is_whole_space(const Cone& c);
/// Image under a linear map given by rows (arbitrary, possibly rectangular).
Cone cone_map(const Cone& c, const RatMat& map_rows);

/// Exact squared Euclidean distance to a nonempty polyhedron, with nearest point.
std::pair<Rat, RatVec> sqdist(const RatVec& point, const Polyhedron& p);

/// Exact minimization of z^T Q z + c.z over a bounded nonempty polyhedron.
struct QuadMin {
  Rat value;
  RatVec argmin;
};
std::optional<QuadMin> quad_min(const Polyhedron& p, const RatMat& q,
                                const RatVec& c);

} // namespace monolab::geom
