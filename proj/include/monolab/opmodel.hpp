#pragma once

#include "monolab/geometry.hpp"
#include "monolab/normgeom.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace monolab {

/// Neighborhood U x V as a product of closed norm balls.
struct Box {
  Vec x_center;
  double x_radius = 1.0;
  Vec v_center;
  double v_radius = 1.0;

  void validate(int n) const;
  bool in_x_ball(const Vec& x, const NormSpec& spec, double slack = 0.0) const;
  bool in_v_ball(const Vec& v, const NormSpec& spec, double slack = 0.0) const;
};

namespace opmodel {

/// Convex set descriptor for normal-cone operators. The parabola epigraph
/// {(a,b) : b >= a^2} is the single supported non-polyhedral set.
struct ConvexSet {
  enum class Kind { Polyhedron, ParabolaEpigraph };
  Kind kind = Kind::Polyhedron;
  geom::Polyhedron poly; // used for Kind::Polyhedron
  int dim() const;
};

class Operator;
using OperatorPtr = std::shared_ptr<const Operator>;

struct PolyhedralGraphData {
  std::vector<geom::Polyhedron> pieces; // in R^{2n}, graph coords (x..., v...)
};

struct SmoothMapData {
  std::function<Vec(const Vec&)> f;
  std::function<std::vector<Vec>(const Vec&)> jacobian; // rows of DF(x)
};

struct NormalConeData {
  ConvexSet set;
};

struct SampledGraphData {
  std::vector<GraphPoint> points;
};

struct CompositeData {
  enum class Kind { Sum, Inverse, ShiftJ, Scale, Localize };
  Kind kind = Kind::Sum;
  OperatorPtr a;
  OperatorPtr b;      // Sum only
  double sigma = 0.0; // ShiftJ
  NormSpec spec;      // ShiftJ
  double factor = 1.0; // Scale
  Box box;            // Localize
};

/// Immutable set-valued operator on R^n.
class Operator {
public:
  using Payload = std::variant<PolyhedralGraphData, SmoothMapData,
                               NormalConeData, SampledGraphData, CompositeData>;

  Operator(int n, Payload payload);

  int dim() const { return n_; }
  const Payload& payload() const { return payload_; }

  // Exact polyhedral description of the graph attached at construction time
  // (e.g. for composites whose graph is known in closed form); validated
  // against evaluate() by tests.
  std::shared_ptr<const std::vector<geom::Polyhedron>> pieces_hint;

private:
  int n_;
  Payload payload_;
};

/// T(x) within a neighborhood: finite union of polyhedral slices in v-space,
/// optionally clipped by norm balls recorded in `clips`.
struct ValueSet {
  int n = 0;
  std::vector<geom::Polyhedron> slices;
  std::vector<std::pair<Vec, double>> clips; // (center, radius) v-balls

  bool empty() const { return slices.empty(); }
  bool contains(const Vec& v, double tol, const NormSpec& spec) const;
  /// Distance from v to the (unclipped) slice union; exact Euclidean when
  /// p = 2, sampled otherwise.
  double distance(const Vec& v, const NormSpec& spec) const;
  /// Deterministic representative points of the value set.
  std::vector<Vec> sample_points(int density, const NormSpec& spec) const;
  /// True when every slice is a single point.
  bool finite() const;
  std::vector<Vec> points() const; // for finite sets
};

struct SampledGraph {
  int n = 0;
  std::vector<GraphPoint> points;
};

// Constructors for the base variants.
OperatorPtr make_polyhedral_graph(int n, std::vector<geom::Polyhedron> pieces);
OperatorPtr make_smooth_map(int n, std::function<Vec(const Vec&)> f,
                            std::function<std::vector<Vec>(const Vec&)> jac);
OperatorPtr make_normal_cone(ConvexSet set);
OperatorPtr make_sampled_graph(int n, std::vector<GraphPoint> pts);

// Graph algebra (lazy composites).
OperatorPtr op_sum(OperatorPtr a, OperatorPtr b);
OperatorPtr op_inverse(OperatorPtr a);
OperatorPtr op_shift_J(OperatorPtr a, double sigma, NormSpec spec);
OperatorPtr op_scale(OperatorPtr a, double c);
OperatorPtr op_localize(OperatorPtr a, Box box);

/// T(x) intersected with the v-ball of `box`.
ValueSet evaluate(const Operator& op, const Vec& x, const Box& box, double tol,
                  const NormSpec& spec);

/// Exact polyhedral pieces of gph op (in R^{2n}) when derivable; localizations
/// are clipped to the circumscribed coordinate box of their balls, so the view
/// is exact at interior points and a polyhedral relaxation near the boundary.
std::optional<std::vector<geom::Polyhedron>> polyhedral_pieces(const Operator& op);

/// Deterministic grid + vertex-enriched sample of gph op within box.
SampledGraph sample_graph(const Operator& op, const Box& box, int density,
                          const NormSpec& spec, double tol = 1e-10);

/// Projection of the graph onto x-space (the domain), when pieces exist.
std::optional<geom::Polyhedron> domain_hull(const Operator& op, int piece_index);

geom::Polyhedron box_hull(const Box& box, int n); // circumscribed coordinate box

} // namespace opmodel
} // namespace monolab
