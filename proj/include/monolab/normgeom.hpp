#pragma once

#include <vector>

namespace monolab {

using Vec = std::vector<double>;

/// Weighted p-norm, 1 < p < inf. Unit weights and p = 2 give the Euclidean
/// norm, whose duality map is the identity.
struct NormSpec {
  double p = 2.0;
  Vec weights; // all positive, length = ambient dimension

  static NormSpec euclidean(int n);
  bool is_euclidean() const;
  void validate(int n) const;
};

/// A point (x, v) of an operator graph.
struct GraphPoint {
  Vec x;
  Vec v;
};

namespace normgeom {

double norm(const Vec& x, const NormSpec& spec);
/// Dual norm: exponent q with 1/p + 1/q = 1 and weights w^(1-q).
double dual_norm(const Vec& y, const NormSpec& spec);

/// The duality map J(x): gradient of (1/2)||.||^2, with J(0) = 0.
/// Satisfies <J(x), x> = ||x||^2 and ||J(x)||_* = ||x||.
Vec duality_map(const Vec& x, const NormSpec& spec);

/// Vertical shear: (x, v) -> (x, v + sigma J(x)). Inverse is sigma -> -sigma.
GraphPoint shear_vertical(const GraphPoint& pt, double sigma,
                          const NormSpec& spec);

/// Transvection (Euclidean setting): (x, v) -> (v + sigma x, x).
GraphPoint shear_transvect(const GraphPoint& pt, double sigma);
/// Inverse transvection: (y, x) -> (x, y - sigma x). Rejects sigma = 0.
GraphPoint shear_transvect_inverse(const GraphPoint& pt, double sigma);

} // namespace normgeom
} // namespace monolab
