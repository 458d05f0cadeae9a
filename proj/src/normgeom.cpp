#include "monolab/normgeom.hpp"

#include "monolab/error.hpp"

#include <cmath>

namespace monolab {

NormSpec NormSpec::euclidean(int n) {
  NormSpec s;
  s.p = 2.0;
  s.weights.assign(static_cast<size_t>(n), 1.0);
  return s;
}

bool NormSpec::is_euclidean() const {
  if (p != 2.0) return false;
  for (double w : weights)
    if (w != 1.0) return false;
  return true;
}

void NormSpec::validate(int n) const {
  if (!(p > 1.0) || !std::isfinite(p))
    throw Error(ErrorCode::BadParams, "norm exponent must satisfy 1 < p < inf");
  if (static_cast<int>(weights.size()) != n)
    throw Error(ErrorCode::DimensionMismatch, "norm weight length != dimension");
  for (double w : weights)
    if (!(w > 0.0))
      throw Error(ErrorCode::BadParams, "norm weights must be positive");
}

namespace normgeom {

double norm(const Vec& x, const NormSpec& spec) {
  spec.validate(static_cast<int>(x.size()));
  double s = 0.0;
  for (size_t i = 0; i < x.size(); ++i)
    s += spec.weights[i] * std::pow(std::abs(x[i]), spec.p);
  return std::pow(s, 1.0 / spec.p);
}

double dual_norm(const Vec& y, const NormSpec& spec) {
  spec.validate(static_cast<int>(y.size()));
  double q = spec.p / (spec.p - 1.0);
  double s = 0.0;
  for (size_t i = 0; i < y.size(); ++i)
    s += std::pow(spec.weights[i], 1.0 - q) * std::pow(std::abs(y[i]), q);
  return std::pow(s, 1.0 / q);
}

Vec duality_map(const Vec& x, const NormSpec& spec) {
  spec.validate(static_cast<int>(x.size()));
  Vec j(x.size(), 0.0);
  if (spec.is_euclidean()) return x;
  double nx = norm(x, spec);
  if (nx == 0.0) return j;
  double scale = std::pow(nx, 2.0 - spec.p);
  for (size_t i = 0; i < x.size(); ++i) {
    double xi = x[i];
    if (xi == 0.0) continue;
    j[i] = scale * spec.weights[i] * std::pow(std::abs(xi), spec.p - 1.0) *
           (xi > 0 ? 1.0 : -1.0);
  }
  return j;
}

GraphPoint shear_vertical(const GraphPoint& pt, double sigma,
                          const NormSpec& spec) {
  Vec j = duality_map(pt.x, spec);
  GraphPoint out = pt;
  for (size_t i = 0; i < j.size(); ++i) out.v[i] += sigma * j[i];
  return out;
}

GraphPoint shear_transvect(const GraphPoint& pt, double sigma) {
  GraphPoint out;
  out.x.resize(pt.x.size());
  out.v = pt.x;
  for (size_t i = 0; i < pt.x.size(); ++i) out.x[i] = pt.v[i] + sigma * pt.x[i];
  return out;
}

GraphPoint shear_transvect_inverse(const GraphPoint& pt, double sigma) {
  if (sigma == 0.0)
    throw Error(ErrorCode::BadParams,
                "transvection inverse requires sigma != 0");
  GraphPoint out;
  out.x = pt.v;
  out.v.resize(pt.v.size());
  for (size_t i = 0; i < pt.v.size(); ++i) out.v[i] = pt.x[i] - sigma * pt.v[i];
  return out;
}

} // namespace normgeom
} // namespace monolab
