#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <vector>

namespace monolab::geom {

using Rat = boost::multiprecision::cpp_rational;
using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;

// double -> Rat is exact (doubles are dyadic rationals).
inline Rat to_rat(double x) { return Rat(x); }

RatVec to_rat(const std::vector<double>& x);
double to_double(const Rat& r);
std::vector<double> to_double(const RatVec& v);

Rat dot(const RatVec& a, const RatVec& b);
RatVec vadd(const RatVec& a, const RatVec& b);
RatVec vsub(const RatVec& a, const RatVec& b);
RatVec vscale(const Rat& c, const RatVec& a);
bool is_zero(const RatVec& a);

// Scales to coprime integer entries with the first nonzero entry positive.
// Used for deduplication of rays and constraint normals.
RatVec canonical_direction(const RatVec& a);

// Scales to coprime integer entries by a positive factor only (the sign
// pattern is preserved). Used for deduplication of inequality rows, where
// flipping the sign would change the halfspace.
RatVec canonical_row(const RatVec& a);

/// Rank of a rational matrix (rows may be empty).
int rank(RatMat rows);

/// Basis of {x : r.x = 0 for all rows r}.
std::vector<RatVec> null_space(const RatMat& rows, int dim);

/// One solution of A x = b, if the system is consistent.
std::optional<RatVec> solve_linear(RatMat a, RatVec b, int dim);

/// true iff v lies in span(basis).
bool in_span(const std::vector<RatVec>& basis, const RatVec& v);

std::string to_string(const Rat& r);
std::string to_string(const RatVec& v);

} // namespace monolab::geom
