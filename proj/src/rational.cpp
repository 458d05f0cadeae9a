#include "monolab/rational.hpp"

#include <sstream>
#include <stdexcept>

namespace monolab::geom {

RatVec to_rat(const std::vector<double>& x) {
  RatVec r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = to_rat(x[i]);
  return r;
}

double to_double(const Rat& r) { return r.convert_to<double>(); }

std::vector<double> to_double(const RatVec& v) {
  std::vector<double> r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = to_double(v[i]);
  return r;
}

Rat dot(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  Rat s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

RatVec vadd(const RatVec& a, const RatVec& b) {
  RatVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

RatVec vsub(const RatVec& a, const RatVec& b) {
  RatVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

RatVec vscale(const Rat& c, const RatVec& a) {
  RatVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

bool is_zero(const RatVec& a) {
  for (const auto& x : a)
    if (x != 0) return false;
  return true;
}

RatVec canonical_direction(const RatVec& a) {
  using boost::multiprecision::cpp_int;
  cpp_int l = 1;
  for (const auto& x : a) l = lcm(l, denominator(x));
  std::vector<cpp_int> ints(a.size());
  cpp_int g = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    ints[i] = numerator(a[i]) * (l / denominator(a[i]));
    g = gcd(g, ints[i]);
  }
  if (g == 0) return RatVec(a.size(), Rat(0));
  int sign = 0;
  for (const auto& x : ints)
    if (x != 0) {
      sign = x > 0 ? 1 : -1;
      break;
    }
  RatVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = Rat(ints[i] * sign / g);
  return r;
}

RatVec canonical_row(const RatVec& a) {
  using boost::multiprecision::cpp_int;
  cpp_int l = 1;
  for (const auto& x : a) l = lcm(l, denominator(x));
  std::vector<cpp_int> ints(a.size());
  cpp_int g = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    ints[i] = numerator(a[i]) * (l / denominator(a[i]));
    g = gcd(g, ints[i]);
  }
  if (g == 0) return RatVec(a.size(), Rat(0));
  RatVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = Rat(ints[i] / g);
  return r;
}

namespace {

// Row echelon reduction in place; returns pivot columns.
std::vector<int> echelon(RatMat& rows) {
  std::vector<int> pivots;
  size_t r = 0;
  if (rows.empty()) return pivots;
  size_t cols = rows[0].size();
  for (size_t c = 0; c < cols && r < rows.size(); ++c) {
    size_t sel = r;
    while (sel < rows.size() && rows[sel][c] == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[r], rows[sel]);
    Rat inv = Rat(1) / rows[r][c];
    for (size_t j = c; j < cols; ++j) rows[r][j] *= inv;
    for (size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      Rat f = rows[i][c];
      for (size_t j = c; j < cols; ++j) rows[i][j] -= f * rows[r][j];
    }
    pivots.push_back(static_cast<int>(c));
    ++r;
  }
  rows.resize(r);
  return pivots;
}

} // namespace

int rank(RatMat rows) {
  if (rows.empty()) return 0;
  return static_cast<int>(echelon(rows).size());
}

std::vector<RatVec> null_space(const RatMat& rows, int dim) {
  RatMat m = rows;
  for (auto& row : m)
    if (static_cast<int>(row.size()) != dim)
      throw std::invalid_argument("null_space: row size mismatch");
  auto pivots = echelon(m);
  std::vector<bool> is_pivot(dim, false);
  for (int p : pivots) is_pivot[p] = true;
  std::vector<RatVec> basis;
  for (int f = 0; f < dim; ++f) {
    if (is_pivot[f]) continue;
    RatVec v(dim, Rat(0));
    v[f] = 1;
    for (size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m[i][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<RatVec> solve_linear(RatMat a, RatVec b, int dim) {
  RatMat aug = std::move(a);
  for (size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
  auto pivots = echelon(aug);
  RatVec x(dim, Rat(0));
  for (size_t i = 0; i < pivots.size(); ++i) {
    if (pivots[i] == dim) return std::nullopt; // 0 = 1 row
    x[pivots[i]] = aug[i][dim];
  }
  return x;
}

bool in_span(const std::vector<RatVec>& basis, const RatVec& v) {
  RatMat m = basis;
  int r0 = rank(m);
  m.push_back(v);
  return rank(m) == r0;
}

std::string to_string(const Rat& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

std::string to_string(const RatVec& v) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ")";
  return os.str();
}

} // namespace monolab::geom
