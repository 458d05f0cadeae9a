#include "monolab/opmodel.hpp"

#include "monolab/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace monolab {

namespace {

Vec vsub_d(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

} // namespace

void Box::validate(int n) const {
  if (static_cast<int>(x_center.size()) != n ||
      static_cast<int>(v_center.size()) != n)
    throw Error(ErrorCode::DimensionMismatch, "box centers have wrong dimension");
  if (!(x_radius > 0.0) || !(v_radius > 0.0))
    throw Error(ErrorCode::BadParams, "box radii must be positive");
}

bool Box::in_x_ball(const Vec& x, const NormSpec& spec, double slack) const {
  return normgeom::norm(vsub_d(x, x_center), spec) <= x_radius + slack;
}

bool Box::in_v_ball(const Vec& v, const NormSpec& spec, double slack) const {
  return normgeom::norm(vsub_d(v, v_center), spec) <= v_radius + slack;
}

namespace opmodel {

using geom::Cone;
using geom::LinCon;
using geom::Polyhedron;
using geom::Rat;
using geom::RatVec;

int ConvexSet::dim() const {
  return kind == Kind::ParabolaEpigraph ? 2 : poly.dim;
}

Operator::Operator(int n, Payload payload) : n_(n), payload_(std::move(payload)) {
  if (n <= 0) throw Error(ErrorCode::BadParams, "operator dimension must be positive");
}

// ---------------------------------------------------------------------------
// Constructors and graph algebra
// ---------------------------------------------------------------------------

OperatorPtr make_polyhedral_graph(int n, std::vector<Polyhedron> pieces) {
  for (const auto& p : pieces)
    if (p.dim != 2 * n)
      throw Error(ErrorCode::DimensionMismatch, "graph pieces must live in R^{2n}");
  return std::make_shared<Operator>(n, PolyhedralGraphData{std::move(pieces)});
}

OperatorPtr make_smooth_map(int n, std::function<Vec(const Vec&)> f,
                            std::function<std::vector<Vec>(const Vec&)> jac) {
  return std::make_shared<Operator>(
      n, SmoothMapData{std::move(f), std::move(jac)});
}

OperatorPtr make_normal_cone(ConvexSet set) {
  int n = set.dim();
  return std::make_shared<Operator>(n, NormalConeData{std::move(set)});
}

OperatorPtr make_sampled_graph(int n, std::vector<GraphPoint> pts) {
  for (const auto& p : pts)
    if (static_cast<int>(p.x.size()) != n || static_cast<int>(p.v.size()) != n)
      throw Error(ErrorCode::DimensionMismatch, "sampled graph point dimension");
  return std::make_shared<Operator>(n, SampledGraphData{std::move(pts)});
}

OperatorPtr op_sum(OperatorPtr a, OperatorPtr b) {
  if (a->dim() != b->dim())
    throw Error(ErrorCode::DimensionMismatch, "sum of operators on different spaces");
  CompositeData c;
  c.kind = CompositeData::Kind::Sum;
  c.a = std::move(a);
  c.b = std::move(b);
  int n = c.a->dim();
  return std::make_shared<Operator>(n, std::move(c));
}

OperatorPtr op_inverse(OperatorPtr a) {
  CompositeData c;
  c.kind = CompositeData::Kind::Inverse;
  c.a = std::move(a);
  int n = c.a->dim();
  return std::make_shared<Operator>(n, std::move(c));
}

OperatorPtr op_shift_J(OperatorPtr a, double sigma, NormSpec spec) {
  spec.validate(a->dim());
  CompositeData c;
  c.kind = CompositeData::Kind::ShiftJ;
  c.a = std::move(a);
  c.sigma = sigma;
  c.spec = std::move(spec);
  int n = c.a->dim();
  return std::make_shared<Operator>(n, std::move(c));
}

OperatorPtr op_scale(OperatorPtr a, double factor) {
  CompositeData c;
  c.kind = CompositeData::Kind::Scale;
  c.a = std::move(a);
  c.factor = factor;
  int n = c.a->dim();
  return std::make_shared<Operator>(n, std::move(c));
}

OperatorPtr op_localize(OperatorPtr a, Box box) {
  box.validate(a->dim());
  CompositeData c;
  c.kind = CompositeData::Kind::Localize;
  c.a = std::move(a);
  c.box = std::move(box);
  int n = c.a->dim();
  return std::make_shared<Operator>(n, std::move(c));
}

// ---------------------------------------------------------------------------
// ValueSet
// ---------------------------------------------------------------------------

bool ValueSet::finite() const {
  for (const auto& s : slices)
    if (geom::affine_dim(s) > 0) return false;
  return true;
}

std::vector<Vec> ValueSet::points() const {
  std::vector<Vec> pts;
  for (const auto& s : slices) {
    auto p = geom::relint_point(s);
    if (p) pts.push_back(geom::to_double(*p));
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

bool ValueSet::contains(const Vec& v, double tol, const NormSpec& spec) const {
  for (const auto& [c, r] : clips)
    if (normgeom::norm(vsub_d(v, c), spec) > r + tol) return false;
  RatVec vr = geom::to_rat(v);
  for (const auto& s : slices) {
    if (geom::contains(s, vr)) return true;
    if (spec.is_euclidean()) {
      auto [d2, nearest] = geom::sqdist(vr, s);
      if (std::sqrt(geom::to_double(d2)) <= tol) return true;
    }
  }
  if (!spec.is_euclidean()) {
    // Sampled fallback for non-Euclidean membership at tolerance.
    for (const auto& pt : sample_points(9, spec))
      if (normgeom::norm(vsub_d(v, pt), spec) <= tol) return true;
  }
  return false;
}

double ValueSet::distance(const Vec& v, const NormSpec& spec) const {
  if (slices.empty()) return std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  if (spec.is_euclidean()) {
    RatVec vr = geom::to_rat(v);
    for (const auto& s : slices) {
      auto [d2, nearest] = geom::sqdist(vr, s);
      best = std::min(best, std::sqrt(geom::to_double(d2)));
    }
  } else {
    for (const auto& pt : sample_points(17, spec))
      best = std::min(best, normgeom::norm(vsub_d(v, pt), spec));
  }
  return best;
}

std::vector<Vec> ValueSet::sample_points(int density, const NormSpec& spec) const {
  std::vector<Vec> out;
  for (const auto& s : slices) {
    Polyhedron clipped = s;
    for (const auto& [c, r] : clips) {
      // Circumscribed coordinate box of the clip ball keeps things polyhedral.
      for (int i = 0; i < n; ++i) {
        RatVec a(n, Rat(0));
        a[i] = 1;
        clipped.cons.push_back({a, geom::to_rat(c[i] + r), false});
        a[i] = -1;
        clipped.cons.push_back({a, geom::to_rat(-(c[i] - r)), false});
      }
    }
    auto rep = geom::v_rep(clipped);
    std::vector<RatVec> pts = rep.vertices;
    auto ri = geom::relint_point(clipped);
    if (ri) pts.push_back(*ri);
    // Fill in segments between vertex pairs.
    for (size_t i = 0; i < rep.vertices.size(); ++i)
      for (size_t j = i + 1; j < rep.vertices.size(); ++j)
        for (int k = 1; k < density; ++k) {
          Rat t = Rat(k) / Rat(density);
          RatVec mid = geom::vadd(geom::vscale(1 - t, rep.vertices[i]),
                                  geom::vscale(t, rep.vertices[j]));
          if (geom::contains(clipped, mid)) pts.push_back(mid);
        }
    for (const auto& p : pts) {
      Vec pd = geom::to_double(p);
      bool ok = true;
      for (const auto& [c, r] : clips)
        if (normgeom::norm(vsub_d(pd, c), spec) > r * (1.0 + 1e-12) + 1e-15) {
          ok = false;
          break;
        }
      if (ok) out.push_back(pd);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

// Slice of a graph piece at fixed x: a polyhedron over v. nullopt when the
// piece misses x.
std::optional<Polyhedron> slice_at_x(const Polyhedron& piece, int n,
                                     const RatVec& x) {
  Polyhedron s;
  s.dim = n;
  for (const auto& con : piece.cons) {
    RatVec av(con.a.begin() + n, con.a.end());
    Rat ax_dot = 0;
    for (int i = 0; i < n; ++i) ax_dot += con.a[i] * x[i];
    Rat rhs = con.b - ax_dot;
    if (geom::is_zero(av)) {
      if (con.eq ? (rhs != 0) : (rhs < 0)) return std::nullopt;
      continue;
    }
    s.cons.push_back({av, rhs, con.eq});
  }
  if (geom::is_empty(s)) return std::nullopt;
  return s;
}

// Slice at fixed v: a polyhedron over x.
std::optional<Polyhedron> slice_at_v(const Polyhedron& piece, int n,
                                     const RatVec& v) {
  Polyhedron s;
  s.dim = n;
  for (const auto& con : piece.cons) {
    RatVec ax(con.a.begin(), con.a.begin() + n);
    Rat av_dot = 0;
    for (int i = 0; i < n; ++i) av_dot += con.a[n + i] * v[i];
    Rat rhs = con.b - av_dot;
    if (geom::is_zero(ax)) {
      if (con.eq ? (rhs != 0) : (rhs < 0)) return std::nullopt;
      continue;
    }
    s.cons.push_back({ax, rhs, con.eq});
  }
  if (geom::is_empty(s)) return std::nullopt;
  return s;
}

Polyhedron point_poly(const RatVec& p) {
  Polyhedron s;
  s.dim = static_cast<int>(p.size());
  for (int i = 0; i < s.dim; ++i) {
    RatVec a(s.dim, Rat(0));
    a[i] = 1;
    s.cons.push_back({a, p[i], true});
  }
  return s;
}

// Minkowski sum of two polyhedra in R^n via exact elimination.
Polyhedron minkowski(const Polyhedron& a, const Polyhedron& b) {
  const int n = a.dim;
  Polyhedron big;
  big.dim = 2 * n; // (v, u) with u in a, v - u in b
  for (const auto& con : a.cons) {
    RatVec row(2 * n, Rat(0));
    for (int i = 0; i < n; ++i) row[n + i] = con.a[i];
    big.cons.push_back({row, con.b, con.eq});
  }
  for (const auto& con : b.cons) {
    RatVec row(2 * n, Rat(0));
    for (int i = 0; i < n; ++i) {
      row[i] = con.a[i];
      row[n + i] = -con.a[i];
    }
    big.cons.push_back({row, con.b, con.eq});
  }
  std::vector<int> drop;
  for (int i = 0; i < n; ++i) drop.push_back(n + i);
  return geom::eliminate(big, drop);
}

// Normal cone of a polyhedron at a point as an H-form polyhedron over v.
std::optional<Polyhedron> normal_cone_slice(const Polyhedron& set,
                                            const RatVec& x) {
  if (!geom::contains(set, x)) return std::nullopt;
  std::vector<RatVec> gens, lines;
  for (const auto& con : set.cons) {
    if (geom::dot(con.a, x) == con.b) {
      if (con.eq)
        lines.push_back(con.a);
      else
        gens.push_back(con.a);
    }
  }
  Cone c = geom::cone_generated(set.dim, gens, lines);
  Polyhedron s;
  s.dim = set.dim;
  for (const auto& [nrm, eq] : geom::cone_halfspaces(c))
    s.cons.push_back({nrm, Rat(0), eq});
  return s;
}

// Normal cone of the parabola epigraph {b >= a^2} at x, exact in rationals.
std::optional<Polyhedron> parabola_cone_slice(const RatVec& x) {
  const Rat& a = x[0];
  const Rat& b = x[1];
  if (b < a * a) return std::nullopt;
  if (b > a * a) return point_poly({Rat(0), Rat(0)});
  // Boundary: the ray spanned by (2a, -1).
  Polyhedron s;
  s.dim = 2;
  s.cons.push_back({{Rat(1), 2 * a}, Rat(0), true}); // v1 + 2a v2 = 0
  s.cons.push_back({{Rat(0), Rat(1)}, Rat(0), false}); // v2 <= 0
  return s;
}

ValueSet evaluate_raw(const Operator& op, const Vec& x, double tol,
                      const NormSpec& spec);

// {y : q in T(y)} without clips.
ValueSet inverse_values_raw(const Operator& op, const Vec& q, double tol,
                            const NormSpec& spec) {
  const int n = op.dim();
  ValueSet out;
  out.n = n;
  auto pieces = polyhedral_pieces(op);
  if (pieces) {
    RatVec qr = geom::to_rat(q);
    for (const auto& piece : *pieces) {
      auto s = slice_at_v(piece, n, qr);
      if (s) out.slices.push_back(*s);
    }
    return out;
  }
  if (const auto* nc = std::get_if<NormalConeData>(&op.payload())) {
    if (nc->set.kind == ConvexSet::Kind::ParabolaEpigraph) {
      RatVec qr = geom::to_rat(q);
      if (qr[1] < 0) {
        Rat a = -qr[0] / (2 * qr[1]);
        out.slices.push_back(point_poly({a, a * a}));
      } else if (qr[0] == 0 && qr[1] == 0) {
        throw Error(ErrorCode::Unsupported,
                    "parabola normal cone inverse at 0 is the whole epigraph");
      }
      return out;
    }
  }
  throw Error(ErrorCode::Unsupported,
              "no finite description of the inverse values");
}

ValueSet evaluate_raw(const Operator& op, const Vec& x, double tol,
                      const NormSpec& spec) {
  const int n = op.dim();
  ValueSet out;
  out.n = n;
  RatVec xr = geom::to_rat(x);

  if (const auto* pg = std::get_if<PolyhedralGraphData>(&op.payload())) {
    for (const auto& piece : pg->pieces) {
      auto s = slice_at_x(piece, n, xr);
      if (s) out.slices.push_back(*s);
    }
    return out;
  }
  if (const auto* sm = std::get_if<SmoothMapData>(&op.payload())) {
    out.slices.push_back(point_poly(geom::to_rat(sm->f(x))));
    return out;
  }
  if (const auto* nc = std::get_if<NormalConeData>(&op.payload())) {
    std::optional<Polyhedron> s;
    if (nc->set.kind == ConvexSet::Kind::ParabolaEpigraph)
      s = parabola_cone_slice(xr);
    else
      s = normal_cone_slice(nc->set.poly, xr);
    if (s) out.slices.push_back(*s);
    return out;
  }
  if (const auto* sg = std::get_if<SampledGraphData>(&op.payload())) {
    for (const auto& pt : sg->points) {
      double d = 0;
      for (int i = 0; i < n; ++i) d = std::max(d, std::abs(pt.x[i] - x[i]));
      if (d <= tol) out.slices.push_back(point_poly(geom::to_rat(pt.v)));
    }
    return out;
  }
  const auto& comp = std::get<CompositeData>(op.payload());
  switch (comp.kind) {
    case CompositeData::Kind::Sum: {
      ValueSet va = evaluate_raw(*comp.a, x, tol, spec);
      ValueSet vb = evaluate_raw(*comp.b, x, tol, spec);
      if (!va.clips.empty() || !vb.clips.empty())
        throw Error(ErrorCode::Unsupported,
                    "Minkowski sum of clipped value sets");
      if (va.empty() || vb.empty()) return out;
      for (const auto& sa : va.slices)
        for (const auto& sb : vb.slices) {
          Polyhedron s = minkowski(sa, sb);
          if (!geom::is_empty(s)) out.slices.push_back(s);
        }
      return out;
    }
    case CompositeData::Kind::Inverse:
      return inverse_values_raw(*comp.a, x, tol, spec);
    case CompositeData::Kind::ShiftJ: {
      ValueSet v = evaluate_raw(*comp.a, x, tol, spec);
      Vec j = normgeom::duality_map(x, comp.spec);
      RatVec shift(n);
      for (int i = 0; i < n; ++i) shift[i] = geom::to_rat(comp.sigma * j[i]);
      for (auto& s : v.slices) s = geom::translate(s, shift);
      for (auto& [c, r] : v.clips)
        for (int i = 0; i < n; ++i) c[i] += comp.sigma * j[i];
      return v;
    }
    case CompositeData::Kind::Scale: {
      ValueSet v = evaluate_raw(*comp.a, x, tol, spec);
      if (comp.factor == 0.0) {
        out.slices.clear();
        bool nonempty = false;
        for (const auto& s : v.slices)
          if (!geom::is_empty(s)) nonempty = true;
        if (nonempty) out.slices.push_back(point_poly(RatVec(n, Rat(0))));
        return out;
      }
      Rat c = geom::to_rat(comp.factor);
      geom::RatMat inv(n, RatVec(n, Rat(0)));
      for (int i = 0; i < n; ++i) inv[i][i] = Rat(1) / c;
      for (auto& s : v.slices) s = geom::map_poly(s, inv);
      for (auto& [ctr, r] : v.clips) {
        for (auto& ci : ctr) ci *= comp.factor;
        r *= std::abs(comp.factor);
      }
      return v;
    }
    case CompositeData::Kind::Localize: {
      if (!comp.box.in_x_ball(x, spec, tol)) return out;
      ValueSet v = evaluate_raw(*comp.a, x, tol, spec);
      v.clips.push_back({comp.box.v_center, comp.box.v_radius});
      return v;
    }
  }
  throw Error(ErrorCode::Internal, "unknown operator payload");
}

} // namespace

ValueSet evaluate(const Operator& op, const Vec& x, const Box& box, double tol,
                  const NormSpec& spec) {
  box.validate(op.dim());
  ValueSet v = evaluate_raw(op, x, tol, spec);
  v.clips.push_back({box.v_center, box.v_radius});
  // Drop slices that provably miss the clip balls.
  std::vector<Polyhedron> kept;
  for (const auto& s : v.slices) {
    bool ok = true;
    for (const auto& [c, r] : v.clips) {
      if (spec.is_euclidean()) {
        auto [d2, nearest] = geom::sqdist(geom::to_rat(c), s);
        if (geom::to_double(d2) > (r + tol) * (r + tol)) {
          ok = false;
          break;
        }
      }
    }
    if (ok) kept.push_back(s);
  }
  v.slices = std::move(kept);
  return v;
}

// ---------------------------------------------------------------------------
// Polyhedral views
// ---------------------------------------------------------------------------

namespace {

std::vector<Polyhedron> normal_cone_graph_pieces(const Polyhedron& set) {
  const int n = set.dim;
  std::vector<Polyhedron> pieces;
  for (const auto& face : geom::faces_of(set)) {
    // Piece = face x (normal cone on the face's relative interior).
    std::vector<RatVec> gens, lines;
    for (int i : face.active) {
      if (set.cons[i].eq)
        lines.push_back(set.cons[i].a);
      else
        gens.push_back(set.cons[i].a);
    }
    Cone c = geom::cone_generated(n, gens, lines);
    Polyhedron piece;
    piece.dim = 2 * n;
    for (const auto& con : face.poly.cons) {
      RatVec row(2 * n, Rat(0));
      for (int i = 0; i < n; ++i) row[i] = con.a[i];
      piece.cons.push_back({row, con.b, con.eq});
    }
    for (const auto& [nrm, eq] : geom::cone_halfspaces(c)) {
      RatVec row(2 * n, Rat(0));
      for (int i = 0; i < n; ++i) row[n + i] = nrm[i];
      piece.cons.push_back({row, Rat(0), eq});
    }
    pieces.push_back(std::move(piece));
  }
  return pieces;
}

Polyhedron swap_blocks(const Polyhedron& piece, int n) {
  Polyhedron q;
  q.dim = piece.dim;
  for (const auto& con : piece.cons) {
    RatVec row(2 * n);
    for (int i = 0; i < n; ++i) {
      row[i] = con.a[n + i];
      row[n + i] = con.a[i];
    }
    q.cons.push_back({row, con.b, con.eq});
  }
  return q;
}

} // namespace

std::optional<std::vector<Polyhedron>> polyhedral_pieces(const Operator& op) {
  if (op.pieces_hint) return *op.pieces_hint;
  const int n = op.dim();

  if (const auto* pg = std::get_if<PolyhedralGraphData>(&op.payload()))
    return pg->pieces;
  if (std::get_if<SmoothMapData>(&op.payload())) return std::nullopt;
  if (const auto* nc = std::get_if<NormalConeData>(&op.payload())) {
    if (nc->set.kind == ConvexSet::Kind::ParabolaEpigraph) return std::nullopt;
    return normal_cone_graph_pieces(nc->set.poly);
  }
  if (const auto* sg = std::get_if<SampledGraphData>(&op.payload())) {
    std::vector<Polyhedron> pieces;
    for (const auto& pt : sg->points) {
      RatVec z = geom::to_rat(pt.x);
      RatVec v = geom::to_rat(pt.v);
      z.insert(z.end(), v.begin(), v.end());
      pieces.push_back(point_poly(z));
    }
    return pieces;
  }

  const auto& comp = std::get<CompositeData>(op.payload());
  switch (comp.kind) {
    case CompositeData::Kind::Sum: {
      auto pa = polyhedral_pieces(*comp.a);
      auto pb = polyhedral_pieces(*comp.b);
      if (!pa || !pb) return std::nullopt;
      std::vector<Polyhedron> pieces;
      for (const auto& A : *pa)
        for (const auto& B : *pb) {
          // Variables (x, v, u): A on (x, u), B on (x, v - u); eliminate u.
          Polyhedron big;
          big.dim = 3 * n;
          for (const auto& con : A.cons) {
            RatVec row(3 * n, Rat(0));
            for (int i = 0; i < n; ++i) {
              row[i] = con.a[i];
              row[2 * n + i] = con.a[n + i];
            }
            big.cons.push_back({row, con.b, con.eq});
          }
          for (const auto& con : B.cons) {
            RatVec row(3 * n, Rat(0));
            for (int i = 0; i < n; ++i) {
              row[i] = con.a[i];
              row[n + i] = con.a[n + i];
              row[2 * n + i] = -con.a[n + i];
            }
            big.cons.push_back({row, con.b, con.eq});
          }
          std::vector<int> drop;
          for (int i = 0; i < n; ++i) drop.push_back(2 * n + i);
          Polyhedron s = geom::eliminate(big, drop);
          if (!geom::is_empty(s)) pieces.push_back(std::move(s));
        }
      return pieces;
    }
    case CompositeData::Kind::Inverse: {
      auto pa = polyhedral_pieces(*comp.a);
      if (!pa) return std::nullopt;
      std::vector<Polyhedron> pieces;
      for (const auto& p : *pa) pieces.push_back(swap_blocks(p, n));
      return pieces;
    }
    case CompositeData::Kind::ShiftJ: {
      if (!comp.spec.is_euclidean()) return std::nullopt;
      auto pa = polyhedral_pieces(*comp.a);
      if (!pa) return std::nullopt;
      // Image under (x, v) -> (x, v + sigma x); inverse map (x, v - sigma x).
      Rat s = geom::to_rat(comp.sigma);
      geom::RatMat inv(2 * n, RatVec(2 * n, Rat(0)));
      for (int i = 0; i < n; ++i) {
        inv[i][i] = 1;
        inv[n + i][n + i] = 1;
        inv[n + i][i] = -s;
      }
      std::vector<Polyhedron> pieces;
      for (const auto& p : *pa) pieces.push_back(geom::map_poly(p, inv));
      return pieces;
    }
    case CompositeData::Kind::Scale: {
      auto pa = polyhedral_pieces(*comp.a);
      if (!pa) return std::nullopt;
      std::vector<Polyhedron> pieces;
      if (comp.factor == 0.0) {
        for (const auto& p : *pa) {
          std::vector<int> drop;
          for (int i = 0; i < n; ++i) drop.push_back(n + i);
          Polyhedron dom = geom::eliminate(p, drop);
          if (geom::is_empty(dom)) continue;
          Polyhedron piece;
          piece.dim = 2 * n;
          for (const auto& con : dom.cons) {
            RatVec row(2 * n, Rat(0));
            for (int i = 0; i < n; ++i) row[i] = con.a[i];
            piece.cons.push_back({row, con.b, con.eq});
          }
          for (int i = 0; i < n; ++i) {
            RatVec row(2 * n, Rat(0));
            row[n + i] = 1;
            piece.cons.push_back({row, Rat(0), true});
          }
          pieces.push_back(std::move(piece));
        }
        return pieces;
      }
      Rat c = geom::to_rat(comp.factor);
      geom::RatMat inv(2 * n, RatVec(2 * n, Rat(0)));
      for (int i = 0; i < n; ++i) {
        inv[i][i] = 1;
        inv[n + i][n + i] = Rat(1) / c;
      }
      for (const auto& p : *pa) pieces.push_back(geom::map_poly(p, inv));
      return pieces;
    }
    case CompositeData::Kind::Localize: {
      auto pa = polyhedral_pieces(*comp.a);
      if (!pa) return std::nullopt;
      Polyhedron hull = box_hull(comp.box, n);
      std::vector<Polyhedron> pieces;
      for (const auto& p : *pa) {
        Polyhedron q = geom::intersect(p, hull);
        if (!geom::is_empty(q)) pieces.push_back(std::move(q));
      }
      return pieces;
    }
  }
  return std::nullopt;
}

geom::Polyhedron box_hull(const Box& box, int n) {
  Polyhedron h;
  h.dim = 2 * n;
  for (int i = 0; i < n; ++i) {
    RatVec a(2 * n, Rat(0));
    a[i] = 1;
    h.cons.push_back({a, geom::to_rat(box.x_center[i] + box.x_radius), false});
    a[i] = -1;
    h.cons.push_back({a, geom::to_rat(-(box.x_center[i] - box.x_radius)), false});
  }
  for (int i = 0; i < n; ++i) {
    RatVec a(2 * n, Rat(0));
    a[n + i] = 1;
    h.cons.push_back({a, geom::to_rat(box.v_center[i] + box.v_radius), false});
    a[n + i] = -1;
    h.cons.push_back({a, geom::to_rat(-(box.v_center[i] - box.v_radius)), false});
  }
  return h;
}

std::optional<geom::Polyhedron> domain_hull(const Operator& op, int piece_index) {
  auto pieces = polyhedral_pieces(op);
  if (!pieces || piece_index >= static_cast<int>(pieces->size()))
    return std::nullopt;
  const int n = op.dim();
  std::vector<int> drop;
  for (int i = 0; i < n; ++i) drop.push_back(n + i);
  return geom::eliminate((*pieces)[piece_index], drop);
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

SampledGraph sample_graph(const Operator& op, const Box& box, int density,
                          const NormSpec& spec, double tol) {
  if (density < 2) throw Error(ErrorCode::BadParams, "sampling density >= 2");
  const int n = op.dim();
  box.validate(n);

  std::vector<Vec> xs;
  std::vector<double> axis;
  for (int k = 0; k < density; ++k)
    axis.push_back(-1.0 + 2.0 * k / (density - 1));
  std::vector<int> idx(n, 0);
  while (true) {
    Vec x(n);
    for (int i = 0; i < n; ++i)
      x[i] = box.x_center[i] + box.x_radius * axis[idx[i]];
    xs.push_back(x);
    int i = 0;
    while (i < n && ++idx[i] == density) idx[i++] = 0;
    if (i == n) break;
  }
  xs.push_back(box.x_center);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<GraphPoint> pts;
  double slack = 1e-12 * (1.0 + box.x_radius);
  for (const auto& x : xs) {
    if (!box.in_x_ball(x, spec, slack)) continue;
    ValueSet vs = evaluate(op, x, box, tol, spec);
    for (const auto& v : vs.sample_points(density, spec))
      pts.push_back({x, v});
  }

  // Enrich with the exact vertices of every polyhedral piece inside the box.
  auto pieces = polyhedral_pieces(op);
  if (pieces) {
    Polyhedron hull = box_hull(box, n);
    for (const auto& piece : *pieces) {
      Polyhedron clipped = geom::intersect(piece, hull);
      if (geom::is_empty(clipped)) continue;
      for (const auto& z : geom::v_rep(clipped).vertices) {
        Vec x(n), v(n);
        for (int i = 0; i < n; ++i) {
          x[i] = geom::to_double(z[i]);
          v[i] = geom::to_double(z[n + i]);
        }
        if (!box.in_x_ball(x, spec, slack) || !box.in_v_ball(v, spec, slack))
          continue;
        ValueSet vs = evaluate(op, x, box, tol, spec);
        if (vs.contains(v, tol, spec)) pts.push_back({x, v});
      }
    }
  }

  std::sort(pts.begin(), pts.end(), [](const GraphPoint& a, const GraphPoint& b) {
    return a.x != b.x ? a.x < b.x : a.v < b.v;
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const GraphPoint& a, const GraphPoint& b) {
                          return a.x == b.x && a.v == b.v;
                        }),
            pts.end());
  if (pts.empty())
    throw Error(ErrorCode::EmptyGraph, "graph does not meet the box");
  SampledGraph g;
  g.n = n;
  g.points = std::move(pts);
  return g;
}

} // namespace opmodel
} // namespace monolab
