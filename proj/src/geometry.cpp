#include "monolab/geometry.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace monolab::geom {

namespace {

// Joint canonical form of (a, b) for constraint deduplication. Positive
// scaling only: (a, b) and (-a, -b) are different halfspaces.
RatVec row_key(const RatVec& a, const Rat& b) {
  RatVec full = a;
  full.push_back(b);
  return canonical_row(full);
}

} // namespace

Polyhedron make_poly(int dim, std::vector<LinCon> cons) {
  Polyhedron p;
  p.dim = dim;
  p.cons = std::move(cons);
  for (const auto& c : p.cons)
    if (static_cast<int>(c.a.size()) != dim)
      throw std::invalid_argument("make_poly: constraint size mismatch");
  return p;
}

bool contains(const Polyhedron& p, const RatVec& z) {
  for (const auto& c : p.cons) {
    Rat v = dot(c.a, z);
    if (c.eq ? (v != c.b) : (v > c.b)) return false;
  }
  return true;
}

Polyhedron intersect(const Polyhedron& p, const Polyhedron& q) {
  if (p.dim != q.dim) throw std::invalid_argument("intersect: dim mismatch");
  Polyhedron r = p;
  r.cons.insert(r.cons.end(), q.cons.begin(), q.cons.end());
  return r;
}

// ---------------------------------------------------------------------------
// Fourier-Motzkin with strictness tracking
// ---------------------------------------------------------------------------

namespace {

struct FmRow {
  RatVec a; // over the current free variables
  Rat b;
  bool strict;
};

// Chooses a value in the interval given by (lo, hi) honoring open bounds,
// as close to tgt as possible. The interval is guaranteed nonempty.
Rat pick_in_interval(bool has_lo, const Rat& lo, bool lo_open, bool has_hi,
                     const Rat& hi, bool hi_open, const Rat& tgt) {
  if (!has_lo && !has_hi) return tgt;
  if (!has_hi) {
    if (tgt > lo || (!lo_open && tgt == lo)) return tgt;
    return lo_open ? lo + 1 : lo;
  }
  if (!has_lo) {
    if (tgt < hi || (!hi_open && tgt == hi)) return tgt;
    return hi_open ? hi - 1 : hi;
  }
  if (tgt > lo && tgt < hi) return tgt;
  if (tgt <= lo) {
    if (!lo_open && tgt == lo) return lo;
    if (lo == hi) return lo; // both closed by feasibility
    return lo_open || tgt < lo ? (lo + hi) / 2 : lo;
  }
  if (!hi_open && tgt == hi) return hi;
  if (lo == hi) return hi;
  return hi_open || tgt > hi ? (lo + hi) / 2 : hi;
}

} // namespace

std::optional<RatVec> solve_strict(const StrictSystem& sys,
                                   const RatVec* target) {
  const int dim = sys.dim;

  // Phase 1: Gauss elimination of the equalities.
  RatMat eq(sys.eqs.size());
  for (size_t i = 0; i < sys.eqs.size(); ++i) {
    eq[i] = sys.eqs[i].first;
    eq[i].push_back(sys.eqs[i].second);
  }
  std::vector<int> pivots;
  {
    size_t r = 0;
    for (int c = 0; c < dim && r < eq.size(); ++c) {
      size_t sel = r;
      while (sel < eq.size() && eq[sel][c] == 0) ++sel;
      if (sel == eq.size()) continue;
      std::swap(eq[r], eq[sel]);
      Rat inv = Rat(1) / eq[r][c];
      for (int j = c; j <= dim; ++j) eq[r][j] *= inv;
      for (size_t i = 0; i < eq.size(); ++i) {
        if (i == r || eq[i][c] == 0) continue;
        Rat f = eq[i][c];
        for (int j = c; j <= dim; ++j) eq[i][j] -= f * eq[r][j];
      }
      pivots.push_back(c);
      ++r;
    }
    for (size_t i = r; i < eq.size(); ++i)
      if (eq[i][dim] != 0) return std::nullopt; // inconsistent equalities
    eq.resize(r);
  }
  std::vector<bool> is_pivot(dim, false);
  for (int p : pivots) is_pivot[p] = true;
  std::vector<int> free_vars;
  for (int j = 0; j < dim; ++j)
    if (!is_pivot[j]) free_vars.push_back(j);
  const int nfree = static_cast<int>(free_vars.size());

  // Substitute pivot vars into the inequalities: x_p = eq[i][dim] - sum_f eq[i][f] x_f.
  std::vector<FmRow> rows;
  for (const auto& s : sys.ineqs) {
    FmRow r;
    r.a.assign(nfree, Rat(0));
    r.b = s.b;
    r.strict = s.strict;
    RatVec coef = s.a; // effective coefficient per original var
    for (size_t i = 0; i < pivots.size(); ++i) {
      Rat cp = coef[pivots[i]];
      if (cp == 0) continue;
      r.b -= cp * eq[i][dim];
      for (int f = 0; f < nfree; ++f) coef[free_vars[f]] -= cp * eq[i][free_vars[f]];
      coef[pivots[i]] = 0;
    }
    for (int f = 0; f < nfree; ++f) r.a[f] = coef[free_vars[f]];
    rows.push_back(std::move(r));
  }

  // Phase 2: FM elimination from the last free variable down, keeping levels.
  std::vector<std::vector<FmRow>> level(nfree + 1);
  level[nfree] = std::move(rows);
  for (int k = nfree; k >= 1; --k) {
    std::vector<FmRow> pos, neg, rest;
    for (auto& r : level[k]) {
      bool constant = true;
      for (int j = 0; j < k; ++j)
        if (r.a[j] != 0) {
          constant = false;
          break;
        }
      if (constant) {
        if (r.strict ? (r.b <= 0) : (r.b < 0)) return std::nullopt;
        continue;
      }
      Rat c = r.a[k - 1];
      if (c > 0)
        pos.push_back(r);
      else if (c < 0)
        neg.push_back(r);
      else
        rest.push_back(r);
    }
    // Keep the split rows available for back-substitution.
    level[k].clear();
    for (auto& r : pos) level[k].push_back(r);
    for (auto& r : neg) level[k].push_back(r);
    std::set<RatVec> seen;
    auto push = [&](FmRow r) {
      RatVec key = row_key(RatVec(r.a.begin(), r.a.begin() + (k - 1)), r.b);
      key.push_back(Rat(r.strict ? 1 : 0));
      if (seen.insert(key).second) level[k - 1].push_back(std::move(r));
    };
    for (auto& r : rest) {
      r.a.resize(k - 1);
      push(std::move(r));
    }
    for (const auto& up : pos)
      for (const auto& lo : neg) {
        FmRow r;
        r.strict = up.strict || lo.strict;
        Rat cu = up.a[k - 1], cl = -lo.a[k - 1];
        r.a.assign(k - 1, Rat(0));
        for (int j = 0; j < k - 1; ++j) r.a[j] = cl * up.a[j] + cu * lo.a[j];
        r.b = cl * up.b + cu * lo.b;
        push(std::move(r));
      }
  }
  for (const auto& r : level[0])
    if (r.strict ? (r.b <= 0) : (r.b < 0)) return std::nullopt;

  // Phase 3: back-substitution.
  RatVec fx(nfree, Rat(0));
  for (int k = 1; k <= nfree; ++k) {
    bool has_lo = false, has_hi = false, lo_open = false, hi_open = false;
    Rat lo = 0, hi = 0;
    for (const auto& r : level[k]) {
      Rat c = r.a[k - 1];
      if (c == 0) continue;
      Rat rest = 0;
      for (int j = 0; j < k - 1; ++j) rest += r.a[j] * fx[j];
      Rat bound = (r.b - rest) / c;
      if (c > 0) {
        if (!has_hi || bound < hi || (bound == hi && r.strict)) {
          hi = bound;
          hi_open = has_hi && bound == hi ? (hi_open || r.strict) : r.strict;
          has_hi = true;
        }
      } else {
        if (!has_lo || bound > lo || (bound == lo && r.strict)) {
          lo = bound;
          lo_open = has_lo && bound == lo ? (lo_open || r.strict) : r.strict;
          has_lo = true;
        }
      }
    }
    Rat tgt = 0;
    if (target) tgt = (*target)[free_vars[k - 1]];
    fx[k - 1] = pick_in_interval(has_lo, lo, lo_open, has_hi, hi, hi_open, tgt);
  }

  RatVec z(dim, Rat(0));
  for (int f = 0; f < nfree; ++f) z[free_vars[f]] = fx[f];
  for (size_t i = 0; i < pivots.size(); ++i) {
    Rat v = eq[i][dim];
    for (int f = 0; f < nfree; ++f) v -= eq[i][free_vars[f]] * fx[f];
    z[pivots[i]] = v;
  }
  return z;
}

// ---------------------------------------------------------------------------
// Basic polyhedron queries
// ---------------------------------------------------------------------------

namespace {

StrictSystem weak_system(const Polyhedron& p) {
  StrictSystem s;
  s.dim = p.dim;
  for (const auto& c : p.cons) {
    if (c.eq)
      s.eqs.push_back({c.a, c.b});
    else
      s.ineqs.push_back({c.a, c.b, false});
  }
  return s;
}

} // namespace

bool is_empty(const Polyhedron& p) {
  return !solve_strict(weak_system(p)).has_value();
}

std::vector<int> implicit_equalities(const Polyhedron& p) {
  std::vector<int> res;
  for (size_t i = 0; i < p.cons.size(); ++i) {
    if (p.cons[i].eq) {
      res.push_back(static_cast<int>(i));
      continue;
    }
    StrictSystem s = weak_system(p);
    // Feasible with constraint i strict? If not, it is an implicit equality.
    size_t k = 0;
    for (size_t j = 0; j < p.cons.size(); ++j) {
      if (p.cons[j].eq) continue;
      if (j == i) s.ineqs[k].strict = true;
      ++k;
    }
    if (!solve_strict(s)) res.push_back(static_cast<int>(i));
  }
  return res;
}

int affine_dim(const Polyhedron& p) {
  if (is_empty(p)) return -1;
  auto impl = implicit_equalities(p);
  RatMat rows;
  for (int i : impl) rows.push_back(p.cons[i].a);
  return p.dim - rank(rows);
}

std::optional<RatVec> relint_point(const Polyhedron& p, const RatVec* target) {
  auto impl = implicit_equalities(p);
  std::set<int> tight(impl.begin(), impl.end());
  StrictSystem s;
  s.dim = p.dim;
  for (size_t i = 0; i < p.cons.size(); ++i) {
    if (tight.count(static_cast<int>(i)))
      s.eqs.push_back({p.cons[i].a, p.cons[i].b});
    else
      s.ineqs.push_back({p.cons[i].a, p.cons[i].b, true});
  }
  return solve_strict(s, target);
}

// ---------------------------------------------------------------------------
// V-representation
// ---------------------------------------------------------------------------

VRep v_rep(const Polyhedron& p) {
  VRep rep;
  const int d = p.dim;
  const int m = static_cast<int>(p.cons.size());

  // Recession cone.
  std::vector<RatVec> leq0, eq0;
  for (const auto& c : p.cons) (c.eq ? eq0 : leq0).push_back(c.a);
  Cone rc = cone_from_halfspaces(d, leq0, eq0);
  rep.rays = rc.rays;
  rep.lines = rc.lineality;

  if (!rep.lines.empty()) return rep; // no vertices with nontrivial lineality

  // Vertices: d linearly independent tight constraints.
  std::set<RatVec> seen;
  std::vector<int> idx(m);
  for (int i = 0; i < m; ++i) idx[i] = i;
  std::vector<int> comb;
  auto try_comb = [&](const std::vector<int>& s) {
    RatMat a;
    RatVec b;
    for (int i : s) {
      a.push_back(p.cons[i].a);
      b.push_back(p.cons[i].b);
    }
    if (rank(a) != d) return;
    auto z = solve_linear(a, b, d);
    if (!z || !contains(p, *z)) return;
    if (seen.insert(*z).second) rep.vertices.push_back(*z);
  };
  // Enumerate all d-subsets.
  std::vector<int> stack;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(stack.size()) == d) {
      try_comb(stack);
      return;
    }
    for (int i = start; i < m; ++i) {
      stack.push_back(i);
      rec(i + 1);
      stack.pop_back();
    }
  };
  if (d > 0 && m >= d) rec(0);
  if (d == 0 && !is_empty(p)) rep.vertices.push_back(RatVec{});
  std::sort(rep.vertices.begin(), rep.vertices.end());
  return rep;
}

// ---------------------------------------------------------------------------
// Face lattice
// ---------------------------------------------------------------------------

namespace {

Polyhedron with_active(const Polyhedron& p, const std::vector<int>& act) {
  Polyhedron q = p;
  for (int i : act) q.cons[i].eq = true;
  return q;
}

} // namespace

std::vector<Face> faces_of(const Polyhedron& p) {
  std::vector<Face> out;
  if (is_empty(p)) return out;
  std::set<std::vector<int>> visited;
  std::vector<std::vector<int>> queue;

  auto canonical = [&](const std::vector<int>& act) -> std::optional<std::vector<int>> {
    Polyhedron q = with_active(p, act);
    if (is_empty(q)) return std::nullopt;
    return implicit_equalities(q);
  };

  auto root = canonical({});
  queue.push_back(*root);
  visited.insert(*root);
  while (!queue.empty()) {
    std::vector<int> act = queue.back();
    queue.pop_back();
    Face f;
    f.active = act;
    f.poly = with_active(p, act);
    RatMat rows;
    for (int i : act) rows.push_back(p.cons[i].a);
    f.dim = p.dim - rank(rows);
    out.push_back(f);
    std::set<int> in_act(act.begin(), act.end());
    for (size_t i = 0; i < p.cons.size(); ++i) {
      if (in_act.count(static_cast<int>(i))) continue;
      std::vector<int> next = act;
      next.push_back(static_cast<int>(i));
      std::sort(next.begin(), next.end());
      auto canon = canonical(next);
      if (!canon) continue;
      if (visited.insert(*canon).second) queue.push_back(*canon);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Projection / linear images
// ---------------------------------------------------------------------------

namespace {

// Drops constraints implied by the rest (needed to tame FM output growth).
std::vector<LinCon> prune_redundant(int dim, std::vector<LinCon> cons) {
  // Dedup first.
  std::set<RatVec> seen;
  std::vector<LinCon> uniq;
  for (auto& c : cons) {
    if (!c.eq && is_zero(c.a) && c.b >= 0) continue; // trivial
    RatVec key = row_key(c.a, c.b);
    key.push_back(Rat(c.eq ? 1 : 0));
    if (seen.insert(key).second) uniq.push_back(std::move(c));
  }
  std::vector<LinCon> kept = uniq;
  for (size_t i = 0; i < kept.size();) {
    if (kept[i].eq) {
      ++i;
      continue;
    }
    StrictSystem s;
    s.dim = dim;
    for (size_t j = 0; j < kept.size(); ++j) {
      if (j == i) continue;
      if (kept[j].eq)
        s.eqs.push_back({kept[j].a, kept[j].b});
      else
        s.ineqs.push_back({kept[j].a, kept[j].b, false});
    }
    RatVec neg = kept[i].a;
    for (auto& x : neg) x = -x;
    s.ineqs.push_back({neg, -kept[i].b, true}); // violate constraint i
    if (!solve_strict(s))
      kept.erase(kept.begin() + static_cast<long>(i));
    else
      ++i;
  }
  return kept;
}

} // namespace

Polyhedron eliminate(const Polyhedron& p, std::vector<int> drop) {
  std::sort(drop.begin(), drop.end(), std::greater<int>());
  // Work over inequality pairs to keep FM uniform.
  struct Row {
    RatVec a;
    Rat b;
  };
  std::vector<Row> rows;
  for (const auto& c : p.cons) {
    rows.push_back({c.a, c.b});
    if (c.eq) {
      RatVec neg = c.a;
      for (auto& x : neg) x = -x;
      rows.push_back({neg, -c.b});
    }
  }
  int dim = p.dim;
  std::vector<int> keep_map(dim);
  for (int i = 0; i < dim; ++i) keep_map[i] = i;

  for (int var : drop) {
    std::vector<Row> pos, neg, rest;
    for (auto& r : rows) {
      if (r.a[var] > 0)
        pos.push_back(r);
      else if (r.a[var] < 0)
        neg.push_back(r);
      else
        rest.push_back(r);
    }
    std::vector<Row> next = rest;
    for (const auto& up : pos)
      for (const auto& lo : neg) {
        Row r;
        Rat cu = up.a[var], cl = -lo.a[var];
        r.a.assign(dim, Rat(0));
        for (int j = 0; j < dim; ++j) r.a[j] = cl * up.a[j] + cu * lo.a[j];
        r.b = cl * up.b + cu * lo.b;
        next.push_back(std::move(r));
      }
    // Remove the eliminated coordinate.
    for (auto& r : next) r.a.erase(r.a.begin() + var);
    --dim;
    rows = std::move(next);
    std::vector<LinCon> cons;
    for (auto& r : rows) cons.push_back({r.a, r.b, false});
    cons = prune_redundant(dim, std::move(cons));
    rows.clear();
    for (auto& c : cons) rows.push_back({c.a, c.b});
  }
  Polyhedron q;
  q.dim = dim;
  for (auto& r : rows) q.cons.push_back({r.a, r.b, false});
  return q;
}

Polyhedron map_poly(const Polyhedron& p, const RatMat& m_inverse) {
  Polyhedron q;
  q.dim = p.dim;
  for (const auto& c : p.cons) {
    RatVec a(p.dim, Rat(0));
    for (int j = 0; j < p.dim; ++j)
      for (int i = 0; i < p.dim; ++i) a[j] += c.a[i] * m_inverse[i][j];
    q.cons.push_back({a, c.b, c.eq});
  }
  return q;
}

Polyhedron translate(const Polyhedron& p, const RatVec& t) {
  Polyhedron q = p;
  for (auto& c : q.cons) c.b += dot(c.a, t);
  return q;
}

// ---------------------------------------------------------------------------
// Cones
// ---------------------------------------------------------------------------

Cone cone_from_halfspaces(int dim, const std::vector<RatVec>& leq0,
                          const std::vector<RatVec>& eq0) {
  Cone c;
  c.dim = dim;
  RatMat all = leq0;
  all.insert(all.end(), eq0.begin(), eq0.end());
  c.lineality = null_space(all, dim);
  const int ldim = static_cast<int>(c.lineality.size());
  const int target_rank = dim - ldim - 1;
  if (target_rank < 0) return c; // pure subspace

  auto feasible = [&](const RatVec& r) {
    for (const auto& a : leq0)
      if (dot(a, r) > 0) return false;
    for (const auto& a : eq0)
      if (dot(a, r) != 0) return false;
    return true;
  };
  std::set<RatVec> seen;
  const int m = static_cast<int>(leq0.size());
  std::vector<int> stack;
  std::function<void(int)> rec = [&](int start) {
    RatMat rows = eq0;
    for (int i : stack) rows.push_back(leq0[i]);
    if (rank(rows) == target_rank) {
      auto ns = null_space(rows, dim);
      // ns has dim ldim+1; pick a direction outside the lineality.
      for (const auto& cand : ns) {
        if (in_span(c.lineality, cand)) continue;
        for (int sgn : {1, -1}) {
          RatVec r = vscale(Rat(sgn), cand);
          if (!feasible(r)) continue;
          // Extremality: active rows at r must reach target_rank.
          RatMat act = eq0;
          for (const auto& a : leq0)
            if (dot(a, r) == 0) act.push_back(a);
          if (rank(act) != target_rank) continue;
          RatVec key = canonical_direction(r);
          // Orient along the feasible direction, not the canonical sign.
          if (dot(key, r) < 0)
            for (auto& x : key) x = -x;
          if (seen.insert(key).second) c.rays.push_back(key);
        }
        break;
      }
    }
    if (static_cast<int>(stack.size()) >= target_rank) return;
    for (int i = start; i < m; ++i) {
      stack.push_back(i);
      rec(i + 1);
      stack.pop_back();
    }
  };
  rec(0);
  std::sort(c.rays.begin(), c.rays.end());
  return c;
}

Cone polar(const Cone& c) {
  return cone_from_halfspaces(c.dim, c.rays, c.lineality);
}

std::vector<std::pair<RatVec, bool>> cone_halfspaces(const Cone& c) {
  Cone d = polar(c);
  std::vector<std::pair<RatVec, bool>> hs;
  for (const auto& r : d.rays) hs.push_back({r, false});
  for (const auto& l : d.lineality) hs.push_back({l, true});
  return hs;
}

Cone cone_generated(int dim, const std::vector<RatVec>& rays,
                    const std::vector<RatVec>& lines) {
  Cone raw;
  raw.dim = dim;
  raw.rays = rays;
  raw.lineality = lines;
  return polar(polar(raw));
}

Cone cone_intersect(const Cone& a, const Cone& b) {
  auto ha = cone_halfspaces(a);
  auto hb = cone_halfspaces(b);
  std::vector<RatVec> leq0, eq0;
  for (const auto& [n, eq] : ha) (eq ? eq0 : leq0).push_back(n);
  for (const auto& [n, eq] : hb) (eq ? eq0 : leq0).push_back(n);
  return cone_from_halfspaces(a.dim, leq0, eq0);
}

bool cone_contains(const Cone& c, const RatVec& x) {
  for (const auto& [n, eq] : cone_halfspaces(c)) {
    Rat v = dot(n, x);
    if (eq ? (v != 0) : (v > 0)) return false;
  }
  return true;
}

bool cone_equal(const Cone& a, const Cone& b) {
  auto inside = [](const Cone& outer, const Cone& inner) {
    auto hs = cone_halfspaces(outer);
    auto check = [&](const RatVec& x) {
      for (const auto& [n, eq] : hs) {
        Rat v = dot(n, x);
        if (eq ? (v != 0) : (v > 0)) return false;
      }
      return true;
    };
    for (const auto& r : inner.rays)
      if (!check(r)) return false;
    for (const auto& l : inner.lineality) {
      if (!check(l)) return false;
      RatVec neg = l;
      for (auto& x : neg) x = -x;
      if (!check(neg)) return false;
    }
    return true;
  };
  return inside(a, b) && inside(b, a);
}

bool cone_is_whole_space(const Cone& c) {
  return rank(c.lineality) == c.dim;
}

Cone cone_map(const Cone& c, const RatMat& map_rows) {
  const int out_dim = static_cast<int>(map_rows.size());
  auto apply = [&](const RatVec& x) {
    RatVec y(out_dim, Rat(0));
    for (int i = 0; i < out_dim; ++i) y[i] = dot(map_rows[i], x);
    return y;
  };
  std::vector<RatVec> rays, lines;
  for (const auto& r : c.rays) {
    RatVec y = apply(r);
    if (!is_zero(y)) rays.push_back(y);
  }
  for (const auto& l : c.lineality) {
    RatVec y = apply(l);
    if (!is_zero(y)) lines.push_back(y);
  }
  return cone_generated(out_dim, rays, lines);
}

// ---------------------------------------------------------------------------
// Exact distance and quadratic minimization
// ---------------------------------------------------------------------------

std::pair<Rat, RatVec> sqdist(const RatVec& point, const Polyhedron& p) {
  std::optional<std::pair<Rat, RatVec>> best;
  for (const auto& f : faces_of(p)) {
    // Project point onto the affine hull of the face: z = z0 + N t.
    RatMat e_rows;
    RatVec e_rhs;
    for (int i : f.active) {
      e_rows.push_back(p.cons[i].a);
      e_rhs.push_back(p.cons[i].b);
    }
    RatVec z0;
    if (e_rows.empty()) {
      z0 = point;
    } else {
      auto sol = solve_linear(e_rows, e_rhs, p.dim);
      if (!sol) continue;
      z0 = *sol;
    }
    auto nbasis = null_space(e_rows, p.dim);
    RatVec z = z0;
    if (!nbasis.empty()) {
      const int k = static_cast<int>(nbasis.size());
      RatMat g(k, RatVec(k, Rat(0)));
      RatVec rhs(k, Rat(0));
      RatVec diff = vsub(point, z0);
      for (int i = 0; i < k; ++i) {
        rhs[i] = dot(nbasis[i], diff);
        for (int j = 0; j < k; ++j) g[i][j] = dot(nbasis[i], nbasis[j]);
      }
      auto t = solve_linear(g, rhs, k);
      for (int i = 0; i < k; ++i) z = vadd(z, vscale((*t)[i], nbasis[i]));
    }
    if (!contains(f.poly, z)) continue;
    RatVec d = vsub(z, point);
    Rat v = dot(d, d);
    if (!best || v < best->first) best = {v, z};
  }
  if (!best) throw std::invalid_argument("sqdist: empty polyhedron");
  return *best;
}

std::optional<QuadMin> quad_min(const Polyhedron& p, const RatMat& q,
                                const RatVec& c) {
  const int d = p.dim;
  RatMat qs(d, RatVec(d, Rat(0))); // Q + Q^T
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) qs[i][j] = q[i][j] + q[j][i];
  auto value = [&](const RatVec& z) {
    Rat v = dot(c, z);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) v += z[i] * q[i][j] * z[j];
    return v;
  };
  std::optional<QuadMin> best;
  for (const auto& f : faces_of(p)) {
    RatMat e_rows;
    for (int i : f.active) e_rows.push_back(p.cons[i].a);
    auto hull = null_space(e_rows, d);
    // Stationarity over the face: n^T (Q+Q^T) z = -n.c for hull directions n.
    StrictSystem s;
    s.dim = d;
    for (int i : f.active) s.eqs.push_back({p.cons[i].a, p.cons[i].b});
    for (const auto& n : hull) {
      RatVec row(d, Rat(0));
      for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) row[j] += n[i] * qs[i][j];
      s.eqs.push_back({row, -dot(n, c)});
    }
    std::set<int> act(f.active.begin(), f.active.end());
    for (size_t i = 0; i < p.cons.size(); ++i)
      if (!act.count(static_cast<int>(i)))
        s.ineqs.push_back({p.cons[i].a, p.cons[i].b, false});
    auto z = solve_strict(s);
    if (!z) continue;
    Rat v = value(*z);
    if (!best || v < best->value) best = QuadMin{v, *z};
  }
  return best;
}

} // namespace monolab::geom
