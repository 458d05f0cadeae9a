#include "monolab/vardiff.hpp"

#include "monolab/error.hpp"
#include "monolab/monocheck.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <chrono>
#include <cstdio>
#include <set>

namespace monolab::vardiff {

using geom::Cone;
using geom::LinCon;
using geom::Polyhedron;
using geom::Rat;
using geom::RatMat;
using geom::RatVec;

namespace {

// Active constraint indices of a piece at z.
std::vector<int> active_at(const Polyhedron& p, const RatVec& z) {
  std::vector<int> act;
  for (size_t i = 0; i < p.cons.size(); ++i)
    if (geom::dot(p.cons[i].a, z) == p.cons[i].b)
      act.push_back(static_cast<int>(i));
  return act;
}

// Cone generated by the normals of the given constraint rows.
Cone cone_of_active(const Polyhedron& p, const std::vector<int>& act) {
  std::vector<RatVec> rays, lines;
  for (int i : act) {
    if (p.cons[i].eq)
      lines.push_back(p.cons[i].a);
    else
      rays.push_back(p.cons[i].a);
  }
  return geom::cone_generated(p.dim, rays, lines);
}

Cone whole_space(int dim) {
  std::vector<RatVec> lines;
  for (int i = 0; i < dim; ++i) {
    RatVec e(dim, Rat(0));
    e[i] = 1;
    lines.push_back(e);
  }
  Cone c;
  c.dim = dim;
  c.lineality = lines;
  return c;
}

void push_unique(std::vector<Cone>& cones, Cone c) {
  for (const auto& existing : cones)
    if (geom::cone_equal(existing, c)) return;
  cones.push_back(std::move(c));
}

// Normal-cone space (n_x, n_v) -> coderivative space (w, z) = (-n_v, n_x).
Cone to_coderivative_space(const Cone& nc, int n) {
  RatMat rows(2 * n, RatVec(2 * n, Rat(0)));
  for (int i = 0; i < n; ++i) {
    rows[i][n + i] = -1; // w_i = -n_v_i
    rows[n + i][i] = 1;  // z_i = n_x_i
  }
  return geom::cone_map(nc, rows);
}

} // namespace

geom::Cone regular_normal_cone(const std::vector<Polyhedron>& pieces,
                               const RatVec& z) {
  std::optional<Cone> result;
  for (const auto& p : pieces) {
    if (!geom::contains(p, z)) continue;
    Cone c = cone_of_active(p, active_at(p, z));
    result = result ? geom::cone_intersect(*result, c) : c;
  }
  if (!result)
    throw Error(ErrorCode::PointNotInSet, "regular_normal_cone: z not in union");
  return *result;
}

ConeUnion limiting_normal_cone(const std::vector<Polyhedron>& pieces,
                               const RatVec& z) {
  const int dim = pieces.empty() ? 0 : pieces[0].dim;
  std::vector<int> members;
  for (size_t i = 0; i < pieces.size(); ++i)
    if (geom::contains(pieces[i], z)) members.push_back(static_cast<int>(i));
  if (members.empty())
    throw Error(ErrorCode::PointNotInSet, "limiting_normal_cone: z not in union");

  // Faces of each member containing z.
  std::vector<std::vector<geom::Face>> member_faces(members.size());
  std::vector<std::vector<int>> member_active(members.size());
  for (size_t m = 0; m < members.size(); ++m) {
    const auto& p = pieces[members[m]];
    member_active[m] = active_at(p, z);
    for (auto& f : geom::faces_of(p))
      if (geom::contains(f.poly, z)) member_faces[m].push_back(f);
  }

  ConeUnion out;
  const size_t k = members.size();
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    std::vector<size_t> in_s, out_s;
    for (size_t m = 0; m < k; ++m)
      ((mask >> m) & 1u ? in_s : out_s).push_back(m);

    // Exit options for each excluded member: a direction must leave it.
    // Inequality rows active at z can be violated upward; equality rows in
    // either direction.
    std::vector<std::vector<std::pair<RatVec, int>>> exit_options;
    bool exits_possible = true;
    for (size_t m : out_s) {
      const auto& p = pieces[members[m]];
      std::vector<std::pair<RatVec, int>> opts;
      for (int i : member_active[m]) {
        opts.push_back({p.cons[i].a, +1});
        if (p.cons[i].eq) opts.push_back({p.cons[i].a, -1});
      }
      if (opts.empty()) {
        exits_possible = false; // member has no active constraint: z interior
        break;
      }
      exit_options.push_back(std::move(opts));
    }
    if (!exits_possible) continue;

    // Face combinations for the included members.
    std::vector<size_t> face_idx(in_s.size(), 0);
    while (true) {
      geom::StrictSystem dirs;
      dirs.dim = dim;
      bool viable = true;
      for (size_t t = 0; t < in_s.size() && viable; ++t) {
        const auto& p = pieces[members[in_s[t]]];
        const auto& face = member_faces[in_s[t]][face_idx[t]];
        std::set<int> face_act(face.active.begin(), face.active.end());
        for (int i : face.active) dirs.eqs.push_back({p.cons[i].a, Rat(0)});
        for (int i : member_active[in_s[t]]) {
          if (face_act.count(i)) continue;
          if (p.cons[i].eq) {
            viable = false; // equality row cannot become strict
            break;
          }
          // Entering the relative interior of the face needs a.d < 0.
          dirs.ineqs.push_back({p.cons[i].a, Rat(0), true});
        }
      }
      if (viable) {
        // Enumerate exit choices.
        std::vector<size_t> choice(exit_options.size(), 0);
        bool feasible = false;
        while (true) {
          geom::StrictSystem sys = dirs;
          for (size_t e = 0; e < exit_options.size(); ++e) {
            auto [row, sgn] = exit_options[e][choice[e]];
            // need sgn * (row . d) > 0, i.e. -sgn * row . d < 0
            RatVec a = row;
            for (auto& x : a) x = x * Rat(-sgn);
            sys.ineqs.push_back({a, Rat(0), true});
          }
          if (geom::solve_strict(sys)) {
            feasible = true;
            break;
          }
          size_t e = 0;
          while (e < choice.size() && ++choice[e] == exit_options[e].size())
            choice[e++] = 0;
          if (e == choice.size()) break;
        }
        if (feasible) {
          std::optional<Cone> cone;
          for (size_t t = 0; t < in_s.size(); ++t) {
            const auto& p = pieces[members[in_s[t]]];
            const auto& face = member_faces[in_s[t]][face_idx[t]];
            Cone c = cone_of_active(p, face.active);
            cone = cone ? geom::cone_intersect(*cone, c) : c;
          }
          if (cone) push_unique(out, *cone);
        }
      }
      size_t t = 0;
      while (t < face_idx.size() && ++face_idx[t] == member_faces[in_s[t]].size())
        face_idx[t++] = 0;
      if (t == face_idx.size()) break;
      if (face_idx.empty()) break;
    }
  }
  push_unique(out, regular_normal_cone(pieces, z));
  return out;
}

// ---------------------------------------------------------------------------
// Pointwise cones for the parabola normal-cone operator
// ---------------------------------------------------------------------------

namespace {

struct ParabolaCones {
  Cone regular;
  ConeUnion limiting;
};

// The graph of N(.;{b >= a^2}) is the union of the region piece
// A = {(a,b,0,0) : b >= a^2} and the ray bundle B = {(a,a^2,2ta,-t) : t >= 0},
// a smooth 2-manifold with boundary. All tangent data at a rational graph
// point is rational, so the pointwise cones are exact.
ParabolaCones parabola_cones(const RatVec& x, const RatVec& v) {
  const Rat &a = x[0], &b = x[1];
  bool on_curve = (b == a * a);
  bool in_a = geom::is_zero(v) && b >= a * a;
  Rat tau = -v[1];
  bool in_b = on_curve && (v[0] + 2 * a * v[1] == 0) && tau >= 0;
  if (!in_a && !in_b)
    throw Error(ErrorCode::PointNotInSet, "parabola graph point expected");

  RatVec e3{Rat(0), Rat(0), Rat(1), Rat(0)};
  RatVec e4{Rat(0), Rat(0), Rat(0), Rat(1)};
  auto span_cone = [&](std::vector<RatVec> lines) {
    return geom::cone_generated(4, {}, lines);
  };

  auto n_a = [&]() -> Cone {
    if (b > a * a) return span_cone({e3, e4});
    return geom::cone_generated(4, {{2 * a, Rat(-1), Rat(0), Rat(0)}}, {e3, e4});
  };
  auto n_b = [&](const Rat& t) -> Cone {
    RatVec da{Rat(1), 2 * a, 2 * t, Rat(0)};
    RatVec dt{Rat(0), Rat(0), 2 * a, Rat(-1)};
    if (t > 0) {
      auto lines = geom::null_space({da, dt}, 4);
      return span_cone(lines);
    }
    return geom::cone_from_halfspaces(4, {dt}, {da});
  };

  ParabolaCones pc;
  if (in_a && !in_b) {
    // Interior of the region piece.
    pc.regular = n_a();
    pc.limiting = {pc.regular};
    return pc;
  }
  if (in_b && tau > 0) {
    pc.regular = n_b(tau);
    pc.limiting = {pc.regular};
    return pc;
  }
  // Curve point: tau = 0, b = a^2, v = 0; both pieces meet here.
  pc.regular = geom::cone_intersect(n_a(), n_b(Rat(0)));
  pc.limiting.clear();
  push_unique(pc.limiting, span_cone({e3, e4})); // limit from the region
  {
    // Limit of the ray-bundle normal spaces as t -> 0.
    RatVec da{Rat(1), 2 * a, Rat(0), Rat(0)};
    RatVec dt{Rat(0), Rat(0), 2 * a, Rat(-1)};
    push_unique(pc.limiting, span_cone(geom::null_space({da, dt}, 4)));
  }
  push_unique(pc.limiting, pc.regular);
  return pc;
}

std::optional<RatMat> rational_jacobian(const Operator& op, const Vec& x) {
  const auto* sm = std::get_if<opmodel::SmoothMapData>(&op.payload());
  if (!sm) return std::nullopt;
  auto rows = sm->jacobian(x);
  RatMat j;
  for (const auto& r : rows) j.push_back(geom::to_rat(r));
  return j;
}

struct GraphCones {
  Cone regular;
  ConeUnion limiting;
};

GraphCones graph_normal_cones(const Operator& op, const GraphPoint& pt) {
  const int n = op.dim();
  auto pieces = opmodel::polyhedral_pieces(op);
  if (pieces) {
    RatVec z = geom::to_rat(pt.x);
    RatVec zv = geom::to_rat(pt.v);
    z.insert(z.end(), zv.begin(), zv.end());
    GraphCones gc;
    gc.regular = regular_normal_cone(*pieces, z);
    gc.limiting = limiting_normal_cone(*pieces, z);
    return gc;
  }
  if (std::get_if<opmodel::SmoothMapData>(&op.payload())) {
    auto j = rational_jacobian(op, pt.x);
    // Normal space of {(x, F(x))}: {(n_x, n_v) : n_x = -DF(x)^T n_v}.
    std::vector<RatVec> lines;
    for (int k = 0; k < n; ++k) {
      RatVec line(2 * n, Rat(0));
      line[n + k] = 1;
      for (int i = 0; i < n; ++i) line[i] = -(*j)[k][i];
      lines.push_back(line);
    }
    GraphCones gc;
    gc.regular = geom::cone_generated(2 * n, {}, lines);
    gc.limiting = {gc.regular};
    return gc;
  }
  if (const auto* nc = std::get_if<opmodel::NormalConeData>(&op.payload())) {
    if (nc->set.kind == opmodel::ConvexSet::Kind::ParabolaEpigraph) {
      auto pc = parabola_cones(geom::to_rat(pt.x), geom::to_rat(pt.v));
      return {pc.regular, pc.limiting};
    }
  }
  throw Error(ErrorCode::Unsupported,
              "coderivatives: unsupported operator variant");
}

} // namespace

geom::Cone regular_coderivative(const Operator& op, const GraphPoint& pt) {
  return to_coderivative_space(graph_normal_cones(op, pt).regular, op.dim());
}

ConeUnion limiting_coderivative(const Operator& op, const GraphPoint& pt) {
  ConeUnion out;
  for (const auto& c : graph_normal_cones(op, pt).limiting)
    push_unique(out, to_coderivative_space(c, op.dim()));
  return out;
}

// ---------------------------------------------------------------------------
// Positive semidefiniteness over cones
// ---------------------------------------------------------------------------

ConePsd cone_psd_check(const Cone& cone, const Rat& sigma) {
  const int d = cone.dim; // 2n
  const int n = d / 2;
  std::vector<RatVec> gens = cone.rays;
  for (const auto& l : cone.lineality) {
    gens.push_back(l);
    RatVec neg = l;
    for (auto& x : neg) x = -x;
    gens.push_back(neg);
  }
  ConePsd res;
  if (gens.empty()) return res; // the zero cone
  const int m = static_cast<int>(gens.size());
  // Symmetrized form values: s_ij = <z_i,w_j>/2 + <z_j,w_i>/2 - sigma <w_i,w_j>.
  RatMat s(m, RatVec(m, Rat(0)));
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      Rat v = 0;
      for (int t = 0; t < n; ++t) {
        v += (gens[i][n + t] * gens[j][t] + gens[j][n + t] * gens[i][t]) / 2;
        v -= sigma * gens[i][t] * gens[j][t];
      }
      s[i][j] = s[j][i] = v;
    }

  auto fail_with = [&](const RatVec& lambda) {
    res.psd = false;
    RatVec x(d, Rat(0));
    for (int i = 0; i < m; ++i)
      if (lambda[i] != 0) x = geom::vadd(x, geom::vscale(lambda[i], gens[i]));
    res.witness = x;
  };

  // Diagonal early exit: single generators.
  for (int i = 0; i < m; ++i) {
    if (s[i][i] < 0) {
      RatVec lambda(m, Rat(0));
      lambda[i] = 1;
      fail_with(lambda);
      return res;
    }
  }

  // The minimum of lambda^T S lambda over the simplex is attained in the
  // relative interior of a support face, where 2 S_F lambda = mu 1 and
  // sum lambda = 1; there the value equals mu / 2. Enumerate supports.
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    std::vector<int> sup;
    for (int i = 0; i < m; ++i)
      if ((mask >> i) & 1u) sup.push_back(i);
    const int cnt = static_cast<int>(sup.size());
    if (cnt < 2) continue; // singletons handled above
    RatMat a(cnt + 1, RatVec(cnt + 1, Rat(0)));
    RatVec b(cnt + 1, Rat(0));
    for (int i = 0; i < cnt; ++i) {
      for (int j = 0; j < cnt; ++j) a[i][j] = 2 * s[sup[i]][sup[j]];
      a[i][cnt] = -1; // -mu
      a[cnt][i] = 1;
    }
    b[cnt] = 1;
    auto sol = geom::solve_linear(a, b, cnt + 1);
    if (!sol) continue; // no stationary point on this face
    Rat mu = (*sol)[cnt];
    if (mu / 2 >= 0) continue;
    bool nonneg = true;
    for (int i = 0; i < cnt; ++i)
      if ((*sol)[i] < 0) nonneg = false;
    RatVec lambda(m, Rat(0));
    if (nonneg) {
      for (int i = 0; i < cnt; ++i) lambda[sup[i]] = (*sol)[i];
      fail_with(lambda);
      return res;
    }
    // Under-determined stationary set: look for a nonnegative solution.
    geom::StrictSystem sys;
    sys.dim = cnt + 1;
    for (int i = 0; i <= cnt; ++i) sys.eqs.push_back({a[i], b[i]});
    for (int i = 0; i < cnt; ++i) {
      RatVec row(cnt + 1, Rat(0));
      row[i] = -1;
      sys.ineqs.push_back({row, Rat(0), false});
    }
    auto feas = geom::solve_strict(sys);
    if (feas) {
      for (int i = 0; i < cnt; ++i) lambda[sup[i]] = (*feas)[i];
      fail_with(lambda);
      return res;
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Stratum enumeration over a box
// ---------------------------------------------------------------------------

namespace {

// Whether a graph polyhedron meets the box: exact per-block scaled squared
// distances min ||(u - cx)/rx||^2 and min ||(v - cv)/rv||^2 must both be <= 1.
// (Necessary; jointly sufficient except for skew strata that reach each ball
// shadow only separately, which errs on the inclusive side.)
bool meets_box(const Polyhedron& g, const Box& box, int n) {
  auto block_dist = [&](bool v_block) -> Rat {
    std::vector<int> drop;
    for (int i = 0; i < n; ++i) drop.push_back(v_block ? i : n + i);
    Polyhedron proj = geom::eliminate(g, drop);
    const Vec& c = v_block ? box.v_center : box.x_center;
    Rat r = geom::to_rat(v_block ? box.v_radius : box.x_radius);
    Polyhedron scaled;
    scaled.dim = n;
    for (const auto& con : proj.cons) {
      RatVec a(n);
      Rat b = con.b;
      for (int i = 0; i < n; ++i) {
        a[i] = con.a[i] * r;
        b -= con.a[i] * geom::to_rat(c[i]);
      }
      scaled.cons.push_back({a, b, con.eq});
    }
    if (geom::is_empty(scaled)) return Rat(2);
    auto [d2, nearest] = geom::sqdist(RatVec(n, Rat(0)), scaled);
    return d2;
  };
  return block_dist(false) <= 1 && block_dist(true) <= 1;
}

GraphPoint to_graph_point(const RatVec& z, int n) {
  GraphPoint gp;
  gp.x.resize(n);
  gp.v.resize(n);
  for (int i = 0; i < n; ++i) {
    gp.x[i] = geom::to_double(z[i]);
    gp.v[i] = geom::to_double(z[n + i]);
  }
  return gp;
}

std::vector<CellCone> collect_polyhedral_cells(
    const std::vector<Polyhedron>& pieces, const Box& box, int n) {
  std::vector<CellCone> out;
  const size_t k = pieces.size();
  std::vector<std::vector<geom::Face>> all_faces(k);
  for (size_t i = 0; i < k; ++i) all_faces[i] = geom::faces_of(pieces[i]);

  RatVec target = geom::to_rat(box.x_center);
  {
    RatVec tv = geom::to_rat(box.v_center);
    target.insert(target.end(), tv.begin(), tv.end());
  }

  std::vector<Cone> seen_cones;

  // One cell: face choice per selected piece. The closed intersection g is
  // threaded through the recursion so empty branches are cut early.
  struct Choice {
    size_t piece;
    size_t face;
  };
  std::vector<Choice> chosen;

  auto finish_cell = [&](const Polyhedron& g) {
    if (chosen.empty() || !meets_box(g, box, n)) return;
    geom::StrictSystem cell;
    cell.dim = 2 * n;
    std::set<size_t> used;
    for (const auto& ch : chosen) {
      used.insert(ch.piece);
      const auto& p = pieces[ch.piece];
      const auto& face = all_faces[ch.piece][ch.face];
      std::set<int> act(face.active.begin(), face.active.end());
      for (int i : face.active) cell.eqs.push_back({p.cons[i].a, p.cons[i].b});
      for (size_t i = 0; i < p.cons.size(); ++i) {
        if (act.count(static_cast<int>(i))) continue;
        if (p.cons[i].eq) return; // equality row cannot be strict
        cell.ineqs.push_back({p.cons[i].a, p.cons[i].b, true});
      }
    }
    // Excluded pieces that actually cut the intersection need one violated
    // constraint each.
    std::vector<size_t> cutters;
    for (size_t j = 0; j < k; ++j) {
      if (used.count(j)) continue;
      Polyhedron test = g;
      for (const auto& con : pieces[j].cons) test.cons.push_back(con);
      if (!geom::is_empty(test)) cutters.push_back(j);
    }
    std::optional<RatVec> rep;
    if (cutters.empty()) {
      rep = geom::solve_strict(cell, &target);
    } else {
      std::vector<size_t> choice(cutters.size(), 0);
      while (true) {
        geom::StrictSystem sys = cell;
        bool valid = true;
        for (size_t e = 0; e < cutters.size(); ++e) {
          const auto& p = pieces[cutters[e]];
          const auto& con = p.cons[choice[e] / 2];
          bool flip = choice[e] % 2;
          if (flip && !con.eq) {
            valid = false;
            break;
          }
          RatVec a = con.a;
          if (!flip) {
            for (auto& xx : a) xx = -xx; // a.z > b
            sys.ineqs.push_back({a, -con.b, true});
          } else {
            sys.ineqs.push_back({a, con.b, true}); // a.z < b (equality row)
          }
        }
        if (valid) {
          rep = geom::solve_strict(sys, &target);
          if (rep) break;
        }
        size_t e = 0;
        while (e < choice.size() &&
               ++choice[e] == pieces[cutters[e]].cons.size() * 2)
          choice[e++] = 0;
        if (e == choice.size()) break;
      }
    }
    if (!rep) return;
    std::optional<Cone> cone;
    for (const auto& ch : chosen) {
      Cone c = cone_of_active(pieces[ch.piece], all_faces[ch.piece][ch.face].active);
      cone = cone ? geom::cone_intersect(*cone, c) : c;
    }
    Cone cd = to_coderivative_space(*cone, n);
    for (const auto& s : seen_cones)
      if (geom::cone_equal(s, cd)) return;
    seen_cones.push_back(cd);
    out.push_back({cd, to_graph_point(*rep, n), true});
  };

  std::function<void(size_t, Polyhedron)> descend = [&](size_t piece,
                                                        Polyhedron g) {
    if (piece == k) {
      finish_cell(g);
      return;
    }
    descend(piece + 1, g); // skip this piece
    for (size_t f = 0; f < all_faces[piece].size(); ++f) {
      Polyhedron next = g;
      for (const auto& con : all_faces[piece][f].poly.cons)
        next.cons.push_back(con);
      if (geom::is_empty(next)) continue;
      chosen.push_back({piece, f});
      descend(piece + 1, std::move(next));
      chosen.pop_back();
    }
  };
  Polyhedron empty_g;
  empty_g.dim = 2 * n;
  descend(0, empty_g);
  return out;
}

} // namespace

namespace {

// Exact decision of inf <z,w> - sigma||w||^2 >= 0 over all coderivative cones
// attained on gph(pieces) within the box.
//
// Phase 1 checks the face cone of every single piece face meeting the box:
// every attained cone is an intersection of such face cones, and the form is
// automatically nonnegative on subsets, so an all-pass here is exact.
// Phase 2 runs only for failing faces: a failing attained cell must have a
// failing member face, so enumerating cells seeded at each failing face with
// incremental emptiness pruning settles FAIL vs vacuity exactly.
struct PsdDecision {
  bool psd = true;
  Cone cone;         // failing cone
  RatVec witness;    // (w, z) with negative value
  GraphPoint rep;    // attained graph point
};

PsdDecision psd_decide_polyhedral(const std::vector<Polyhedron>& pieces,
                                  const Box& box, int n, const Rat& sigma) {
  PsdDecision out;
  const size_t k = pieces.size();
  std::vector<std::vector<geom::Face>> all_faces(k);
  for (size_t i = 0; i < k; ++i) all_faces[i] = geom::faces_of(pieces[i]);

  RatVec target = geom::to_rat(box.x_center);
  {
    RatVec tv = geom::to_rat(box.v_center);
    target.insert(target.end(), tv.begin(), tv.end());
  }
  Polyhedron hull = opmodel::box_hull(box, n);
  RatVec cx = geom::to_rat(box.x_center), cv = geom::to_rat(box.v_center);
  Rat rx2 = geom::to_rat(box.x_radius) * geom::to_rat(box.x_radius);
  Rat rv2 = geom::to_rat(box.v_radius) * geom::to_rat(box.v_radius);
  auto in_balls = [&](const RatVec& z) {
    Rat dx = 0, dv = 0;
    for (int i = 0; i < n; ++i) {
      dx += (z[i] - cx[i]) * (z[i] - cx[i]);
      dv += (z[n + i] - cv[i]) * (z[n + i] - cv[i]);
    }
    return dx <= rx2 && dv <= rv2;
  };

  struct Failing {
    size_t piece;
    size_t face;
    Cone cone;
  };
  std::vector<Failing> failing;
  for (size_t i = 0; i < k; ++i) {
    for (size_t f = 0; f < all_faces[i].size(); ++f) {
      const auto& face = all_faces[i][f];
      // Circumscribed-box prefilter: a superset of the ball-meeting faces,
      // which keeps an all-pass exact.
      if (geom::is_empty(geom::intersect(face.poly, hull))) continue;
      Cone cd = to_coderivative_space(cone_of_active(pieces[i], face.active), n);
      if (cone_psd_check(cd, sigma).psd) continue;
      bool dup = false;
      for (const auto& other : failing)
        if (geom::cone_equal(other.cone, cd)) dup = true;
      if (!dup) failing.push_back({i, f, cd});
    }
  }
  if (failing.empty()) return out;

  // Phase 2: cells containing a failing face.
  for (const auto& seed : failing) {
    struct Choice {
      size_t piece;
      size_t face;
    };
    std::vector<Choice> chosen{{seed.piece, seed.face}};
    Polyhedron g0 = hull; // confine the search to the circumscribed box
    for (const auto& con : all_faces[seed.piece][seed.face].poly.cons)
      g0.cons.push_back(con);
    if (geom::is_empty(g0)) continue;

    // Pieces disjoint from the seed face cannot join any of its cells.
    std::vector<bool> relevant(k, false);
    for (size_t j = 0; j < k; ++j) {
      if (j == seed.piece) continue;
      Polyhedron test = g0;
      for (const auto& con : pieces[j].cons) test.cons.push_back(con);
      relevant[j] = !geom::is_empty(test);
    }

    std::optional<PsdDecision> found;

    std::function<void(size_t, Polyhedron)> descend = [&](size_t piece,
                                                          Polyhedron g) {
      if (found) return;
      if (piece == k) {
        // Cell nonemptiness: relint of every chosen face minus other pieces.
        geom::StrictSystem cell;
        cell.dim = 2 * n;
        std::set<size_t> used;
        for (const auto& ch : chosen) {
          used.insert(ch.piece);
          const auto& p = pieces[ch.piece];
          const auto& face = all_faces[ch.piece][ch.face];
          std::set<int> act(face.active.begin(), face.active.end());
          for (int i : face.active)
            cell.eqs.push_back({p.cons[i].a, p.cons[i].b});
          for (size_t i = 0; i < p.cons.size(); ++i) {
            if (act.count(static_cast<int>(i))) continue;
            if (p.cons[i].eq) return;
            cell.ineqs.push_back({p.cons[i].a, p.cons[i].b, true});
          }
        }
        for (const auto& con : hull.cons)
          cell.ineqs.push_back({con.a, con.b, false});
        // Lazy repair: solve first, then branch only on excluded pieces that
        // actually contain the representative.
        std::function<std::optional<RatVec>(geom::StrictSystem&, int)> repair =
            [&](geom::StrictSystem& sys, int depth) -> std::optional<RatVec> {
          auto cand = geom::solve_strict(sys, &target);
          if (!cand) return std::nullopt;
          if (depth > 32) return std::nullopt;
          for (size_t j = 0; j < k; ++j) {
            if (used.count(j) || !geom::contains(pieces[j], *cand)) continue;
            for (const auto& con : pieces[j].cons) {
              for (int flip = 0; flip < (con.eq ? 2 : 1); ++flip) {
                geom::StrictSystem next = sys;
                RatVec a = con.a;
                if (!flip) {
                  for (auto& xx : a) xx = -xx; // a.z > b
                  next.ineqs.push_back({a, -con.b, true});
                } else {
                  next.ineqs.push_back({a, con.b, true});
                }
                auto fixed = repair(next, depth + 1);
                if (fixed) return fixed;
              }
            }
            return std::nullopt; // no way to leave piece j from this cell
          }
          return cand;
        };
        std::optional<RatVec> rep = repair(cell, 0);
        if (!rep) return;
        std::optional<Cone> cone;
        for (const auto& ch : chosen) {
          Cone c = cone_of_active(pieces[ch.piece],
                                  all_faces[ch.piece][ch.face].active);
          cone = cone ? geom::cone_intersect(*cone, c) : c;
        }
        Cone cd = to_coderivative_space(*cone, n);
        auto chk = cone_psd_check(cd, sigma);
        if (!chk.psd) {
          // The representative must actually sit inside the norm balls;
          // hull-only hits fall back to an exact closed-face distance test.
          if (!in_balls(*rep) && !meets_box(g, box, n)) return;
          PsdDecision d;
          d.psd = false;
          d.cone = cd;
          d.witness = chk.witness;
          d.rep = to_graph_point(*rep, n);
          found = d;
        }
        return;
      }
      if (piece == seed.piece || !relevant[piece]) {
        descend(piece + 1, std::move(g));
        return;
      }
      descend(piece + 1, g);
      for (size_t f = 0; f < all_faces[piece].size(); ++f) {
        if (found) return;
        Polyhedron next = g;
        for (const auto& con : all_faces[piece][f].poly.cons)
          next.cons.push_back(con);
        if (geom::is_empty(next)) continue;
        chosen.push_back({piece, f});
        descend(piece + 1, std::move(next));
        chosen.pop_back();
      }
    };
    descend(0, g0);
    if (found) return *found;
  }
  return out; // every failing face cone turned out to be unattained
}

} // namespace

std::vector<CellCone> collect_coderivative_cells(const Operator& op,
                                                 const Box& box, int density) {
  const int n = op.dim();
  box.validate(n);
  auto pieces = opmodel::polyhedral_pieces(op);
  if (pieces) return collect_polyhedral_cells(*pieces, box, n);

  // Sampled fallback (parabola / smooth maps): pointwise limiting cones.
  NormSpec spec = NormSpec::euclidean(n);
  auto g = opmodel::sample_graph(op, box, density, spec);
  std::vector<CellCone> out;
  std::vector<Cone> seen;
  for (const auto& pt : g.points) {
    ConeUnion cu;
    try {
      cu = limiting_coderivative(op, pt);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::PointNotInSet) continue;
      throw;
    }
    for (const auto& c : cu) {
      bool dup = false;
      for (const auto& s : seen)
        if (geom::cone_equal(s, c)) {
          dup = true;
          break;
        }
      if (!dup) {
        seen.push_back(c);
        out.push_back({c, pt, false});
      }
    }
  }
  return out;
}

namespace {

// Witness scaled so that ||w|| = 1 with the first nonzero w-component
// positive (exact when ||w||^2 is a perfect rational square).
std::pair<Vec, Vec> normalize_witness(const RatVec& x, int n) {
  Vec w(n), z(n);
  for (int i = 0; i < n; ++i) {
    w[i] = geom::to_double(x[i]);
    z[i] = geom::to_double(x[n + i]);
  }
  double nw = 0;
  for (int i = 0; i < n; ++i) nw += w[i] * w[i];
  nw = std::sqrt(nw);
  if (nw > 0) {
    double sgn = 1.0;
    for (int i = 0; i < n; ++i)
      if (w[i] != 0) {
        sgn = w[i] > 0 ? 1.0 : -1.0;
        break;
      }
    for (int i = 0; i < n; ++i) {
      w[i] = sgn * w[i] / nw;
      z[i] = sgn * z[i] / nw;
    }
  }
  return {w, z};
}

} // namespace

Verdict psd_criterion(const Operator& op, const Box& box, double sigma,
                      int density, double tol) {
  if (sigma < 0) throw Error(ErrorCode::BadParams, "sigma must be >= 0");
  const int n = op.dim();
  box.validate(n);
  Verdict v;
  v.name = "psd_criterion";
  v.resolution.density = density;
  v.resolution.tol = tol;
  Rat sig = geom::to_rat(sigma);

  auto fail_with = [&](const RatVec& witness, const GraphPoint& rep,
                       bool exact) {
    v.status = Verdict::Status::Fail;
    v.certified = exact;
    auto [w, z] = normalize_witness(witness, n);
    v.witness_w = w;
    v.witness_z = z;
    v.witness_point = rep;
    double val = 0, nw = 0;
    for (int i = 0; i < n; ++i) {
      val += z[i] * w[i];
      nw += w[i] * w[i];
    }
    v.value = val - sigma * nw;
    v.detail = "coderivative direction with negative pairing";
  };

  auto pieces = opmodel::polyhedral_pieces(op);
  if (pieces) {
    auto d = psd_decide_polyhedral(*pieces, box, n, sig);
    if (!d.psd) {
      fail_with(d.witness, d.rep, true);
      return v;
    }
    v.status = Verdict::Status::Pass;
    v.certified = true;
    v.detail = "exact over all polyhedral strata in the box";
    return v;
  }

  // Sampled fallback (non-polyhedral graphs): pointwise limiting cones.
  for (const auto& cell : collect_coderivative_cells(op, box, density)) {
    auto chk = cone_psd_check(cell.cone, sig);
    if (!chk.psd) {
      fail_with(chk.witness, cell.rep, false);
      return v;
    }
  }
  v.status = Verdict::Status::Pass;
  v.certified = false;
  v.detail = "sampling-limited (non-polyhedral graph)";
  return v;
}

Verdict local_max_via_coderivative(const Operator& op, const GraphPoint& pt,
                                   const Box& box, int density, double sigma,
                                   double tol) {
  Verdict v;
  v.name = "local_max_via_coderivative";
  v.resolution.density = density;
  v.resolution.tol = tol;
  NormSpec spec = NormSpec::euclidean(op.dim());
  auto g = opmodel::sample_graph(op, box, density, spec);
  Verdict hypo = monocheck::hypo_modulus(g, tol);
  v.parts.push_back(hypo);
  if (hypo.status == Verdict::Status::Inconclusive) {
    v.status = Verdict::Status::Inconclusive;
    v.detail = "hypomonotonicity estimate unbounded";
    return v;
  }
  v.r_hat = hypo.r_hat;
  Verdict psd = psd_criterion(op, box, sigma, density, tol);
  v.parts.push_back(psd);
  v.status = psd.status;
  v.certified = psd.certified;
  v.witness_point = psd.witness_point;
  v.witness_w = psd.witness_w;
  v.witness_z = psd.witness_z;
  v.value = psd.value;
  v.sigma_hat = sigma;
  v.detail = psd.detail;
  return v;
}

double max_psd_sigma(const Operator& op, const Box& box, int density,
                     double tol) {
  const int n = op.dim();
  auto pieces = opmodel::polyhedral_pieces(op);
  std::vector<CellCone> cells;
  if (!pieces) cells = collect_coderivative_cells(op, box, density);
  auto passes = [&](double sigma) {
    Rat s = geom::to_rat(sigma);
    if (pieces) return psd_decide_polyhedral(*pieces, box, n, s).psd;
    for (const auto& cell : cells)
      if (!cone_psd_check(cell.cone, s).psd) return false;
    return true;
  };
  if (!passes(0.0)) return -std::numeric_limits<double>::infinity();
  double lo = 0.0, hi = 1.0;
  int grow = 0;
  while (passes(hi) && grow++ < 60) {
    lo = hi;
    hi *= 2;
  }
  if (grow >= 60) return lo;
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    (passes(mid) ? lo : hi) = mid;
  }
  return lo;
}

Qualification sum_qualification(const Operator& sum_op) {
  Qualification q;
  const auto* comp = std::get_if<opmodel::CompositeData>(&sum_op.payload());
  if (!comp || comp->kind != opmodel::CompositeData::Kind::Sum) {
    q.detail = "not a sum composite";
    return q;
  }
  const int n = sum_op.dim();
  auto dom_pieces = [&](const Operator& op)
      -> std::optional<std::vector<Polyhedron>> {
    if (const auto* nc = std::get_if<opmodel::NormalConeData>(&op.payload())) {
      if (nc->set.kind == opmodel::ConvexSet::Kind::ParabolaEpigraph) {
        // dom N(.;Omega) = Omega; full-dimensional but not polyhedral.
        return std::nullopt;
      }
      return std::vector<Polyhedron>{nc->set.poly};
    }
    auto pieces = opmodel::polyhedral_pieces(op);
    if (!pieces) return std::nullopt;
    std::vector<Polyhedron> doms;
    std::vector<int> drop;
    for (int i = 0; i < n; ++i) drop.push_back(n + i);
    for (const auto& p : *pieces) {
      Polyhedron d = geom::eliminate(p, drop);
      if (!geom::is_empty(d)) doms.push_back(d);
    }
    return doms;
  };

  auto db = dom_pieces(*comp->b);
  auto da = dom_pieces(*comp->a);
  bool b_parabola = false;
  if (const auto* nc = std::get_if<opmodel::NormalConeData>(&comp->b->payload()))
    b_parabola = nc->set.kind == opmodel::ConvexSet::Kind::ParabolaEpigraph;

  if (!db && !b_parabola) {
    q.detail = "dom T2 not derivable";
    return q;
  }
  q.computed = true;
  if (b_parabola) {
    q.interior_dom_b_nonempty = true; // the epigraph is full-dimensional
  } else {
    for (const auto& d : *db)
      if (geom::affine_dim(d) == n) q.interior_dom_b_nonempty = true;
  }
  if (!q.interior_dom_b_nonempty) {
    q.qualified = false;
    q.detail = "int(dom T2) is empty";
    return q;
  }
  // dom T1 cap int(dom T2) via strict feasibility.
  if (!da) {
    // Full-dimensional dom T2; the parabola dom T1 always meets it at scale 0.
    q.qualified = true;
    q.detail = "int(dom T2) nonempty; dom T1 not polyhedral (assumed to meet)";
    return q;
  }
  for (const auto& d1 : *da) {
    if (b_parabola) {
      q.qualified = true;
      break;
    }
    for (const auto& d2 : *db) {
      if (geom::affine_dim(d2) != n) continue;
      geom::StrictSystem sys;
      sys.dim = n;
      for (const auto& con : d1.cons) {
        if (con.eq)
          sys.eqs.push_back({con.a, con.b});
        else
          sys.ineqs.push_back({con.a, con.b, false});
      }
      auto impl = geom::implicit_equalities(d2);
      std::set<int> tight(impl.begin(), impl.end());
      bool ok = true;
      for (size_t i = 0; i < d2.cons.size(); ++i) {
        if (tight.count(static_cast<int>(i))) {
          ok = false; // implicit equality: interior empty (guarded above)
          break;
        }
        sys.ineqs.push_back({d2.cons[i].a, d2.cons[i].b, true});
      }
      if (ok && geom::solve_strict(sys)) {
        q.qualified = true;
        break;
      }
    }
    if (q.qualified) break;
  }
  q.detail = q.qualified ? "dom T1 meets int(dom T2)"
                         : "dom T1 misses int(dom T2)";
  return q;
}

} // namespace monolab::vardiff
