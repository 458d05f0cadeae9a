#include "monolab/plot.hpp"

#include "monolab/error.hpp"
#include "monolab/normgeom.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <tuple>

namespace monolab::plot {

namespace {

constexpr double kWidth = 800, kHeight = 600, kMargin = 40;

struct Mapper {
  double x0, x1, y0, y1;
  double px(double x) const {
    return kMargin + (x - x0) / (x1 - x0) * (kWidth - 2 * kMargin);
  }
  double py(double y) const {
    return kHeight - kMargin - (y - y0) / (y1 - y0) * (kHeight - 2 * kMargin);
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

void line(std::ostringstream& os, const Mapper& m, double ax, double ay,
          double bx, double by, const char* stroke, const char* dash = "") {
  os << "<line x1=\"" << fmt(m.px(ax)) << "\" y1=\"" << fmt(m.py(ay))
     << "\" x2=\"" << fmt(m.px(bx)) << "\" y2=\"" << fmt(m.py(by))
     << "\" stroke=\"" << stroke << "\" stroke-width=\"2\"" << dash << "/>\n";
}

void dot(std::ostringstream& os, const Mapper& m, double x, double y,
         const char* fill, double r = 3.0) {
  os << "<circle cx=\"" << fmt(m.px(x)) << "\" cy=\"" << fmt(m.py(y))
     << "\" r=\"" << fmt(r) << "\" fill=\"" << fill << "\"/>\n";
}

void cross(std::ostringstream& os, const Mapper& m, double x, double y,
           const char* stroke) {
  double cx = m.px(x), cy = m.py(y), s = 5.0;
  os << "<path d=\"M" << fmt(cx - s) << " " << fmt(cy - s) << " L" << fmt(cx + s)
     << " " << fmt(cy + s) << " M" << fmt(cx - s) << " " << fmt(cy + s) << " L"
     << fmt(cx + s) << " " << fmt(cy - s) << "\" stroke=\"" << stroke
     << "\" stroke-width=\"2\"/>\n";
}

// Clipped 1-D pieces of a scalar operator graph as drawable segments.
struct Segment {
  double ax, ay, bx, by;
  bool point;
};

std::vector<Segment> piece_segments(const std::vector<geom::Polyhedron>& pieces,
                                    const Box& box) {
  std::vector<Segment> segs;
  geom::Polyhedron view = opmodel::box_hull(box, 1);
  for (const auto& piece : pieces) {
    geom::Polyhedron clipped = geom::intersect(piece, view);
    if (geom::is_empty(clipped)) continue;
    auto rep = geom::v_rep(clipped);
    if (rep.vertices.empty()) continue;
    if (rep.vertices.size() == 1) {
      double x = geom::to_double(rep.vertices[0][0]);
      double y = geom::to_double(rep.vertices[0][1]);
      segs.push_back({x, y, x, y, true});
      continue;
    }
    // Extreme vertices along the principal direction.
    auto lo = rep.vertices.front(), hi = rep.vertices.back();
    segs.push_back({geom::to_double(lo[0]), geom::to_double(lo[1]),
                    geom::to_double(hi[0]), geom::to_double(hi[1]), false});
  }
  std::sort(segs.begin(), segs.end(), [](const Segment& a, const Segment& b) {
    return std::tie(a.ax, a.ay, a.bx, a.by) < std::tie(b.ax, b.ay, b.bx, b.by);
  });
  return segs;
}

} // namespace

std::string render_plot(const Operator& op, const Box& box,
                        const PlotOptions& opt, const NormSpec& spec) {
  const int n = op.dim();
  box.validate(n);
  if (n >= 2 && (opt.slice_x_axis >= n || opt.slice_v_axis >= n))
    throw Error(ErrorCode::Unsupported, "UNSUPPORTED_DIMENSION: bad slice axes");

  Mapper m;
  if (n == 1) {
    m.x0 = box.x_center[0] - box.x_radius;
    m.x1 = box.x_center[0] + box.x_radius;
    m.y0 = box.v_center[0] - box.v_radius;
    m.y1 = box.v_center[0] + box.v_radius;
  } else {
    m.x0 = box.x_center[opt.slice_x_axis] - box.x_radius;
    m.x1 = box.x_center[opt.slice_x_axis] + box.x_radius;
    m.y0 = box.v_center[opt.slice_v_axis] - box.v_radius;
    m.y1 = box.v_center[opt.slice_v_axis] + box.v_radius;
  }

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
        "viewBox=\"0 0 800 600\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
  os << "<rect x=\"" << fmt(kMargin) << "\" y=\"" << fmt(kMargin)
     << "\" width=\"" << fmt(kWidth - 2 * kMargin) << "\" height=\""
     << fmt(kHeight - 2 * kMargin)
     << "\" fill=\"none\" stroke=\"#888\" stroke-width=\"1\"/>\n";

  auto pieces = opmodel::polyhedral_pieces(op);
  if (n == 1 && pieces) {
    for (const auto& s : piece_segments(*pieces, box)) {
      if (s.point)
        dot(os, m, s.ax, s.ay, "#1f5fbf");
      else
        line(os, m, s.ax, s.ay, s.bx, s.by, "#1f5fbf");
    }
    if (opt.shear_sigma && spec.is_euclidean()) {
      // Image of the graph under (x, v) -> (x, v + sigma x).
      geom::Rat s = geom::to_rat(*opt.shear_sigma);
      geom::RatMat inv(2, geom::RatVec(2, geom::Rat(0)));
      inv[0][0] = 1;
      inv[1][1] = 1;
      inv[1][0] = -s;
      std::vector<geom::Polyhedron> sheared;
      for (const auto& p : *pieces) sheared.push_back(geom::map_poly(p, inv));
      for (const auto& seg : piece_segments(sheared, box)) {
        if (seg.point)
          dot(os, m, seg.ax, seg.ay, "#bf5f1f");
        else
          line(os, m, seg.ax, seg.ay, seg.bx, seg.by, "#bf5f1f",
               " stroke-dasharray=\"6 4\"");
      }
    }
  } else {
    // Sampled scatter on the selected slice.
    auto g = opmodel::sample_graph(op, box, std::max(2, opt.samples), spec);
    int xi = n == 1 ? 0 : opt.slice_x_axis;
    int vi = n == 1 ? 0 : opt.slice_v_axis;
    for (const auto& p : g.points) dot(os, m, p.x[xi], p.v[vi], "#1f5fbf", 2.0);
    if (opt.shear_sigma) {
      for (const auto& p : g.points) {
        GraphPoint q = normgeom::shear_vertical(p, *opt.shear_sigma, spec);
        dot(os, m, q.x[xi], q.v[vi], "#bf5f1f", 2.0);
      }
    }
  }
  for (const auto& p : opt.probe_points)
    dot(os, m, p.x[n == 1 ? 0 : opt.slice_x_axis],
        p.v[n == 1 ? 0 : opt.slice_v_axis], "#2f9f2f");
  for (const auto& p : opt.witness_points)
    cross(os, m, p.x[n == 1 ? 0 : opt.slice_x_axis],
          p.v[n == 1 ? 0 : opt.slice_v_axis], "#cf2f2f");
  os << "</svg>\n";
  return os.str();
}

} // namespace monolab::plot
