#include "diskpart/standard.hpp"

#include <algorithm>
#include <cmath>

namespace diskpart {

namespace {

const double kSqrt3 = std::sqrt(3.0);

// Minor arc a -> b through m.
ArcEdge arc_through(Point a, Point m, Point b) {
  ImageArc img;
  img.start = a;
  img.through = m;
  img.end = b;
  if (const auto c = circumcenter(a, m, b)) {
    img.center = *c;
    img.radius = distance(*c, a);
    img.curvature = three_point_curvature(a, m, b);
    img.straight = std::abs(img.curvature) < kStraightCurvature;
  } else {
    img.straight = true;
  }
  return img.to_edge();
}

Point snap_to_circle(Point p) { return p / norm(p); }

}  // namespace

TwoRegionSplitter splitter_from_curvature(double h) {
  if (!std::isfinite(h)) throw DomainError("splitter curvature must be finite");
  if (std::abs(h) < kStraightCurvature) return {{{0.0, -1.0}, {0.0, 1.0}, 0.0}, 0.0};
  const double r = 1.0 / std::abs(h);
  const double c = std::sqrt(1.0 + r * r);
  const double sgn = h > 0 ? 1.0 : -1.0;
  // Center at (-sgn c, 0); the endpoints solve |z| = 1, |z - center| = r.
  const double x = -sgn / c;
  const double y = r / c;
  return {{{x, -y}, {x, y}, h}, h};
}

double splitter_left_area(const TwoRegionSplitter& s) {
  const Point p0 = s.edge.p0, p1 = s.edge.p1;
  const double t1 = std::atan2(p1.y, p1.x);
  const double t0 = std::atan2(p0.y, p0.x);
  ArcPolygon poly;
  poly.pieces.emplace_back(s.edge);
  poly.pieces.emplace_back(BoundaryArc{t1, wrap_angle(t0 - t1)});
  return arc_polygon_area(poly);
}

PartitionGraph to_partition_graph(const TwoRegionSplitter& s) {
  PartitionGraph g;
  const int a = g.add_vertex(s.edge.p0, VertexKind::Boundary);
  const int b = g.add_vertex(s.edge.p1, VertexKind::Boundary);
  g.regions.resize(2);
  g.add_edge(s.edge, a, b, 0, 1);
  const double a1 = splitter_left_area(s);
  g.regions[0] = {a1, s.h / 2.0};
  g.regions[1] = {kPi - a1, -s.h / 2.0};
  return g;
}

double StandardGraph::perimeter() const {
  return arc_length(edges[0]) + arc_length(edges[1]) + arc_length(edges[2]);
}

double splitter_depth(const TwoRegionSplitter& s, Point v) {
  const MobiusMap f = disk_to_halfplane(s.edge.p1);
  const auto w = f(to_complex(v));
  const double x_axis = f(to_complex(s.edge.p0)).real();
  if (std::abs(w.real() - x_axis) > 1e-7 * (1.0 + std::abs(w)))
    throw DomainError("vertex does not lie on the splitter");
  return w.imag();
}

Point splitter_point_at_depth(const TwoRegionSplitter& s, double depth) {
  if (!(depth > 0.0) || !std::isfinite(depth)) throw DegenerateVertexError("vertex depth must be positive");
  const MobiusMap f = disk_to_halfplane(s.edge.p1);
  const double x_axis = f(to_complex(s.edge.p0)).real();
  return f.inverse()(Point{x_axis, depth});
}

StandardGraph complete_at_depth(const TwoRegionSplitter& s, double d) {
  if (!(d > 0.0) || !std::isfinite(d)) throw DegenerateVertexError("vertex lies on the unit circle");
  const MobiusMap f = disk_to_halfplane(s.edge.p1);
  const MobiusMap g = f.inverse();
  const double X = f(to_complex(s.edge.p0)).real();
  const Point w{X, d};
  const Point v = g(w);
  if (norm(v) >= 1.0 - 1e-14) throw DegenerateVertexError("vertex lies on the unit circle");

  // In the half-plane the splitter is the vertical ray above w; the other two edges
  // are 60-degree arcs of radius 2d/sqrt(3) centered on the real axis.
  const double R = 2.0 * d / kSqrt3;
  const double right_c = X - d / kSqrt3;  // carries C23
  const double left_c = X + d / kSqrt3;   // carries C31
  auto on = [&](double c, double deg) { return Point{c + R * std::cos(deg * kPi / 180.0), R * std::sin(deg * kPi / 180.0)}; };

  StandardGraph sg;
  sg.interior_vertex = v;
  const Point b12 = s.edge.p1;
  const Point b23 = snap_to_circle(g(on(right_c, 0.0)));
  const Point b31 = snap_to_circle(g(on(left_c, 180.0)));
  sg.edges[0] = {v, b12, s.h};
  sg.edges[1] = arc_through(v, g(on(right_c, 30.0)), b23);
  sg.edges[2] = arc_through(v, g(on(left_c, 150.0)), b31);
  sg.boundary_vertices = {b12, b23, b31};
  for (const auto& e : sg.edges) validate(e);
  sg.pressures = pressures_from_curvatures(sg.h12(), sg.h23(), sg.h31(), 1e-7 * (1.0 + std::abs(sg.h12()) +
                                                                                std::abs(sg.h23()) + std::abs(sg.h31())));
  return sg;
}

StandardGraph complete_from_edge(const TwoRegionSplitter& s, Point v) {
  if (norm(v) >= 1.0 - kTolGeom) throw DegenerateVertexError("vertex lies on the unit circle");
  return complete_at_depth(s, splitter_depth(s, v));
}

std::pair<double, double> curvatures_from_halfplane(double d, double x) {
  if (!(d > 0.0)) throw DomainError("half-plane height must be positive");
  const double common = -kSqrt3 * d + kSqrt3 * (1.0 + x * x) / d;
  return {(common - 2.0 * x) / 4.0, (common + 2.0 * x) / 4.0};
}

std::array<double, 3> pressures_from_curvatures(double h12, double h23, double h31, double tol) {
  if (std::abs(h12 + h23 + h31) > tol) throw GeometryError("curvatures are not balanced");
  return {(h12 - h31) / 3.0, (h23 - h12) / 3.0, (h31 - h23) / 3.0};
}

std::array<double, 3> pressures_of(const StandardGraph& g, double tol) {
  return pressures_from_curvatures(g.h12(), g.h23(), g.h31(), tol);
}

PartitionGraph to_partition_graph(const StandardGraph& sg) {
  PartitionGraph g;
  const int v = g.add_vertex(sg.interior_vertex, VertexKind::Interior);
  g.regions.resize(3);
  const int pairs[3][2] = {{0, 1}, {1, 2}, {2, 0}};
  for (int k = 0; k < 3; ++k) {
    const int b = g.add_vertex(sg.boundary_vertices[k], VertexKind::Boundary);
    g.add_edge(sg.edges[k], v, b, pairs[k][0], pairs[k][1]);
  }
  const auto areas = g.region_areas();
  for (int k = 0; k < 3; ++k) g.regions[k] = {areas[k], sg.pressures[k]};
  return g;
}

StandardGraph rotated(const StandardGraph& g, double angle) {
  StandardGraph r = g;
  for (auto& e : r.edges) e = rotated(e, angle);
  r.interior_vertex = rotate(g.interior_vertex, angle);
  for (auto& b : r.boundary_vertices) b = rotate(b, angle);
  return r;
}

double StationarityReport::max_residual() const {
  double m = 0.0;
  for (const auto* v : {&angle_residuals, &balance_residuals, &orthogonality_residuals, &curvature_residuals})
    for (double x : *v) m = std::max(m, x);
  return m;
}

StationarityReport check_stationary(const PartitionGraph& g) {
  StationarityReport rep;
  const int nv = static_cast<int>(g.vertices.size());
  std::vector<std::vector<std::pair<Point, double>>> outgoing(nv);  // (tangent, curvature) leaving the vertex
  for (const auto& e : g.edges) {
    outgoing[e.v0].push_back({tangent_at(e.arc, 0.0), e.arc.h});
    outgoing[e.v1].push_back({-tangent_at(e.arc, 1.0), -e.arc.h});
    rep.curvature_residuals.push_back(0.0);
  }
  for (int v = 0; v < nv; ++v) {
    const auto& out = outgoing[v];
    if (g.vertices[v].kind == VertexKind::Interior) {
      double worst = 0.0, balance = 0.0;
      for (std::size_t a = 0; a < out.size(); ++a) {
        balance += out[a].second;
        for (std::size_t b = a + 1; b < out.size(); ++b)
          worst = std::max(worst, std::abs(angle_between(out[a].first, out[b].first) - 2.0 * kPi / 3.0));
      }
      rep.interior_vertices.push_back(v);
      rep.angle_residuals.push_back(worst);
      rep.balance_residuals.push_back(std::abs(balance));
    } else {
      double worst = 0.0;
      for (const auto& o : out)
        worst = std::max(worst, std::abs(angle_between(o.first, perp(g.vertices[v].pos)) - kPi / 2.0));
      rep.boundary_vertices.push_back(v);
      rep.orthogonality_residuals.push_back(worst);
    }
  }
  return rep;
}

}  // namespace diskpart
