#include "diskpart/partition_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace diskpart {

int PartitionGraph::add_vertex(Point p, VertexKind kind) {
  vertices.push_back({p, kind});
  return static_cast<int>(vertices.size()) - 1;
}

int PartitionGraph::add_edge(const ArcEdge& arc, int v0, int v1, int left, int right) {
  edges.push_back({arc, v0, v1, left, right});
  return static_cast<int>(edges.size()) - 1;
}

PlanarMap PartitionGraph::planar_map() const {
  PlanarMap m;
  for (const auto& v : vertices) {
    m.kinds.push_back(v.kind);
    m.positions.push_back(v.pos);
  }
  for (const auto& e : edges) m.edges.push_back({e.v0, e.v1, e.left, e.right});
  m.region_count = static_cast<int>(regions.size());
  return m;
}

void PartitionGraph::validate(double tol) const {
  validate_degrees(planar_map(), tol);
  for (const auto& e : edges) {
    diskpart::validate(e.arc);
    if (distance(e.arc.p0, vertices[e.v0].pos) > tol || distance(e.arc.p1, vertices[e.v1].pos) > tol)
      throw TopologyError("edge endpoints do not match their vertices");
  }
}

std::vector<Face> PartitionGraph::faces() const {
  return trace_faces(planar_map(), [this](int e, bool at_start) {
    const ArcEdge& a = edges[e].arc;
    return at_start ? tangent_at(a, 0.0) : -tangent_at(a, 1.0);
  });
}

ArcEdge PartitionGraph::step_arc(const FaceStep& s) const {
  const ArcEdge& a = edges[s.edge].arc;
  return s.forward ? a : reversed(a);
}

ArcPolygon PartitionGraph::face_polygon(const Face& f) const {
  ArcPolygon poly;
  for (const auto& s : f.steps) {
    if (s.kind == FaceStep::Kind::Edge) {
      poly.pieces.emplace_back(step_arc(s));
    } else {
      const double t0 = s.from_vertex >= 0
                            ? std::atan2(vertices[s.from_vertex].pos.y, vertices[s.from_vertex].pos.x)
                            : 0.0;
      poly.pieces.emplace_back(BoundaryArc{t0, s.sweep});
    }
  }
  return poly;
}

double PartitionGraph::face_area(const Face& f) const { return arc_polygon_area(face_polygon(f)); }

std::vector<double> PartitionGraph::region_areas() const {
  std::vector<double> areas(regions.size(), 0.0);
  for (const auto& f : faces()) areas[f.region] += face_area(f);
  return areas;
}

double PartitionGraph::perimeter() const {
  double total = 0.0;
  for (const auto& e : edges) total += arc_length(e.arc);
  return total;
}

PartitionGraph rotated(const PartitionGraph& g, double angle) {
  PartitionGraph r = g;
  for (auto& v : r.vertices) v.pos = rotate(v.pos, angle);
  for (auto& e : r.edges) e.arc = rotated(e.arc, angle);
  return r;
}

PartitionGraph reflected_x(const PartitionGraph& g) {
  PartitionGraph r = g;
  auto flip = [](Point p) { return Point{p.x, -p.y}; };
  for (auto& v : r.vertices) v.pos = flip(v.pos);
  for (auto& e : r.edges) {
    e.arc = {flip(e.arc.p0), flip(e.arc.p1), -e.arc.h};
    std::swap(e.left, e.right);
  }
  return r;
}

std::vector<Point> sample_points(const PartitionGraph& g, int per_edge) {
  std::vector<Point> pts;
  pts.reserve(g.edges.size() * static_cast<std::size_t>(per_edge + 1));
  for (const auto& e : g.edges)
    for (int k = 0; k <= per_edge; ++k) pts.push_back(point_at(e.arc, static_cast<double>(k) / per_edge));
  return pts;
}

double hausdorff_distance(const std::vector<Point>& a, const std::vector<Point>& b) {
  auto directed = [](const std::vector<Point>& from, const std::vector<Point>& to) {
    double worst = 0.0;
    for (Point p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (Point q : to) best = std::min(best, dot(p - q, p - q));
      worst = std::max(worst, best);
    }
    return std::sqrt(worst);
  };
  return std::max(directed(a, b), directed(b, a));
}

namespace {

double distance_to_arc(const ArcEdge& a, Point p) {
  if (is_straight(a)) {
    const Point d = a.p1 - a.p0;
    const double t = std::clamp(dot(p - a.p0, d) / dot(d, d), 0.0, 1.0);
    return distance(p, a.p0 + d * t);
  }
  const Point c = *center(a);
  const double r = radius(a);
  const double s = a.h > 0 ? 1.0 : -1.0;
  const double a0 = std::atan2(a.p0.y - c.y, a.p0.x - c.x);
  const double ap = std::atan2(p.y - c.y, p.x - c.x);
  const double along = wrap_angle(s * (ap - a0));
  if (along <= central_angle(a)) return std::abs(distance(p, c) - r);
  return std::min(distance(p, a.p0), distance(p, a.p1));
}

}  // namespace

double distance_to_graph(const PartitionGraph& g, Point p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : g.edges) best = std::min(best, distance_to_arc(e.arc, p));
  return best;
}

}  // namespace diskpart
