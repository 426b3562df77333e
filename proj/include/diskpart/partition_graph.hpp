#pragma once

#include <vector>

#include "diskpart/geometry.hpp"
#include "diskpart/topology.hpp"

namespace diskpart {

/// Admissible graph with exact circular-arc edges. Edge e separates
/// regions[e.left] (on its left, the side its curvature is measured toward) from
/// regions[e.right].
struct PartitionGraph {
  struct Vertex {
    Point pos;
    VertexKind kind = VertexKind::Interior;
  };
  struct Edge {
    ArcEdge arc;
    int v0 = -1;
    int v1 = -1;
    int left = -1;
    int right = -1;
  };
  struct Region {
    double target_area = 0.0;
    double pressure = 0.0;
  };

  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::vector<Region> regions;

  int add_vertex(Point p, VertexKind kind);
  int add_edge(const ArcEdge& arc, int v0, int v1, int left, int right);

  PlanarMap planar_map() const;
  /// Degree rules and arc/vertex incidence; throws TopologyError.
  void validate(double tol = kTolGeom) const;
  std::vector<Face> faces() const;
  ArcPolygon face_polygon(const Face& f) const;
  double face_area(const Face& f) const;
  std::vector<double> region_areas() const;
  double perimeter() const;
  /// Oriented arc of a face step (reversed when traversed backwards).
  ArcEdge step_arc(const FaceStep& s) const;
};

PartitionGraph rotated(const PartitionGraph& g, double angle);
/// Mirror image across the x-axis; edge orientations are kept so left/right swap.
PartitionGraph reflected_x(const PartitionGraph& g);

/// Dense sample of the edges (per_edge + 1 points per edge).
std::vector<Point> sample_points(const PartitionGraph& g, int per_edge);
/// Symmetric Hausdorff distance between two finite point sets.
double hausdorff_distance(const std::vector<Point>& a, const std::vector<Point>& b);
/// Distance from a point to the nearest edge of g (exact for arcs).
double distance_to_graph(const PartitionGraph& g, Point p);

}  // namespace diskpart
