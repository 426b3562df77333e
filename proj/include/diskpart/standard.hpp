#pragma once

#include <array>
#include <utility>
#include <vector>

#include "diskpart/geometry.hpp"
#include "diskpart/partition_graph.hpp"

namespace diskpart {

/// Arc (or diameter) meeting the unit circle orthogonally at both ends. The edge
/// runs from its lower endpoint p0 to its upper endpoint p1 with region 1 on its
/// left; h = p1 - p2 is its curvature toward region 1.
struct TwoRegionSplitter {
  ArcEdge edge;
  double h = 0.0;
};

/// Canonical placement: symmetric about the x-axis, region 1 on the left
/// (the concave side when h > 0).
TwoRegionSplitter splitter_from_curvature(double h);
/// Area on the left of the splitter (region 1).
double splitter_left_area(const TwoRegionSplitter& s);
PartitionGraph to_partition_graph(const TwoRegionSplitter& s);

/// Three arcs C12, C23, C31 leaving one interior vertex. edges[0] = C12,
/// edges[1] = C23, edges[2] = C31; C_ij is oriented from the interior vertex
/// outward with region i on its left, so its curvature is h_ij.
struct StandardGraph {
  std::array<ArcEdge, 3> edges;
  Point interior_vertex;
  std::array<Point, 3> boundary_vertices;
  std::array<double, 3> pressures{};

  double h12() const { return edges[0].h; }
  double h23() const { return edges[1].h; }
  double h31() const { return edges[2].h; }
  double perimeter() const;
};

class DegenerateVertexError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Height of `v` above the real axis after sending the splitter's upper endpoint to
/// infinity; parametrizes the vertex position along the splitter from 0 (lower
/// endpoint) to +infinity (upper endpoint).
double splitter_depth(const TwoRegionSplitter& s, Point v);
Point splitter_point_at_depth(const TwoRegionSplitter& s, double depth);

/// Unique standard graph containing the part of `s` above v, with interior vertex v.
StandardGraph complete_from_edge(const TwoRegionSplitter& s, Point v);
StandardGraph complete_at_depth(const TwoRegionSplitter& s, double depth);

/// Closed-form curvatures (h31, h32) of the completing arcs; x is the splitter
/// curvature h12 and d the half-plane height of the vertex.
std::pair<double, double> curvatures_from_halfplane(double d, double x);

/// Zero-sum pressures from the three curvatures; throws GeometryError when the
/// curvatures are not balanced.
std::array<double, 3> pressures_of(const StandardGraph& g, double tol = kTolGeom);
std::array<double, 3> pressures_from_curvatures(double h12, double h23, double h31,
                                                double tol = kTolGeom);

PartitionGraph to_partition_graph(const StandardGraph& g);
StandardGraph rotated(const StandardGraph& g, double angle);

struct StationarityReport {
  std::vector<double> angle_residuals;          // per interior vertex, radians
  std::vector<double> balance_residuals;        // per interior vertex
  std::vector<double> orthogonality_residuals;  // per boundary vertex, radians
  std::vector<double> curvature_residuals;      // per edge
  std::vector<int> interior_vertices;
  std::vector<int> boundary_vertices;

  double max_residual() const;
  bool stationary(double tol) const { return max_residual() <= tol; }
};

StationarityReport check_stationary(const PartitionGraph& g);

}  // namespace diskpart
