#pragma once

#include <string>
#include <vector>

#include "diskpart/partition_graph.hpp"
#include "diskpart/topology.hpp"

namespace diskpart {

/// Polyline curve network. Nodes 0..vertex_count-1 are the graph vertices
/// (interior triple junctions and boundary junctions); the rest are free
/// polyline nodes. Each edge is a chain of node indices from one vertex to another.
struct DiscreteGraph {
  struct Edge {
    std::vector<int> chain;
    int left = -1;
    int right = -1;
  };

  std::vector<Point> nodes;
  std::vector<VertexKind> vertex_kinds;  // one per graph vertex
  std::vector<Edge> edges;
  std::vector<Face> faces;  // traced at construction; boundary steps keep their endpoints
  std::vector<double> target_area;
  std::vector<double> multiplier;  // zero-sum pressure estimate from the last relaxation
  std::string template_name;

  int vertex_count() const { return static_cast<int>(vertex_kinds.size()); }
  int region_count() const { return static_cast<int>(target_area.size()); }
  bool is_vertex(int node) const { return node < vertex_count(); }
  bool is_boundary(int node) const { return is_vertex(node) && vertex_kinds[node] == VertexKind::Boundary; }

  PlanarMap planar_map() const;
  /// Degree rules, chain endpoints, |p| = 1 on boundary junctions and face labels.
  void validate(double tol = 1e-9) const;
  std::vector<Point> polyline(int e) const;
  double edge_length(int e) const;
  double perimeter() const;
  /// Shoelace areas; boundary pieces contribute half their current sweep.
  std::vector<double> region_areas() const;
  /// Counterclockwise sweep of a boundary face step at the current positions.
  double boundary_sweep(const FaceStep& s) const;
  /// No two non-adjacent segments meet and every node lies in the closed disk.
  bool embedded(double tol = 1e-9) const;
  /// Closest approach between two edges with no common vertex; {-1, -1, inf} if none.
  struct Contact {
    int edge_a = -1, edge_b = -1;
    double distance = 0.0;
  };
  Contact closest_disjoint_edges() const;
  /// Recomputes `faces` from the current geometry.
  void trace();
};

/// Samples every arc at n_segments + 1 equally spaced points.
DiscreteGraph discretize(const PartitionGraph& g, int n_segments);

/// Exact graph with one circle fit per polyline edge (endpoints kept).
PartitionGraph fitted_graph(const DiscreteGraph& g);

std::vector<Point> sample_points(const DiscreteGraph& g);

/// Hausdorff distance to an exact graph after rotating g about the origin so its
/// boundary junctions line up with the exact ones carrying the same region pair
/// (the mirror image is tried as well).
double aligned_hausdorff(const DiscreteGraph& g, const PartitionGraph& exact, int per_edge = 2048);

}  // namespace diskpart
