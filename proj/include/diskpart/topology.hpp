#pragma once

#include <functional>
#include <vector>

#include "diskpart/geometry.hpp"

namespace diskpart {

enum class VertexKind { Interior, Boundary };

/// Combinatorial edge: travels v0 -> v1 with `left` region on its left.
struct MapEdge {
  int v0 = -1;
  int v1 = -1;
  int left = -1;
  int right = -1;
};

/// One step along a face boundary: either an edge side or a counterclockwise
/// piece of the unit circle between two boundary vertices.
struct FaceStep {
  enum class Kind { Edge, Boundary } kind = Kind::Edge;
  int edge = -1;        // Kind::Edge
  bool forward = true;  // traversed v0 -> v1
  int from_vertex = -1; // Kind::Boundary
  int to_vertex = -1;
  double sweep = 0.0;   // counterclockwise sweep of the boundary piece
};

/// A connected component of a region, traversed counterclockwise (region on the left).
struct Face {
  int region = -1;
  std::vector<FaceStep> steps;
  bool touches_boundary() const;
  /// Number of sides, counting each boundary piece as one side.
  int side_count() const { return static_cast<int>(steps.size()); }
  int interior_edge_count() const;
};

struct PlanarMap {
  std::vector<VertexKind> kinds;
  std::vector<Point> positions;
  std::vector<MapEdge> edges;
  int region_count = 0;
};

/// Unit direction leaving vertex `at_start ? v0 : v1` along edge `e`.
using DepartureFn = std::function<Point(int edge, bool at_start)>;

/// Checks degree rules: interior vertices have degree 3, boundary vertices degree 1
/// and lie on the unit circle. Throws TopologyError.
void validate_degrees(const PlanarMap& map, double tol = kTolGeom);

/// Traces every face of the map; throws TopologyError when the region labels are
/// inconsistent around a face.
std::vector<Face> trace_faces(const PlanarMap& map, const DepartureFn& departure);

}  // namespace diskpart
