#include "diskpart/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace diskpart {

bool Face::touches_boundary() const {
  return std::any_of(steps.begin(), steps.end(),
                     [](const FaceStep& s) { return s.kind == FaceStep::Kind::Boundary; });
}

int Face::interior_edge_count() const {
  return static_cast<int>(std::count_if(steps.begin(), steps.end(), [](const FaceStep& s) {
    return s.kind == FaceStep::Kind::Edge;
  }));
}

void validate_degrees(const PlanarMap& map, double tol) {
  std::vector<int> degree(map.kinds.size(), 0);
  for (const auto& e : map.edges) {
    if (e.v0 < 0 || e.v1 < 0 || e.v0 >= static_cast<int>(degree.size()) ||
        e.v1 >= static_cast<int>(degree.size()))
      throw TopologyError("edge references a missing vertex");
    if (e.left == e.right) throw TopologyError("edge separates a region from itself");
    if (e.left < 0 || e.right < 0 || e.left >= map.region_count || e.right >= map.region_count)
      throw TopologyError("edge references a missing region");
    ++degree[e.v0];
    ++degree[e.v1];
  }
  for (std::size_t v = 0; v < degree.size(); ++v) {
    if (map.kinds[v] == VertexKind::Interior) {
      if (degree[v] != 3)
        throw TopologyError("interior vertex " + std::to_string(v) + " has degree " +
                            std::to_string(degree[v]));
      if (norm(map.positions[v]) >= 1.0) throw TopologyError("interior vertex outside the disk");
    } else {
      if (degree[v] != 1)
        throw TopologyError("boundary vertex " + std::to_string(v) + " has degree " +
                            std::to_string(degree[v]));
      if (!on_unit_circle(map.positions[v], tol))
        throw TopologyError("boundary vertex off the unit circle");
    }
  }
}

std::vector<Face> trace_faces(const PlanarMap& map, const DepartureFn& departure) {
  const int nv = static_cast<int>(map.kinds.size());
  const int ne = static_cast<int>(map.edges.size());
  std::vector<Face> faces;

  // Boundary vertices in counterclockwise order.
  std::vector<int> boundary;
  for (int v = 0; v < nv; ++v)
    if (map.kinds[v] == VertexKind::Boundary) boundary.push_back(v);
  auto angle_of = [&](int v) { return wrap_angle(std::atan2(map.positions[v].y, map.positions[v].x)); };
  std::sort(boundary.begin(), boundary.end(), [&](int a, int b) { return angle_of(a) < angle_of(b); });
  std::vector<int> boundary_rank(nv, -1);
  for (std::size_t k = 0; k < boundary.size(); ++k) boundary_rank[boundary[k]] = static_cast<int>(k);

  if (ne == 0) {
    if (map.region_count != 1) throw TopologyError("graph without edges must have one region");
    Face f;
    f.region = 0;
    FaceStep s;
    s.kind = FaceStep::Kind::Boundary;
    s.sweep = 2.0 * kPi;
    f.steps.push_back(s);
    faces.push_back(f);
    return faces;
  }

  // Outgoing half-edges around each vertex sorted counterclockwise by departure angle.
  // Half-edge id: 2*edge + (forward ? 0 : 1); it leaves v0 when forward.
  std::vector<std::vector<std::pair<double, int>>> around(nv);
  for (int e = 0; e < ne; ++e) {
    const Point d0 = departure(e, true);
    const Point d1 = departure(e, false);
    around[map.edges[e].v0].push_back({std::atan2(d0.y, d0.x), 2 * e});
    around[map.edges[e].v1].push_back({std::atan2(d1.y, d1.x), 2 * e + 1});
  }
  for (auto& a : around) std::sort(a.begin(), a.end());

  auto head = [&](int he) { return (he % 2 == 0) ? map.edges[he / 2].v1 : map.edges[he / 2].v0; };
  auto left_region = [&](int he) { return (he % 2 == 0) ? map.edges[he / 2].left : map.edges[he / 2].right; };
  auto twin = [](int he) { return he ^ 1; };

  std::vector<char> used(2 * ne, 0);
  std::vector<char> arc_used(boundary.size(), 0);

  auto next_after = [&](int he) -> int {
    // Arriving at v along he: leave by the half-edge immediately clockwise of twin(he).
    const int v = head(he);
    const auto& a = around[v];
    const int t = twin(he);
    const auto it = std::find_if(a.begin(), a.end(), [&](const auto& p) { return p.second == t; });
    const std::size_t k = static_cast<std::size_t>(it - a.begin());
    return a[(k + a.size() - 1) % a.size()].second;
  };

  auto boundary_step = [&](int v) {
    const std::size_t k = static_cast<std::size_t>(boundary_rank[v]);
    const int w = boundary[(k + 1) % boundary.size()];
    FaceStep s;
    s.kind = FaceStep::Kind::Boundary;
    s.from_vertex = v;
    s.to_vertex = w;
    s.sweep = boundary.size() == 1 ? 2.0 * kPi : wrap_angle(angle_of(w) - angle_of(v));
    return s;
  };

  auto trace = [&](FaceStep first) {
    Face f;
    FaceStep step = first;
    const std::size_t guard = 4 * static_cast<std::size_t>(ne) + 4 * boundary.size() + 8;
    while (true) {
      if (step.kind == FaceStep::Kind::Edge) {
        const int he = 2 * step.edge + (step.forward ? 0 : 1);
        if (used[he]) break;
        used[he] = 1;
        const int region = left_region(he);
        if (f.region < 0) f.region = region;
        else if (f.region != region)
          throw TopologyError("inconsistent region labels around a face (edge " +
                              std::to_string(step.edge) + ")");
        f.steps.push_back(step);
        const int v = head(he);
        if (map.kinds[v] == VertexKind::Boundary) {
          step = boundary_step(v);
        } else {
          const int nh = next_after(he);
          step = FaceStep{};
          step.edge = nh / 2;
          step.forward = (nh % 2 == 0);
        }
      } else {
        const std::size_t k = static_cast<std::size_t>(boundary_rank[step.from_vertex]);
        if (arc_used[k]) break;
        arc_used[k] = 1;
        f.steps.push_back(step);
        const int v = step.to_vertex;
        const int he = around[v].front().second;
        step = FaceStep{};
        step.edge = he / 2;
        step.forward = (he % 2 == 0);
      }
      if (f.steps.size() > guard) throw TopologyError("face tracing did not terminate");
    }
    if (f.region < 0) throw TopologyError("face without interior edges");
    faces.push_back(std::move(f));
  };

  for (int he = 0; he < 2 * ne; ++he) {
    if (used[he]) continue;
    FaceStep s;
    s.edge = he / 2;
    s.forward = (he % 2 == 0);
    trace(s);
  }
  for (std::size_t k = 0; k < boundary.size(); ++k)
    if (!arc_used[k]) trace(boundary_step(boundary[k]));
  return faces;
}

}  // namespace diskpart
