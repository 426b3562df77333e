#include "diskpart/discrete_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace diskpart {

PlanarMap DiscreteGraph::planar_map() const {
  PlanarMap m;
  m.kinds = vertex_kinds;
  m.positions.assign(nodes.begin(), nodes.begin() + vertex_count());
  for (const auto& e : edges) m.edges.push_back({e.chain.front(), e.chain.back(), e.left, e.right});
  m.region_count = region_count();
  return m;
}

void DiscreteGraph::trace() {
  faces = trace_faces(planar_map(), [this](int e, bool at_start) {
    const auto& c = edges[e].chain;
    const Point d = at_start ? nodes[c[1]] - nodes[c[0]] : nodes[c[c.size() - 2]] - nodes[c.back()];
    return normalized(d);
  });
}

void DiscreteGraph::validate(double tol) const {
  validate_degrees(planar_map(), tol);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& c = edges[e].chain;
    if (c.size() < 2 || !is_vertex(c.front()) || !is_vertex(c.back()))
      throw TopologyError("edge " + std::to_string(e) + " must run between two graph vertices");
    for (std::size_t k = 1; k + 1 < c.size(); ++k)
      if (is_vertex(c[k])) throw TopologyError("edge " + std::to_string(e) + " passes through a vertex");
  }
  double total = 0.0;
  for (double a : region_areas()) total += a;
  if (std::abs(total - kPi) > 1e-6) throw TopologyError("face areas do not sum to pi");
}

bool DiscreteGraph::embedded(double tol) const {
  for (int k = 0; k < static_cast<int>(nodes.size()); ++k)
    if (!is_boundary(k) && norm(nodes[k]) > 1.0 + tol) return false;
  struct Seg {
    int a, b;
    double lo, hi;
  };
  std::vector<Seg> segs;
  for (const auto& e : edges)
    for (std::size_t k = 1; k < e.chain.size(); ++k) {
      const int a = e.chain[k - 1], b = e.chain[k];
      segs.push_back({a, b, std::min(nodes[a].x, nodes[b].x), std::max(nodes[a].x, nodes[b].x)});
    }
  std::sort(segs.begin(), segs.end(), [](const Seg& s, const Seg& t) { return s.lo < t.lo; });
  for (std::size_t i = 0; i < segs.size(); ++i)
    for (std::size_t j = i + 1; j < segs.size() && segs[j].lo <= segs[i].hi; ++j) {
      const Seg &s = segs[i], &t = segs[j];
      if (s.a == t.a || s.a == t.b || s.b == t.a || s.b == t.b) continue;
      const Point p = nodes[s.a], d = nodes[s.b] - p, u = nodes[t.a], e = nodes[t.b] - u;
      if (std::max(u.y, u.y + e.y) < std::min(p.y, p.y + d.y) || std::max(p.y, p.y + d.y) < std::min(u.y, u.y + e.y))
        continue;
      const double den = cross(d, e), dd = dot(d, d);
      if (std::abs(den) <= 1e-12 * std::sqrt(dd * dot(e, e))) {
        // Parallel: they meet only if collinear with overlapping projections.
        if (std::abs(cross(u - p, d)) > 1e-12 * dd) continue;
        const double b0 = dot(u - p, d), b1 = dot(u + e - p, d);
        if (std::max(b0, b1) >= 0.0 && std::min(b0, b1) <= dd) return false;
        continue;
      }
      const double ts = cross(u - p, e) / den, tt = cross(u - p, d) / den;
      if (ts >= 0.0 && ts <= 1.0 && tt >= 0.0 && tt <= 1.0) return false;
    }
  return true;
}

namespace {

double point_segment_distance(Point p, Point a, Point b) {
  const Point d = b - a;
  const double dd = dot(d, d);
  const double t = dd > 0.0 ? std::clamp(dot(p - a, d) / dd, 0.0, 1.0) : 0.0;
  return distance(p, a + d * t);
}

}  // namespace

DiscreteGraph::Contact DiscreteGraph::closest_disjoint_edges() const {
  Contact c{-1, -1, std::numeric_limits<double>::infinity()};
  const int E = static_cast<int>(edges.size());
  for (int i = 0; i < E; ++i)
    for (int j = i + 1; j < E; ++j) {
      const auto &a = edges[i].chain, &b = edges[j].chain;
      if (a.front() == b.front() || a.front() == b.back() || a.back() == b.front() || a.back() == b.back()) continue;
      for (std::size_t k = 1; k < a.size(); ++k)
        for (std::size_t l = 1; l < b.size(); ++l) {
          const Point p = nodes[a[k - 1]], q = nodes[a[k]], u = nodes[b[l - 1]], v = nodes[b[l]];
          // Segments do not cross (embedded), so the distance is attained at an endpoint.
          const double d = std::min({point_segment_distance(p, u, v), point_segment_distance(q, u, v),
                                     point_segment_distance(u, p, q), point_segment_distance(v, p, q)});
          if (d < c.distance) c = {i, j, d};
        }
    }
  return c;
}

std::vector<Point> DiscreteGraph::polyline(int e) const {
  std::vector<Point> p;
  p.reserve(edges[e].chain.size());
  for (int k : edges[e].chain) p.push_back(nodes[k]);
  return p;
}

double DiscreteGraph::edge_length(int e) const {
  const auto& c = edges[e].chain;
  double L = 0.0;
  for (std::size_t k = 1; k < c.size(); ++k) L += distance(nodes[c[k - 1]], nodes[c[k]]);
  return L;
}

double DiscreteGraph::perimeter() const {
  double L = 0.0;
  for (std::size_t e = 0; e < edges.size(); ++e) L += edge_length(static_cast<int>(e));
  return L;
}

double DiscreteGraph::boundary_sweep(const FaceStep& s) const {
  if (s.from_vertex < 0 || s.from_vertex == s.to_vertex) return s.sweep;
  const Point a = nodes[s.from_vertex], b = nodes[s.to_vertex];
  double d = std::atan2(cross(a, b), dot(a, b));
  // Stay on the branch of the traced sweep.
  while (d - s.sweep > kPi) d -= 2 * kPi;
  while (s.sweep - d > kPi) d += 2 * kPi;
  return d;
}

std::vector<double> DiscreteGraph::region_areas() const {
  std::vector<double> A(region_count(), 0.0);
  for (const auto& e : edges) {
    double c = 0.0;
    for (std::size_t k = 1; k < e.chain.size(); ++k) c += cross(nodes[e.chain[k - 1]], nodes[e.chain[k]]);
    A[e.left] += c / 2.0;
    A[e.right] -= c / 2.0;
  }
  for (const auto& f : faces)
    for (const auto& s : f.steps)
      if (s.kind == FaceStep::Kind::Boundary) A[f.region] += boundary_sweep(s) / 2.0;
  return A;
}

DiscreteGraph discretize(const PartitionGraph& g, int n_segments) {
  if (n_segments < 1) throw DomainError("n_segments must be positive");
  DiscreteGraph d;
  for (const auto& v : g.vertices) {
    d.nodes.push_back(v.pos);
    d.vertex_kinds.push_back(v.kind);
  }
  for (const auto& e : g.edges) {
    DiscreteGraph::Edge de{{e.v0}, e.left, e.right};
    for (int k = 1; k < n_segments; ++k) {
      de.chain.push_back(static_cast<int>(d.nodes.size()));
      d.nodes.push_back(point_at(e.arc, static_cast<double>(k) / n_segments));
    }
    de.chain.push_back(e.v1);
    d.edges.push_back(std::move(de));
  }
  for (int k = 0; k < static_cast<int>(g.vertices.size()); ++k)
    if (g.vertices[k].kind == VertexKind::Boundary) d.nodes[k] = normalized(d.nodes[k]);
  d.target_area.assign(g.regions.size(), 0.0);
  d.multiplier.assign(g.regions.size(), 0.0);
  d.trace();
  d.target_area = d.region_areas();
  return d;
}

PartitionGraph fitted_graph(const DiscreteGraph& g) {
  PartitionGraph p;
  for (int v = 0; v < g.vertex_count(); ++v) p.add_vertex(g.nodes[v], g.vertex_kinds[v]);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto pts = g.polyline(static_cast<int>(e));
    const CircleFit fit = fit_circle(pts);
    const auto& E = g.edges[e];
    p.add_edge({pts.front(), pts.back(), fit.straight ? 0.0 : fit.curvature}, E.chain.front(), E.chain.back(), E.left,
               E.right);
  }
  p.regions.resize(g.region_count());
  for (int r = 0; r < g.region_count(); ++r) p.regions[r].target_area = g.target_area[r];
  return p;
}

std::vector<Point> sample_points(const DiscreteGraph& g) {
  std::vector<Point> pts;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto p = g.polyline(static_cast<int>(e));
    pts.insert(pts.end(), p.begin(), p.end());
  }
  return pts;
}

double aligned_hausdorff(const DiscreteGraph& g, const PartitionGraph& exact, int per_edge) {
  auto key = [](int a, int b) { return std::pair{std::min(a, b), std::max(a, b)}; };
  const std::vector<Point> target = sample_points(exact, per_edge);
  double best = std::numeric_limits<double>::infinity();
  // The problem is invariant under reflections too, so try the mirror image as well.
  for (const double mirror : {1.0, -1.0}) {
    auto image = [&](Point p) { return Point{p.x, mirror * p.y}; };
    double sx = 0.0, sy = 0.0;
    for (const auto& e : g.edges) {
      const int b = g.is_boundary(e.chain.back()) ? e.chain.back() : g.is_boundary(e.chain.front()) ? e.chain.front() : -1;
      if (b < 0) continue;
      for (const auto& f : exact.edges) {
        if (key(f.left, f.right) != key(e.left, e.right)) continue;
        const int c = exact.vertices[f.v1].kind == VertexKind::Boundary   ? f.v1
                      : exact.vertices[f.v0].kind == VertexKind::Boundary ? f.v0
                                                                          : -1;
        if (c < 0) continue;
        const Point p = image(g.nodes[b]), q = exact.vertices[c].pos;
        sx += dot(p, q);
        sy += cross(p, q);
      }
    }
    const double t = (sx == 0.0 && sy == 0.0) ? 0.0 : std::atan2(sy, sx);
    // Densified well below the polyline spacing.
    std::vector<Point> pts;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      const auto p = g.polyline(static_cast<int>(e));
      for (std::size_t k = 1; k < p.size(); ++k)
        for (int j = 0; j < 16; ++j) pts.push_back(rotate(image(p[k - 1] + (p[k] - p[k - 1]) * (j / 16.0)), t));
      pts.push_back(rotate(image(p.back()), t));
    }
    best = std::min(best, hausdorff_distance(pts, target));
  }
  return best;
}

}  // namespace diskpart
