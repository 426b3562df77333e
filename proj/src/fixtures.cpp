#include "diskpart/fixtures.hpp"

#include <cmath>

#include "diskpart/solver.hpp"
#include "diskpart/stability.hpp"

namespace diskpart {

namespace {

double deg(double d) { return d * kPi / 180.0; }

}  // namespace

void annotate_regions(PartitionGraph& g) {
  const auto areas = g.region_areas();
  const auto p = fitted_pressures(g);
  for (std::size_t r = 0; r < g.regions.size(); ++r) g.regions[r] = {areas[r], p[r]};
}

PartitionGraph hex_fixture() {
  PartitionGraph g;
  g.regions.resize(3);
  const double rho = std::sqrt(2.0 * kPi / (9.0 * std::sqrt(3.0)));
  int hv[6], bv[6];
  for (int k = 0; k < 6; ++k) {
    const double ang = deg(30.0 + 60.0 * k);
    hv[k] = g.add_vertex(unit_vector(ang) * rho, VertexKind::Interior);
    bv[k] = g.add_vertex(unit_vector(ang), VertexKind::Boundary);
  }
  auto label = [](int k) { return ((k % 6) + 6) % 6 % 2 == 0 ? 0 : 1; };
  for (int k = 0; k < 6; ++k) {
    const int a = hv[k], b = hv[(k + 1) % 6];
    g.add_edge({g.vertices[a].pos, g.vertices[b].pos, 0.0}, a, b, 2, label(k));
  }
  for (int k = 0; k < 6; ++k)
    g.add_edge({g.vertices[hv[k]].pos, g.vertices[bv[k]].pos, 0.0}, hv[k], bv[k], label(k), label(k - 1));
  annotate_regions(g);
  return g;
}

PartitionGraph conf_a_fixture(double y) {
  PartitionGraph g;
  g.regions.resize(3);
  const Point Tp{0.0, y}, Bp{0.0, -y};
  const int T = g.add_vertex(Tp, VertexKind::Interior);
  const int B = g.add_vertex(Bp, VertexKind::Interior);
  g.add_edge({Bp, Tp, 0.0}, B, T, 1, 2);
  struct Spec {
    Point from;
    int from_id;
    double dir;
    int left, right;
  };
  const Spec specs[4] = {{Tp, T, 30.0, 0, 2}, {Tp, T, 150.0, 1, 0}, {Bp, B, -30.0, 2, 0}, {Bp, B, 210.0, 0, 1}};
  for (const auto& s : specs) {
    const ArcEdge arc = orthogonal_arc_from(s.from, unit_vector(deg(s.dir)));
    const int b = g.add_vertex(arc.p1, VertexKind::Boundary);
    g.add_edge(arc, s.from_id, b, s.left, s.right);
  }
  annotate_regions(g);
  return g;
}

namespace {

struct CornerGeometry {
  ArcEdge top, right;
  Point spoke_dir;
};

CornerGeometry corner(double a, double b, double alpha) {
  const double beta = deg(30.0) - alpha;
  CornerGeometry c;
  c.right = {{a, -b}, {a, b}, std::sin(beta) / b};
  c.top = {{a, b}, {-a, b}, std::sin(alpha) / a};
  c.spoke_dir = normalized(-(tangent_at(c.top, 0.0) - tangent_at(c.right, 1.0)));
  return c;
}

double conf_c_residual(double a, double b, double alpha) {
  const CornerGeometry c = corner(a, b, alpha);
  const ArcEdge spoke = orthogonal_arc_from({a, b}, c.spoke_dir);
  return spoke.h - (c.right.h - c.top.h);
}

}  // namespace

PartitionGraph conf_c_fixture(double a, double alpha) {
  // Bracket b by scanning; the residual changes sign once in the admissible range.
  auto f = [&](double b) { return conf_c_residual(a, b, alpha); };
  double lo = -1, flo = 0, hi = -1, fhi = 0;
  double prev_b = -1, prev_f = 0;
  for (int k = 1; k < 400; ++k) {
    const double b = 0.9 * k / 400.0;
    double fb;
    try {
      fb = f(b);
    } catch (const DomainError&) {
      prev_b = -1;
      continue;
    }
    if (prev_b > 0 && (fb > 0) != (prev_f > 0)) {
      lo = prev_b, flo = prev_f, hi = b, fhi = fb;
      break;
    }
    prev_b = b;
    prev_f = fb;
  }
  if (lo < 0) throw DomainError("no stationary configuration (c) for these parameters");
  const double b = bracketed_root(f, lo, hi, flo, fhi, 1e-16, 1e-15);

  const CornerGeometry c = corner(a, b, alpha);
  PartitionGraph g;
  g.regions.resize(3);
  const Point P[4] = {{a, -b}, {a, b}, {-a, b}, {-a, -b}};
  int v[4];
  for (int k = 0; k < 4; ++k) v[k] = g.add_vertex(P[k], VertexKind::Interior);
  g.add_edge(c.right, v[0], v[1], 0, 2);
  g.add_edge(c.top, v[1], v[2], 0, 1);
  g.add_edge({P[2], P[3], c.right.h}, v[2], v[3], 0, 2);
  g.add_edge({P[3], P[0], c.top.h}, v[3], v[0], 0, 1);
  // Spokes follow the double mirror symmetry of the corner (a, b).
  const Point sx[4] = {{1, -1}, {1, 1}, {-1, 1}, {-1, -1}};
  const int lr[4][2] = {{2, 1}, {1, 2}, {2, 1}, {1, 2}};
  for (int k = 0; k < 4; ++k) {
    const Point d{c.spoke_dir.x * sx[k].x, c.spoke_dir.y * sx[k].y};
    const ArcEdge s = orthogonal_arc_from(P[k], d);
    const int bnd = g.add_vertex(s.p1, VertexKind::Boundary);
    g.add_edge(s, v[k], bnd, lr[k][0], lr[k][1]);
  }
  annotate_regions(g);
  return g;
}

PartitionGraph conf_i_fixture(double y_top) {
  auto f = [&](double ell) { return orthogonal_arc_from({1.5 * ell, y_top}, unit_vector(deg(30.0))).h + 1.0 / ell; };
  double lo = -1, flo = 0, hi = -1, fhi = 0, prev = -1, fprev = 0;
  for (int k = 1; k < 400; ++k) {
    const double ell = 0.66 * k / 400.0;
    double fe;
    try {
      fe = f(ell);
    } catch (const DomainError&) {
      prev = -1;
      continue;
    }
    if (prev > 0 && (fe > 0) != (fprev > 0)) {
      lo = prev, flo = fprev, hi = ell, fhi = fe;
      break;
    }
    prev = ell;
    fprev = fe;
  }
  if (lo < 0) throw DomainError("no stationary configuration (i) for this height");
  const double ell = bracketed_root(f, lo, hi, flo, fhi, 1e-16, 1e-15);
  const double h = 1.0 / ell;

  PartitionGraph g;
  g.regions.resize(3);
  const int chain[5] = {1, 0, 1, 0, 1};
  const double xs[4] = {-1.5 * ell, -0.5 * ell, 0.5 * ell, 1.5 * ell};
  int top[4], bot[4];
  for (int k = 0; k < 4; ++k) {
    top[k] = g.add_vertex({xs[k], y_top}, VertexKind::Interior);
    bot[k] = g.add_vertex({xs[k], -y_top}, VertexKind::Interior);
  }
  for (int k = 0; k < 4; ++k)
    g.add_edge({g.vertices[bot[k]].pos, g.vertices[top[k]].pos, 0.0}, bot[k], top[k], chain[k], chain[k + 1]);
  for (int k = 0; k < 3; ++k) {
    g.add_edge({g.vertices[top[k]].pos, g.vertices[top[k + 1]].pos, -h}, top[k], top[k + 1], 2, chain[k + 1]);
    g.add_edge({g.vertices[bot[k + 1]].pos, g.vertices[bot[k]].pos, -h}, bot[k + 1], bot[k], 2, chain[k + 1]);
  }
  struct End {
    int from;
    double dir;
    int left, right;
  };
  const End ends[4] = {{top[3], 30.0, 2, 1}, {top[0], 150.0, 1, 2}, {bot[3], -30.0, 1, 2}, {bot[0], 210.0, 2, 1}};
  for (const auto& e : ends) {
    const ArcEdge arc = orthogonal_arc_from(g.vertices[e.from].pos, unit_vector(deg(e.dir)));
    const int b = g.add_vertex(arc.p1, VertexKind::Boundary);
    g.add_edge(arc, e.from, b, e.left, e.right);
  }
  annotate_regions(g);
  return g;
}

}  // namespace diskpart
