#include <algorithm>
#include <cmath>

#include "diskpart/stability.hpp"

namespace diskpart {

namespace {

std::vector<int> face_edges(const Face& f) {
  std::vector<int> out;
  for (const auto& s : f.steps)
    if (s.kind == FaceStep::Kind::Edge) out.push_back(s.edge);
  return out;
}

bool is_hexagonal(const PartitionGraph& g, const Face& f) {
  if (f.touches_boundary() || f.side_count() != 6) return false;
  for (int e : face_edges(f))
    if (std::abs(g.edges[e].arc.h) > 1e-9) return false;
  return true;
}

// u = 1 on the interior boundary of the component, with the normal pointing into it.
DiscretizedVariation component_indicator(const PartitionGraph& g, const Face& f, int m) {
  DiscretizedVariation u = zero_variation(g, m);
  for (int e : face_edges(f)) u.u[e].setConstant(g.edges[e].left == f.region ? 1.0 : -1.0);
  return u;
}

DiscretizedVariation combine(const std::vector<DiscretizedVariation>& parts, const Eigen::VectorXd& c) {
  DiscretizedVariation u = parts.front();
  for (auto& x : u.u) x.setZero();
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (std::size_t e = 0; e < u.u.size(); ++e) u.u[e] += c(i) * parts[i].u[e];
  return u;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Area-preserving combination of `parts`; nullopt when none exists.
std::optional<Eigen::VectorXd> preserving_combination(const PartitionGraph& g,
                                                      const std::vector<DiscretizedVariation>& parts,
                                                      double rel_tol) {
  const int R = static_cast<int>(g.regions.size());
  Eigen::MatrixXd C(R, parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto dA = area_derivatives(g, parts[i]);
    for (int r = 0; r < R; ++r) C(r, i) = dA[r];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeFullV);
  const Eigen::VectorXd c = svd.matrixV().col(C.cols() - 1);
  const double scale = std::max(1e-300, svd.singularValues()(0));
  if ((C * c).norm() > rel_tol * scale) return std::nullopt;
  return c;
}

std::vector<int> support_of(const DiscretizedVariation& u) {
  std::vector<int> s;
  for (std::size_t e = 0; e < u.u.size(); ++e)
    if (u.u[e].cwiseAbs().maxCoeff() > 1e-12) s.push_back(static_cast<int>(e));
  return s;
}

Certificate make_certificate(const PartitionGraph& g, std::string kind, DiscretizedVariation u, int m) {
  Certificate c;
  c.kind = std::move(kind);
  const IndexFormMatrix q = assemble_index_form(g, m);
  c.Q_value = quadratic_form(q, u);
  c.area_residual = max_abs(area_derivatives(g, u));
  c.support = support_of(u);
  c.u = std::move(u);
  return c;
}

// Signed offset along N from x to the arc's supporting circle or line (root nearest 0).
double offset_to(const ArcEdge& arc, Point x, Point N) {
  if (is_straight(arc)) {
    const Point d = arc.p1 - arc.p0;
    return cross(d, arc.p0 - x) / cross(d, N);
  }
  const Point c = *center(arc);
  const double r = radius(arc);
  const Point w = x - c;
  // |w + t N|^2 = r^2
  const double b = dot(w, N), cc = dot(w, w) - r * r;
  const double disc = std::sqrt(std::max(0.0, b * b - cc));
  const double t1 = -b + disc, t2 = -b - disc;
  return std::abs(t1) < std::abs(t2) ? t1 : t2;
}

// Normal component of sliding the vertex of a boundary 3-component along its third edge.
std::optional<DiscretizedVariation> slide_variation(const PartitionGraph& g, const Face& f, int m) {
  const std::vector<int> es = face_edges(f);
  if (es.size() != 2) return std::nullopt;
  int T = -1;
  for (int v : {g.edges[es[0]].v0, g.edges[es[0]].v1})
    if ((v == g.edges[es[1]].v0 || v == g.edges[es[1]].v1) && g.vertices[v].kind == VertexKind::Interior) T = v;
  if (T < 0) return std::nullopt;
  int third = -1;
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e)
    if (e != es[0] && e != es[1] && (g.edges[e].v0 == T || g.edges[e].v1 == T)) third = e;
  if (third < 0) return std::nullopt;

  const ArcEdge& c = g.edges[third].arc;
  const bool c_from_T = g.edges[third].v0 == T;
  const double Lc = arc_length(c);
  auto slid = [&](double eps, Point& pos, Point& dir) {
    const double s = c_from_T ? eps / Lc : 1.0 - eps / Lc;
    pos = point_at(c, s);
    dir = c_from_T ? tangent_at(c, s) : -tangent_at(c, s);
  };
  Point p0, t0;
  slid(0.0, p0, t0);

  DiscretizedVariation u = zero_variation(g, m);
  const double eps = 1e-5;
  for (int e : es) {
    const ArcEdge& a = g.edges[e].arc;
    const bool from_T = g.edges[e].v0 == T;
    const Point d0 = from_T ? tangent_at(a, 0.0) : -tangent_at(a, 1.0);
    const double turn = std::atan2(cross(t0, d0), dot(t0, d0));
    ArcEdge plus, minus;
    for (int sgn : {1, -1}) {
      Point pos, dir;
      slid(sgn * eps, pos, dir);
      const ArcEdge moved = orthogonal_arc_from(pos, rotate(dir, turn));
      (sgn > 0 ? plus : minus) = moved;
    }
    for (int k = 0; k <= m; ++k) {
      const double s = static_cast<double>(k) / m;
      const Point x = point_at(a, s), N = normal_at(a, s);
      u.u[e](k) = (offset_to(plus, x, N) - offset_to(minus, x, N)) / (2 * eps);
    }
  }
  u.vertex_velocity[T] = t0;
  return u;
}

}  // namespace

ComponentBoundReport largest_pressure_component_bound(const PartitionGraph& g, int m) {
  ComponentBoundReport rep;
  const auto p = fitted_pressures(g);
  const double pmax = *std::max_element(p.begin(), p.end());
  const auto faces = g.faces();
  const int n = static_cast<int>(g.regions.size());
  int best = -1;
  for (int r = 0; r < n; ++r) {
    if (p[r] < pmax - 1e-9) continue;
    int comps = 0, nonhex = 0;
    for (const auto& f : faces)
      if (f.region == r) {
        ++comps;
        if (!is_hexagonal(g, f)) ++nonhex;
      }
    if (nonhex > best) {
      best = nonhex;
      rep.region = r;
      rep.components = comps;
      rep.nonhexagonal_components = nonhex;
    }
  }
  rep.bound_satisfied = rep.nonhexagonal_components <= n - 1;
  if (rep.bound_satisfied) return rep;

  std::vector<DiscretizedVariation> parts;
  for (const auto& f : faces)
    if (f.region == rep.region && !is_hexagonal(g, f)) parts.push_back(component_indicator(g, f, m));
  if (const auto c = preserving_combination(g, parts, 1e-9))
    rep.certificate = make_certificate(g, "largest-pressure-components", combine(parts, *c), m);
  return rep;
}

std::optional<Certificate> two_boundary_three_components(const PartitionGraph& g, int m) {
  const auto faces = g.faces();
  for (int r = 0; r < static_cast<int>(g.regions.size()); ++r) {
    std::vector<DiscretizedVariation> parts;
    for (const auto& f : faces) {
      if (f.region != r || !f.touches_boundary() || f.side_count() != 3 || f.interior_edge_count() != 2) continue;
      if (auto u = slide_variation(g, f, m)) parts.push_back(std::move(*u));
    }
    if (parts.size() < 2) continue;
    parts.resize(2);
    if (const auto c = preserving_combination(g, parts, 1e-6)) {
      DiscretizedVariation u = combine(parts, *c);
      return make_certificate(g, "two-boundary-3-components", std::move(u), m);
    }
  }
  return std::nullopt;
}

namespace {

struct Side {
  double length, curvature;
  int neighbor;
};

std::vector<Side> signature(const PartitionGraph& g, const Face& f) {
  std::vector<Side> s;
  for (int e : face_edges(f)) {
    const auto& E = g.edges[e];
    const bool inside_left = E.left == f.region;
    s.push_back({arc_length(E.arc), inside_left ? E.arc.h : -E.arc.h, inside_left ? E.right : E.left});
  }
  std::sort(s.begin(), s.end(), [](const Side& a, const Side& b) {
    if (a.neighbor != b.neighbor) return a.neighbor < b.neighbor;
    if (std::abs(a.length - b.length) > 1e-9) return a.length < b.length;
    return a.curvature < b.curvature;
  });
  return s;
}

bool congruent(const std::vector<Side>& a, const std::vector<Side>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].neighbor != b[i].neighbor || std::abs(a[i].length - b[i].length) > 1e-7 ||
        std::abs(a[i].curvature - b[i].curvature) > 1e-7)
      return false;
  return true;
}

}  // namespace

std::optional<Certificate> congruent_component_swap(const PartitionGraph& g, int m) {
  const auto faces = g.faces();
  for (std::size_t i = 0; i < faces.size(); ++i) {
    if (faces[i].touches_boundary()) continue;
    for (std::size_t j = i + 1; j < faces.size(); ++j) {
      if (faces[j].touches_boundary() || faces[j].region != faces[i].region) continue;
      if (!congruent(signature(g, faces[i]), signature(g, faces[j]))) continue;
      std::vector<DiscretizedVariation> parts{component_indicator(g, faces[i], m), component_indicator(g, faces[j], m)};
      Eigen::VectorXd c(2);
      c << 1.0, -1.0;
      DiscretizedVariation u = combine(parts, c);
      return make_certificate(g, "congruent-component-swap", std::move(u), m);
    }
  }
  return std::nullopt;
}

StabilityReport analyze_stability(const PartitionGraph& g, int m, int modes) {
  StabilityReport rep;
  const IndexFormMatrix q = assemble_index_form(g, m);
  const ConstrainedSpectrum spec = constrained_min_eigenvalue(q, modes);
  rep.modes = spec.eigenvalues;
  rep.lambda_min = spec.eigenvalues.empty() ? 0.0 : spec.eigenvalues.front();
  rep.constraint_rank = spec.constraint_rank;

  const auto bound = largest_pressure_component_bound(g, m);
  if (bound.certificate) rep.certificates.push_back(*bound.certificate);
  if (auto c = two_boundary_three_components(g, m)) rep.certificates.push_back(std::move(*c));
  if (auto c = congruent_component_swap(g, m)) rep.certificates.push_back(std::move(*c));

  rep.rotation_nodal = nodal_region_count(g, rotation_jacobi(g, m));
  const bool nodal_instability = g.regions.size() == 3 && rep.rotation_nodal.clean() && rep.rotation_nodal.count >= 4;
  bool certified = false;
  for (const auto& c : rep.certificates)
    if (c.Q_value < -1e-9 && c.area_residual < 1e-6) certified = true;
  if (rep.lambda_min < -1e-6 || certified || nodal_instability)
    rep.verdict = "unstable";
  else if (g.regions.size() > 3 && rep.rotation_nodal.clean() && rep.rotation_nodal.count >= 4)
    rep.verdict = "inconclusive";
  else
    rep.verdict = "stable";
  return rep;
}

}  // namespace diskpart
