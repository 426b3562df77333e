#include "diskpart/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "diskpart/standard.hpp"

namespace diskpart {

namespace {

const double kSqrt3 = std::sqrt(3.0);

struct EdgeEnd {
  int edge;
  bool at_start;
};

std::vector<std::vector<EdgeEnd>> incidence(const PartitionGraph& g) {
  std::vector<std::vector<EdgeEnd>> inc(g.vertices.size());
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    inc[g.edges[e].v0].push_back({e, true});
    inc[g.edges[e].v1].push_back({e, false});
  }
  return inc;
}

void check_shape(const PartitionGraph& g, const DiscretizedVariation& u) {
  if (u.m < 2 || u.m % 2 != 0) throw ShapeError("node count m must be even and positive");
  if (u.u.size() != g.edges.size()) throw ShapeError("one sample vector per edge required");
  for (const auto& v : u.u)
    if (v.size() != u.m + 1) throw ShapeError("each edge needs m+1 samples");
}

// Composite Simpson weights for m panels over an edge of length L.
Eigen::VectorXd simpson_weights(int m, double L) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(m + 1);
  const double H = L / m;
  for (int k = 0; k < m; k += 2) {
    w(k) += H / 3.0;
    w(k + 1) += 4.0 * H / 3.0;
    w(k + 2) += H / 3.0;
  }
  return w;
}

Point end_normal(const ArcEdge& a, bool at_start) { return normal_at(a, at_start ? 0.0 : 1.0); }
// Inner conormal: unit tangent pointing into the edge.
Point end_conormal(const ArcEdge& a, bool at_start) { return at_start ? tangent_at(a, 0.0) : -tangent_at(a, 1.0); }

}  // namespace

DiscretizedVariation zero_variation(const PartitionGraph& g, int m) {
  DiscretizedVariation u;
  u.m = m;
  u.u.assign(g.edges.size(), Eigen::VectorXd::Zero(m + 1));
  u.vertex_velocity.assign(g.vertices.size(), std::nullopt);
  return u;
}

DiscretizedVariation sample_variation(const PartitionGraph& g, const EdgeFunction& f, int m) {
  DiscretizedVariation u = zero_variation(g, m);
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e)
    for (int k = 0; k <= m; ++k) u.u[e](k) = f(e, static_cast<double>(k) / m);
  return u;
}

DiscretizedVariation sample_field(const PartitionGraph& g, const std::function<Point(Point)>& X, int m) {
  DiscretizedVariation u = zero_variation(g, m);
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    const ArcEdge& a = g.edges[e].arc;
    for (int k = 0; k <= m; ++k) {
      const double s = static_cast<double>(k) / m;
      u.u[e](k) = dot(X(point_at(a, s)), normal_at(a, s));
    }
  }
  for (std::size_t v = 0; v < g.vertices.size(); ++v) u.vertex_velocity[v] = X(g.vertices[v].pos);
  return u;
}

double admissibility_residual(const PartitionGraph& g, const DiscretizedVariation& u) {
  check_shape(g, u);
  const auto inc = incidence(g);
  double worst = 0.0;
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    if (g.vertices[v].kind != VertexKind::Interior) continue;
    double sum = 0.0;
    for (const auto& end : inc[v]) sum += (end.at_start ? 1.0 : -1.0) * u.u[end.edge](end.at_start ? 0 : u.m);
    worst = std::max(worst, std::abs(sum));
  }
  return worst;
}

Point vertex_velocity(const PartitionGraph& g, const DiscretizedVariation& u, int v) {
  if (v < static_cast<int>(u.vertex_velocity.size()) && u.vertex_velocity[v]) return *u.vertex_velocity[v];
  const auto inc = incidence(g);
  if (g.vertices[v].kind == VertexKind::Boundary) {
    const EdgeEnd end = inc[v].front();
    const Point tau = perp(g.vertices[v].pos);
    const Point N = end_normal(g.edges[end.edge].arc, end.at_start);
    const double val = u.u[end.edge](end.at_start ? 0 : u.m);
    const double c = dot(tau, N);
    if (std::abs(c) < 1e-12) return {0.0, 0.0};
    return tau * (val / c);
  }
  Eigen::Matrix2d AtA = Eigen::Matrix2d::Zero();
  Eigen::Vector2d Atb = Eigen::Vector2d::Zero();
  for (const auto& end : inc[v]) {
    const Point N = end_normal(g.edges[end.edge].arc, end.at_start);
    const Eigen::Vector2d n(N.x, N.y);
    AtA += n * n.transpose();
    Atb += n * u.u[end.edge](end.at_start ? 0 : u.m);
  }
  const Eigen::Vector2d V = AtA.ldlt().solve(Atb);
  return {V(0), V(1)};
}

double first_variation_length(const PartitionGraph& g, const DiscretizedVariation& u) {
  check_shape(g, u);
  double total = 0.0;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const ArcEdge& a = g.edges[e].arc;
    total -= a.h * simpson_weights(u.m, arc_length(a)).dot(u.u[e]);
  }
  std::vector<Point> V(g.vertices.size());
  for (std::size_t v = 0; v < g.vertices.size(); ++v) V[v] = vertex_velocity(g, u, static_cast<int>(v));
  for (const auto& e : g.edges) {
    total -= dot(V[e.v0], end_conormal(e.arc, true));
    total -= dot(V[e.v1], end_conormal(e.arc, false));
  }
  return total;
}

std::vector<double> area_derivatives(const PartitionGraph& g, const DiscretizedVariation& u) {
  check_shape(g, u);
  std::vector<double> dA(g.regions.size(), 0.0);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const double I = simpson_weights(u.m, arc_length(g.edges[e].arc)).dot(u.u[e]);
    dA[g.edges[e].left] -= I;
    dA[g.edges[e].right] += I;
  }
  return dA;
}

Eigen::VectorXd IndexFormMatrix::flatten(const DiscretizedVariation& u) const {
  if (u.m != m || static_cast<int>(u.u.size()) != edge_count) throw ShapeError("variation does not match the index form");
  Eigen::VectorXd x(edge_count * (m + 1));
  for (int e = 0; e < edge_count; ++e) x.segment(e * (m + 1), m + 1) = u.u[e];
  return x;
}

DiscretizedVariation IndexFormMatrix::unflatten(const Eigen::VectorXd& x) const {
  DiscretizedVariation u;
  u.m = m;
  for (int e = 0; e < edge_count; ++e) u.u.push_back(x.segment(e * (m + 1), m + 1));
  u.vertex_velocity.assign(vertex_column.size(), std::nullopt);
  return u;
}

double vertex_coefficient(const PartitionGraph& g, int e, int v) {
  const auto& E = g.edges[e];
  const int i = E.left, j = E.right;
  std::vector<int> others;
  for (int f = 0; f < static_cast<int>(g.edges.size()); ++f)
    if (f != e && (g.edges[f].v0 == v || g.edges[f].v1 == v)) others.push_back(f);
  int k = -1;
  for (int f : others)
    for (int r : {g.edges[f].left, g.edges[f].right})
      if (r != i && r != j) k = r;
  if (k < 0) throw TopologyError("vertex does not separate three regions");
  auto oriented = [&](int a, int b) {
    for (int f : others) {
      if (g.edges[f].left == a && g.edges[f].right == b) return g.edges[f].arc.h;
      if (g.edges[f].left == b && g.edges[f].right == a) return -g.edges[f].arc.h;
    }
    throw TopologyError("missing edge at vertex");
  };
  return (oriented(k, i) + oriented(k, j)) / kSqrt3;
}

IndexFormMatrix assemble_index_form(const PartitionGraph& g, int m, double stationary_tol) {
  if (m < 2 || m % 2 != 0) throw ShapeError("node count m must be even and positive");
  const StationarityReport rep = check_stationary(g);
  if (!rep.stationary(stationary_tol)) throw PreconditionError("graph is not stationary");

  IndexFormMatrix q;
  q.m = m;
  q.edge_count = static_cast<int>(g.edges.size());
  const int N = q.edge_count * (m + 1);
  const int R = static_cast<int>(g.regions.size());
  q.Q = Eigen::MatrixXd::Zero(N, N);
  q.M = Eigen::MatrixXd::Zero(N, N);
  q.A = Eigen::MatrixXd::Zero(R, N);

  Eigen::Matrix3d K, Ms;
  K << 7, -8, 1, -8, 16, -8, 1, -8, 7;
  Ms << 4, 2, -1, 2, 16, 2, -1, 2, 4;
  for (int e = 0; e < q.edge_count; ++e) {
    const auto& E = g.edges[e];
    const double L = arc_length(E.arc);
    const double ell = 2.0 * L / m;  // element length
    const double h2 = E.arc.h * E.arc.h;
    for (int k = 0; k < m; k += 2) {
      const int base = q.node_index(e, k);
      q.M.block<3, 3>(base, base) += Ms * (ell / 30.0);
      q.Q.block<3, 3>(base, base) += K / (3.0 * ell) - Ms * (h2 * ell / 30.0);
    }
    const Eigen::VectorXd w = simpson_weights(m, L);
    q.A.row(E.left).segment(q.node_index(e, 0), m + 1) -= w.transpose();
    q.A.row(E.right).segment(q.node_index(e, 0), m + 1) += w.transpose();
    for (bool start : {true, false}) {
      const int v = start ? E.v0 : E.v1;
      const int idx = q.node_index(e, start ? 0 : m);
      if (g.vertices[v].kind == VertexKind::Interior)
        q.Q(idx, idx) += vertex_coefficient(g, e, v);
      else
        q.Q(idx, idx) -= 1.0;  // curvature of the unit circle
    }
  }

  // Admissible coordinates.
  const auto inc = incidence(g);
  int cols = 0;
  q.vertex_column.assign(g.vertices.size(), -1);
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    q.vertex_column[v] = cols;
    q.vertex_dofs.push_back(g.vertices[v].kind == VertexKind::Interior ? 2 : 1);
    cols += q.vertex_dofs.back();
  }
  const int first_node_col = cols;
  cols += q.edge_count * (m - 1);
  q.P = Eigen::MatrixXd::Zero(N, cols);
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    const int c = q.vertex_column[v];
    for (const auto& end : inc[v]) {
      const int idx = q.node_index(end.edge, end.at_start ? 0 : m);
      if (g.vertices[v].kind == VertexKind::Interior) {
        const Point Nn = end_normal(g.edges[end.edge].arc, end.at_start);
        q.P(idx, c) = Nn.x;
        q.P(idx, c + 1) = Nn.y;
      } else {
        q.P(idx, c) = 1.0;
      }
    }
  }
  for (int e = 0; e < q.edge_count; ++e)
    for (int k = 1; k < m; ++k) q.P(q.node_index(e, k), first_node_col + e * (m - 1) + (k - 1)) = 1.0;
  return q;
}

double quadratic_form(const IndexFormMatrix& q, const DiscretizedVariation& u) {
  const Eigen::VectorXd x = q.flatten(u);
  return x.dot(q.Q * x);
}

ConstrainedSpectrum constrained_min_eigenvalue(const IndexFormMatrix& q, int k) {
  const Eigen::MatrixXd Qr = q.P.transpose() * q.Q * q.P;
  const Eigen::MatrixXd Mr = q.P.transpose() * q.M * q.P;
  const Eigen::MatrixXd Ar = q.A * q.P;

  ConstrainedSpectrum out;
  out.constraint_rows = static_cast<int>(Ar.rows());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Ar, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = 1e-10 * std::max(1.0, sv.size() ? sv(0) : 0.0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  out.constraint_rank = rank;
  const Eigen::MatrixXd Z = svd.matrixV().rightCols(Ar.cols() - rank);

  const Eigen::MatrixXd Qz = Z.transpose() * Qr * Z;
  const Eigen::MatrixXd Mz = Z.transpose() * Mr * Z;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (Qz + Qz.transpose()),
                                                               0.5 * (Mz + Mz.transpose()));
  if (es.info() != Eigen::Success) throw std::runtime_error("generalized eigensolver failed");
  const int take = std::min<int>(k, static_cast<int>(es.eigenvalues().size()));
  for (int i = 0; i < take; ++i) {
    out.eigenvalues.push_back(es.eigenvalues()(i));
    const Eigen::VectorXd red = Z * es.eigenvectors().col(i);
    DiscretizedVariation mode = q.unflatten(q.P * red);
    for (std::size_t v = 0; v < q.vertex_column.size(); ++v) {
      const int c = q.vertex_column[v];
      if (q.vertex_dofs[v] == 2) mode.vertex_velocity[v] = Point{red(c), red(c + 1)};
    }
    out.modes.push_back(std::move(mode));
  }
  return out;
}

DiscretizedVariation rotation_jacobi(const PartitionGraph& g, int m) {
  return sample_field(g, [](Point p) { return Point{-p.y, p.x}; }, m);
}

double jacobi_residual(const PartitionGraph& g, const DiscretizedVariation& u) {
  check_shape(g, u);
  if (u.m < 4) throw ShapeError("need at least four panels");
  double worst = 0.0;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const double H = arc_length(g.edges[e].arc) / u.m;
    const double h2 = g.edges[e].arc.h * g.edges[e].arc.h;
    const auto& x = u.u[e];
    for (int k = 2; k <= u.m - 2; ++k) {
      const double d2 = (-x(k - 2) + 16 * x(k - 1) - 30 * x(k) + 16 * x(k + 1) - x(k + 2)) / (12 * H * H);
      worst = std::max(worst, std::abs(d2 + h2 * x(k)));
    }
  }
  return worst;
}

NodalReport nodal_region_count(const PartitionGraph& g, const DiscretizedVariation& u, double zero_tol) {
  check_shape(g, u);
  NodalReport rep;
  std::vector<int> parent;
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  const int E = static_cast<int>(g.edges.size());
  std::vector<int> start_piece(E, -1), end_piece(E, -1);
  for (int e = 0; e < E; ++e) {
    int cur = -1, sign = 0;
    for (int k = 0; k <= u.m; ++k) {
      const double val = u.u[e](k);
      if (std::abs(val) < zero_tol) {
        rep.zero_nodes.push_back({e, k});
        cur = -1;
        continue;
      }
      const int s = val > 0 ? 1 : -1;
      if (cur < 0 || s != sign) {
        cur = static_cast<int>(parent.size());
        parent.push_back(cur);
        sign = s;
      }
      if (k == 0) start_piece[e] = cur;
      if (k == u.m) end_piece[e] = cur;
    }
  }
  if (parent.empty()) {
    rep.identically_zero = true;
    return rep;
  }
  const auto inc = incidence(g);
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    std::vector<int> pieces;
    bool zero = false;
    for (const auto& end : inc[v]) {
      const int p = end.at_start ? start_piece[end.edge] : end_piece[end.edge];
      if (p < 0)
        zero = true;
      else
        pieces.push_back(p);
    }
    if (zero) rep.zero_vertices.push_back(static_cast<int>(v));
    for (std::size_t i = 1; i < pieces.size(); ++i) parent[find(pieces[i])] = find(pieces[0]);
  }
  for (int p = 0; p < static_cast<int>(parent.size()); ++p)
    if (find(p) == p) ++rep.count;
  return rep;
}

std::vector<double> fitted_pressures(const PartitionGraph& g) {
  const int R = static_cast<int>(g.regions.size());
  const int E = static_cast<int>(g.edges.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(E + 1, R);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(E + 1);
  for (int e = 0; e < E; ++e) {
    A(e, g.edges[e].left) += 1.0;
    A(e, g.edges[e].right) -= 1.0;
    b(e) = g.edges[e].arc.h;
  }
  A.row(E).setOnes();
  const Eigen::VectorXd p = A.colPivHouseholderQr().solve(b);
  return {p.data(), p.data() + R};
}

}  // namespace diskpart
