#include "diskpart/evolver.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace diskpart {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// Boundary junctions carry one angle, every other node two coordinates. With
// normal_only, free polyline nodes move along their current normal instead.
struct DofMap {
  enum class Kind { Angle, Point, Normal };
  std::vector<int> offset;
  std::vector<Kind> kind;
  std::vector<std::pair<int, int>> neighbors;  // chain neighbours of free polyline nodes
  std::vector<Point> base, normal;
  int size = 0;

  explicit DofMap(const DiscreteGraph& g, bool normal_only = false) {
    const int N = static_cast<int>(g.nodes.size());
    offset.resize(N);
    kind.assign(N, Kind::Point);
    neighbors.assign(N, {-1, -1});
    base = g.nodes;
    normal.assign(N, Point{});
    for (const auto& e : g.edges)
      for (std::size_t k = 1; k + 1 < e.chain.size(); ++k) {
        const int v = e.chain[k];
        neighbors[v] = {e.chain[k - 1], e.chain[k + 1]};
        normal[v] = perp(normalized(g.nodes[e.chain[k + 1]] - g.nodes[e.chain[k - 1]]));
        if (normal_only) kind[v] = Kind::Normal;
      }
    for (int k = 0; k < N; ++k) {
      if (g.is_boundary(k)) kind[k] = Kind::Angle;
      offset[k] = size;
      size += kind[k] == Kind::Point ? 2 : 1;
    }
  }

  bool is_angle(std::size_t k) const { return kind[k] == Kind::Angle; }

  // Max-abs residual with free polyline nodes measured along their normal only;
  // sliding a node along its polyline is a reparametrization.
  double residual_norm(const DiscreteGraph& g, const Eigen::VectorXd& r) const {
    double m = 0.0;
    for (std::size_t k = 0; k < offset.size(); ++k) {
      const int o = offset[k];
      if (kind[k] != Kind::Point) {
        m = std::max(m, std::abs(r(o)));
      } else if (neighbors[k].first >= 0) {
        const Point n = perp(normalized(g.nodes[neighbors[k].second] - g.nodes[neighbors[k].first]));
        m = std::max(m, std::abs(r(o) * n.x + r(o + 1) * n.y));
      } else {
        m = std::max({m, std::abs(r(o)), std::abs(r(o + 1))});
      }
    }
    return m;
  }

  Eigen::VectorXd get(const DiscreteGraph& g) const {
    Eigen::VectorXd x(size);
    for (std::size_t k = 0; k < offset.size(); ++k) {
      const Point p = g.nodes[k];
      switch (kind[k]) {
        case Kind::Angle: x(offset[k]) = std::atan2(p.y, p.x); break;
        case Kind::Normal: x(offset[k]) = dot(p - base[k], normal[k]); break;
        case Kind::Point:
          x(offset[k]) = p.x;
          x(offset[k] + 1) = p.y;
          break;
      }
    }
    return x;
  }

  void set(DiscreteGraph& g, const Eigen::VectorXd& x) const {
    for (std::size_t k = 0; k < offset.size(); ++k) switch (kind[k]) {
        case Kind::Angle: g.nodes[k] = unit_vector(x(offset[k])); break;
        case Kind::Normal: g.nodes[k] = base[k] + normal[k] * x(offset[k]); break;
        case Kind::Point: g.nodes[k] = Point{x(offset[k]), x(offset[k] + 1)}; break;
      }
  }

  // Point-space (2N) to dof-space Jacobian.
  Eigen::SparseMatrix<double> jacobian(const DiscreteGraph& g) const {
    Triplets t;
    for (std::size_t k = 0; k < offset.size(); ++k) {
      const int r = 2 * static_cast<int>(k);
      switch (kind[k]) {
        case Kind::Angle: {
          const Point d = perp(g.nodes[k]);
          t.emplace_back(r, offset[k], d.x);
          t.emplace_back(r + 1, offset[k], d.y);
          break;
        }
        case Kind::Normal:
          t.emplace_back(r, offset[k], normal[k].x);
          t.emplace_back(r + 1, offset[k], normal[k].y);
          break;
        case Kind::Point:
          t.emplace_back(r, offset[k], 1.0);
          t.emplace_back(r + 1, offset[k] + 1, 1.0);
          break;
      }
    }
    Eigen::SparseMatrix<double> T(2 * static_cast<int>(offset.size()), size);
    T.setFromTriplets(t.begin(), t.end());
    return T;
  }

  // Second-order term of the angle parametrization: d2p/dtheta2 = -p.
  void curvature_terms(const DiscreteGraph& g, const Eigen::VectorXd& grad_points, Triplets& t) const {
    for (std::size_t k = 0; k < offset.size(); ++k)
      if (is_angle(k)) {
        const Point p = g.nodes[k];
        t.emplace_back(offset[k], offset[k], -(grad_points(2 * k) * p.x + grad_points(2 * k + 1) * p.y));
      }
  }

  double max_node_step(const Eigen::VectorXd& d) const {
    double m = 0.0;
    for (std::size_t k = 0; k < offset.size(); ++k)
      m = std::max(m, kind[k] != Kind::Point ? std::abs(d(offset[k])) : std::hypot(d(offset[k]), d(offset[k] + 1)));
    return m;
  }
};

struct Derivatives {
  double length = 0.0;
  Eigen::VectorXd grad_length;   // point space
  std::vector<double> area;
  Eigen::MatrixXd grad_area;     // regions x point space (shoelace part only)
  Eigen::MatrixXd sweep_dof;     // regions x dofs (boundary sweep part)
};

void add_block(Triplets& t, int a, int b, double xx, double xy, double yx, double yy) {
  t.emplace_back(2 * a, 2 * b, xx);
  t.emplace_back(2 * a, 2 * b + 1, xy);
  t.emplace_back(2 * a + 1, 2 * b, yx);
  t.emplace_back(2 * a + 1, 2 * b + 1, yy);
}

Derivatives derivatives(const DiscreteGraph& g, const DofMap& dofs) {
  const int N = static_cast<int>(g.nodes.size()), R = g.region_count();
  Derivatives d;
  d.grad_length = Eigen::VectorXd::Zero(2 * N);
  d.grad_area = Eigen::MatrixXd::Zero(R, 2 * N);
  d.sweep_dof = Eigen::MatrixXd::Zero(R, dofs.size);
  d.area = g.region_areas();
  for (const auto& e : g.edges) {
    for (std::size_t k = 1; k < e.chain.size(); ++k) {
      const int a = e.chain[k - 1], b = e.chain[k];
      const Point pa = g.nodes[a], pb = g.nodes[b];
      const double l = distance(pa, pb);
      d.length += l;
      const Point t = (pb - pa) / l;
      d.grad_length(2 * b) += t.x;
      d.grad_length(2 * b + 1) += t.y;
      d.grad_length(2 * a) -= t.x;
      d.grad_length(2 * a + 1) -= t.y;
      // 0.5 * cross(pa, pb)
      for (int side : {0, 1}) {
        const int r = side == 0 ? e.left : e.right;
        const double s = side == 0 ? 0.5 : -0.5;
        d.grad_area(r, 2 * a) += s * pb.y;
        d.grad_area(r, 2 * a + 1) -= s * pb.x;
        d.grad_area(r, 2 * b) -= s * pa.y;
        d.grad_area(r, 2 * b + 1) += s * pa.x;
      }
    }
  }
  for (const auto& f : g.faces)
    for (const auto& s : f.steps)
      if (s.kind == FaceStep::Kind::Boundary && s.from_vertex >= 0 && s.from_vertex != s.to_vertex) {
        d.sweep_dof(f.region, dofs.offset[s.to_vertex]) += 0.5;
        d.sweep_dof(f.region, dofs.offset[s.from_vertex]) -= 0.5;
      }
  return d;
}

// Constraint rows (all regions but the last) in dof space.
Eigen::MatrixXd constraint_jacobian(const Derivatives& d, const Eigen::SparseMatrix<double>& T) {
  const int m = std::max(0, static_cast<int>(d.area.size()) - 1);
  Eigen::MatrixXd full = d.grad_area * T + d.sweep_dof;
  return full.topRows(m);
}

Eigen::VectorXd least_squares_multipliers(const Eigen::MatrixXd& J, const Eigen::VectorXd& g) {
  if (J.rows() == 0) return Eigen::VectorXd();
  return (J * J.transpose()).ldlt().solve(J * g);
}

std::vector<double> zero_sum(const Eigen::VectorXd& lambda, int R) {
  std::vector<double> p(R, 0.0);
  for (int i = 0; i < lambda.size(); ++i) p[i] = lambda(i);
  double mean = 0.0;
  for (double x : p) mean += x;
  mean /= R;
  for (double& x : p) x -= mean;
  return p;
}

Eigen::SparseMatrix<double> length_hessian(const DiscreteGraph& g, double tangential) {
  const int N = static_cast<int>(g.nodes.size());
  Triplets t;
  for (const auto& e : g.edges)
    for (std::size_t k = 1; k < e.chain.size(); ++k) {
      const int a = e.chain[k - 1], b = e.chain[k];
      const Point pa = g.nodes[a], pb = g.nodes[b];
      const double l = distance(pa, pb);
      const Point u = (pb - pa) / l;
      const double xx = (1 - (1 - tangential) * u.x * u.x) / l, yy = (1 - (1 - tangential) * u.y * u.y) / l;
      const double xy = -(1 - tangential) * u.x * u.y / l;
      add_block(t, a, a, xx, xy, xy, yy);
      add_block(t, b, b, xx, xy, xy, yy);
      add_block(t, a, b, -xx, -xy, -xy, -yy);
      add_block(t, b, a, -xx, -xy, -xy, -yy);
    }
  Eigen::SparseMatrix<double> H(2 * N, 2 * N);
  H.setFromTriplets(t.begin(), t.end());
  return H;
}

// Hessian of sum_r w_r A_r in point space (the sweep part is linear in the angles).
Eigen::SparseMatrix<double> area_hessian(const DiscreteGraph& g, const std::vector<double>& w) {
  const int N = static_cast<int>(g.nodes.size());
  Triplets t;
  for (const auto& e : g.edges) {
    const double s = 0.5 * (w[e.left] - w[e.right]);
    if (s == 0.0) continue;
    for (std::size_t k = 1; k < e.chain.size(); ++k) {
      const int a = e.chain[k - 1], b = e.chain[k];
      add_block(t, a, b, 0.0, s, -s, 0.0);
      add_block(t, b, a, 0.0, -s, s, 0.0);
    }
  }
  Eigen::SparseMatrix<double> H(2 * N, 2 * N);
  H.setFromTriplets(t.begin(), t.end());
  return H;
}

double max_area_error(const DiscreteGraph& g) {
  const auto A = g.region_areas();
  double m = 0.0;
  for (int r = 0; r < g.region_count(); ++r) m = std::max(m, std::abs(A[r] - g.target_area[r]));
  return m;
}

// Shape sanity for trial steps: no vanished segments and boundary pieces on their branch.
bool shape_ok(const DiscreteGraph& g) {
  for (const auto& e : g.edges)
    for (std::size_t k = 1; k < e.chain.size(); ++k)
      if (distance(g.nodes[e.chain[k - 1]], g.nodes[e.chain[k]]) < 1e-9) return false;
  for (const auto& f : g.faces)
    for (const auto& s : f.steps)
      if (s.kind == FaceStep::Kind::Boundary && s.from_vertex >= 0 && s.from_vertex != s.to_vertex) {
        const double w = g.boundary_sweep(s);
        if (w <= 0.0 || w >= 2 * kPi) return false;
      }
  // Free nodes may overshoot the circle slightly in transit; grazing edges are caught as events.
  return g.embedded(1e-3);
}

Eigen::VectorXd area_residual(const DiscreteGraph& g, int m) {
  const auto A = g.region_areas();
  Eigen::VectorXd r(m);
  for (int i = 0; i < m; ++i) r(i) = g.target_area[i] - A[i];
  return r;
}

// Smallest step in the edge-Laplacian metric with J dx = r; the Euclidean
// min-norm step kinks polylines next to junctions.
Eigen::VectorXd smooth_area_step(const DiscreteGraph& g, const DofMap& dofs, const Eigen::MatrixXd& J,
                                 const Eigen::VectorXd& r) {
  const int D = dofs.size, m = static_cast<int>(J.rows());
  const auto T = dofs.jacobian(g);
  const Eigen::SparseMatrix<double> W = T.transpose() * length_hessian(g, 1.0) * T;
  Triplets k;
  for (int c = 0; c < W.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(W, c); it; ++it) k.emplace_back(it.row(), it.col(), it.value());
  for (int i = 0; i < D; ++i) k.emplace_back(i, i, 1e-9);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < D; ++j)
      if (J(i, j) != 0.0) {
        k.emplace_back(D + i, j, J(i, j));
        k.emplace_back(j, D + i, J(i, j));
      }
  Eigen::SparseMatrix<double> K(D + m, D + m);
  K.setFromTriplets(k.begin(), k.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(K);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(D + m);
  b.tail(m) = r;
  if (lu.info() == Eigen::Success) {
    const Eigen::VectorXd sol = lu.solve(b);
    if (lu.info() == Eigen::Success && sol.allFinite()) return sol.head(D);
  }
  return J.transpose() * (J * J.transpose()).ldlt().solve(r);
}

}  // namespace

void restore_areas(DiscreteGraph& g, double tol, int max_iters) {
  const int m = g.region_count() - 1;
  if (m <= 0) return;
  const DofMap dofs(g);
  Eigen::VectorXd x = dofs.get(g);
  Eigen::VectorXd r = area_residual(g, m);
  for (int it = 0; it < max_iters; ++it) {
    if (r.cwiseAbs().maxCoeff() < tol) return;
    const Derivatives d = derivatives(g, dofs);
    const Eigen::MatrixXd J = constraint_jacobian(d, dofs.jacobian(g));
    const Eigen::VectorXd dx = smooth_area_step(g, dofs, J, r);
    double alpha = 1.0;
    bool accepted = false;
    for (int k = 0; k < 30 && !accepted; ++k, alpha *= 0.5) {
      dofs.set(g, x + alpha * dx);
      if (!shape_ok(g)) continue;
      const Eigen::VectorXd rn = area_residual(g, m);
      if (rn.norm() < r.norm() || rn.cwiseAbs().maxCoeff() < tol) {
        x += alpha * dx;
        r = rn;
        accepted = true;
      }
    }
    if (!accepted) {
      dofs.set(g, x);
      throw AreaConstraintError("area restoration stalled");
    }
  }
  if (r.cwiseAbs().maxCoeff() >= tol) throw AreaConstraintError("area restoration did not converge");
}

double constrained_gradient(const DiscreteGraph& g, std::vector<double>* multipliers) {
  const DofMap dofs(g);
  const Derivatives d = derivatives(g, dofs);
  const auto T = dofs.jacobian(g);
  const Eigen::VectorXd grad = T.transpose() * d.grad_length;
  const Eigen::MatrixXd J = constraint_jacobian(d, T);
  const Eigen::VectorXd lambda = least_squares_multipliers(J, grad);
  const Eigen::VectorXd r = J.rows() ? Eigen::VectorXd(grad - J.transpose() * lambda) : grad;
  if (multipliers) *multipliers = zero_sum(lambda, g.region_count());
  return dofs.residual_norm(g, r);
}

namespace {

// L(g) - L(old) summed per segment without cancellation.
double length_change(const DiscreteGraph& g, const std::vector<Point>& old) {
  double dL = 0.0;
  for (const auto& e : g.edges)
    for (std::size_t k = 1; k < e.chain.size(); ++k) {
      const Point a = g.nodes[e.chain[k]] - g.nodes[e.chain[k - 1]];
      const Point b = old[e.chain[k]] - old[e.chain[k - 1]];
      const double s = norm(a) + norm(b);
      if (s > 0.0) dL += dot(a - b, a + b) / s;
    }
  return dL;
}

}  // namespace

// Edge whose nodes come within min_edge_length of the circle, or approach it
// at a shallow angle from a boundary foot; -1 if none.
int grazing_edge(const DiscreteGraph& g, const RelaxOptions& opts) {
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto& c = g.edges[e].chain;
    const int n = static_cast<int>(c.size());
    std::vector<double> s(n, std::numeric_limits<double>::infinity());
    if (g.is_boundary(c.front()))
      for (int k = 1; k < n; ++k) s[k] = std::min(s[k], (k == 1 ? 0.0 : s[k - 1]) + distance(g.nodes[c[k - 1]], g.nodes[c[k]]));
    if (g.is_boundary(c.back())) {
      double acc = 0.0;
      for (int k = n - 2; k >= 0; --k) s[k] = std::min(s[k], acc += distance(g.nodes[c[k + 1]], g.nodes[c[k]]));
    }
    // The few nodes next to a foot may kink transiently.
    const int skip_front = g.is_boundary(c.front()) ? 4 : 0, skip_back = g.is_boundary(c.back()) ? 4 : 0;
    for (int k = skip_front; k < n - skip_back; ++k) {
      if (1.0 - norm(g.nodes[c[k]]) < std::min(opts.graze_cosine * s[k], opts.min_edge_length)) return static_cast<int>(e);
    }
  }
  return -1;
}

RelaxResult relax(DiscreteGraph& g, const RelaxOptions& opts) {
  RelaxResult res;
  const int R = g.region_count(), m = R - 1;
  restore_areas(g, opts.area_tol);

  for (int it = 0;; ++it) {
    // Near convergence only the normal position of polyline nodes is optimized.
    const DofMap dofs(g, it > 0 && res.gradient_norm < 1e-3);
    const Eigen::VectorXd x = dofs.get(g);
    const int D = dofs.size;
    const Derivatives d = derivatives(g, dofs);
    const auto T = dofs.jacobian(g);
    const Eigen::VectorXd grad = T.transpose() * d.grad_length;
    const Eigen::MatrixXd J = constraint_jacobian(d, T);
    const Eigen::VectorXd lambda = least_squares_multipliers(J, grad);
    const Eigen::VectorXd r = m > 0 ? Eigen::VectorXd(grad - J.transpose() * lambda) : grad;
    res.gradient_norm = dofs.residual_norm(g, r);
    res.multipliers = zero_sum(lambda, R);
    res.perimeter = d.length;
    res.iterations = it;
    if (res.gradient_norm < opts.tol) {
      res.converged = true;
      break;
    }
    if (it >= opts.max_iters) break;

    // Newton direction on the Lagrangian; fall back to the length metric if it is not a descent direction.
    std::vector<double> w(R, 0.0);
    for (int i = 0; i < m; ++i) w[i] = lambda(i);
    Eigen::VectorXd gp = d.grad_length;
    for (int i = 0; i < m; ++i) gp -= lambda(i) * d.grad_area.row(i).transpose();
    const Eigen::VectorXd rhs_area = area_residual(g, m);

    auto solve_kkt = [&](const Eigen::SparseMatrix<double>& Hp, const Eigen::VectorXd& grad_points,
                         double shift) -> std::optional<Eigen::VectorXd> {
      Eigen::SparseMatrix<double> W = T.transpose() * Hp * T;
      Triplets t;
      dofs.curvature_terms(g, grad_points, t);
      for (int i = 0; i < D; ++i) t.emplace_back(i, i, shift);
      Eigen::SparseMatrix<double> C(D, D);
      C.setFromTriplets(t.begin(), t.end());
      W += C;
      Triplets k;
      for (int c = 0; c < W.outerSize(); ++c)
        for (Eigen::SparseMatrix<double>::InnerIterator itw(W, c); itw; ++itw) k.emplace_back(itw.row(), itw.col(), itw.value());
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < D; ++j)
          if (J(i, j) != 0.0) {
            k.emplace_back(D + i, j, J(i, j));
            k.emplace_back(j, D + i, J(i, j));
          }
      Eigen::SparseMatrix<double> K(D + m, D + m);
      K.setFromTriplets(k.begin(), k.end());
      Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
      lu.compute(K);
      if (lu.info() != Eigen::Success) return std::nullopt;
      Eigen::VectorXd b(D + m);
      b.head(D) = -grad;
      if (m > 0) b.tail(m) = rhs_area;
      Eigen::VectorXd sol = lu.solve(b);
      if (lu.info() != Eigen::Success || !sol.allFinite()) return std::nullopt;
      return Eigen::VectorXd(sol.head(D));
    };

    const Eigen::SparseMatrix<double> HL = length_hessian(g, std::clamp(res.gradient_norm, 1e-6, 1.0));
    std::vector<Eigen::VectorXd> dirs;
    if (auto n = solve_kkt(HL - area_hessian(g, w), gp, 1e-10); n && n->dot(r) < 0.0) dirs.push_back(*n);
    if (auto p = solve_kkt(HL, Eigen::VectorXd::Zero(2 * g.nodes.size()), 1e-6); p && p->dot(r) < 0.0)
      dirs.push_back(*p);
    dirs.push_back(-r);

    // Backtracking along each candidate; a step that needed heavy backtracking defers to the next candidate.
    struct Trial {
      double dL;
      std::vector<Point> nodes;
    };
    const std::vector<Point> old_nodes = g.nodes;
    std::optional<Trial> best;
    for (const auto& dir : dirs) {
      const double slope = dir.dot(r);
      const double alpha0 = std::min(1.0, opts.step / std::max(1e-300, dofs.max_node_step(dir)));
      double alpha = alpha0;
      for (int k = 0; k < 50; ++k, alpha *= 0.5) {
        dofs.set(g, x + alpha * dir);
        if (!shape_ok(g)) continue;
        try {
          restore_areas(g, opts.area_tol, 20);
        } catch (const AreaConstraintError&) {
          continue;
        }
        const double dL = length_change(g, old_nodes);
        if (dL <= 1e-4 * alpha * slope) {
          if (!best || dL < best->dL) best = Trial{dL, g.nodes};
          break;
        }
      }
      if (best && alpha >= 1e-2 * alpha0) break;
    }
    if (!best) {
      dofs.set(g, x);
      break;
    }
    g.nodes = best->nodes;
    if (best->dL > 0.0) throw std::logic_error("perimeter increased on an accepted step");
    res.perimeter_history.push_back((res.perimeter_history.empty() ? d.length : res.perimeter_history.back()) + best->dL);
    res.max_area_error = std::max(res.max_area_error, max_area_error(g));
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      const double len = g.edge_length(static_cast<int>(e));
      if (len < opts.min_edge_length) {
        g.multiplier = res.multipliers;
        throw TopologyEventError(static_cast<int>(e), it + 1, g.perimeter(),
                                 "edge " + std::to_string(e) + " collapsed (length " + std::to_string(len) + ")");
      }
    }
    // An edge lying along the circle is squeezing a boundary arc out of existence.
    if (const int e = grazing_edge(g, opts); e >= 0) {
      g.multiplier = res.multipliers;
      throw TopologyEventError(e, it + 1, g.perimeter(), "edge " + std::to_string(e) + " grazes the boundary");
    }
    if (const auto c = g.closest_disjoint_edges(); c.distance < opts.min_edge_length) {
      g.multiplier = res.multipliers;
      throw TopologyEventError(c.edge_a, it + 1, g.perimeter(),
                               "edges " + std::to_string(c.edge_a) + " and " + std::to_string(c.edge_b) +
                                   " touch (distance " + std::to_string(c.distance) + ")");
    }
  }
  g.multiplier = res.multipliers;
  return res;
}

PressureEstimate pressures_estimate(const DiscreteGraph& g, double relaxed_tol) {
  PressureEstimate est;
  const int R = g.region_count(), E = static_cast<int>(g.edges.size());
  est.unrelaxed = constrained_gradient(g) > relaxed_tol;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(E + 1, R);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(E + 1);
  for (int e = 0; e < E; ++e) {
    const auto pts = g.polyline(e);
    const CircleFit fit = fit_circle(pts);
    const double h = fit.straight ? 0.0 : fit.curvature;
    est.edge_curvatures.push_back(h);
    A(e, g.edges[e].left) += 1.0;
    A(e, g.edges[e].right) -= 1.0;
    b(e) = h;
  }
  A.row(E).setOnes();
  const Eigen::VectorXd p = A.colPivHouseholderQr().solve(b);
  est.pressures.assign(p.data(), p.data() + R);
  for (int e = 0; e < E; ++e)
    est.fit_residual = std::max(est.fit_residual, std::abs(p(g.edges[e].left) - p(g.edges[e].right) - b(e)));

  for (int v = 0; v < g.vertex_count(); ++v) {
    if (g.vertex_kinds[v] != VertexKind::Interior) continue;
    std::vector<int> inc;
    for (int e = 0; e < E; ++e)
      if (g.edges[e].chain.front() == v || g.edges[e].chain.back() == v) inc.push_back(e);
    // Curvature of the edge between x and y, toward x.
    auto H = [&](int x, int y) {
      for (int e : inc) {
        if (g.edges[e].left == x && g.edges[e].right == y) return est.edge_curvatures[e];
        if (g.edges[e].left == y && g.edges[e].right == x) return -est.edge_curvatures[e];
      }
      return 0.0;
    };
    std::set<int> regs;
    for (int e : inc) regs.insert({g.edges[e].left, g.edges[e].right});
    if (regs.size() != 3) {
      est.junction_balance.push_back(0.0);
      continue;
    }
    auto itr = regs.begin();
    const int i = *itr++, j = *itr++, k = *itr;
    est.junction_balance.push_back(std::abs(H(i, j) + H(j, k) + H(k, i)));
  }
  return est;
}

namespace {

// Opposite sides tested for a 4-component: the two meeting the circle for boundary components.
std::vector<std::pair<int, int>> opposite_pairs(const Face& f) {
  int bnd = -1;
  for (int i = 0; i < 4; ++i)
    if (f.steps[i].kind == FaceStep::Kind::Boundary) bnd = i;
  if (bnd >= 0) return {{(bnd + 1) % 4, (bnd + 3) % 4}};
  return {{0, 2}, {1, 3}};
}

ArcEdge fitted_arc(const DiscreteGraph& g, int e) {
  const auto pts = g.polyline(e);
  const CircleFit fit = fit_circle(pts);
  return {pts.front(), pts.back(), fit.straight ? 0.0 : fit.curvature};
}

}  // namespace

CocircularReport cocircular_chain_report(const DiscreteGraph& g, double tol) {
  CocircularReport rep;
  std::map<int, int> comp_of_face;
  std::map<int, std::set<int>> link_edges;
  for (int fi = 0; fi < static_cast<int>(g.faces.size()); ++fi) {
    const Face& f = g.faces[fi];
    if (f.side_count() != 4) continue;
    int boundary_steps = 0;
    for (const auto& s : f.steps)
      if (s.kind == FaceStep::Kind::Boundary) ++boundary_steps;
    if (boundary_steps > 1) continue;
    FourComponent c;
    c.face = fi;
    c.region = f.region;
    c.boundary = boundary_steps == 1;
    std::set<int>& links = link_edges[fi];
    for (const auto& st : f.steps)
      if (st.kind == FaceStep::Kind::Edge) links.insert(st.edge);
    for (auto [a, b] : opposite_pairs(f)) {
      const ArcEdge ea = fitted_arc(g, f.steps[a].edge), eb = fitted_arc(g, f.steps[b].edge);
      if (concentric(ea, eb, tol)) {
        c.cocircular = true;
        c.centers = {*center(ea), *center(eb)};
        // Chain neighbours sit across the other pair.
        links.erase(f.steps[a].edge);
        links.erase(f.steps[b].edge);
        break;
      }
    }
    comp_of_face[fi] = static_cast<int>(rep.components.size());
    rep.components.push_back(c);
  }

  // Adjacency through shared edges.
  std::map<int, std::vector<int>> faces_of_edge;
  for (int fi = 0; fi < static_cast<int>(g.faces.size()); ++fi)
    for (const auto& s : g.faces[fi].steps)
      if (s.kind == FaceStep::Kind::Edge) faces_of_edge[s.edge].push_back(fi);
  const int C = static_cast<int>(rep.components.size());
  std::vector<std::set<int>> adj(C);
  for (const auto& [e, fs] : faces_of_edge) {
    if (fs.size() != 2) continue;
    auto a = comp_of_face.find(fs[0]), b = comp_of_face.find(fs[1]);
    if (a != comp_of_face.end() && b != comp_of_face.end() && a->second != b->second &&
        link_edges[fs[0]].count(e) && link_edges[fs[1]].count(e)) {
      adj[a->second].insert(b->second);
      adj[b->second].insert(a->second);
    }
  }

  std::vector<bool> seen(C, false);
  for (int s = 0; s < C; ++s) {
    if (seen[s] || adj[s].empty()) continue;
    // Collect the connected set, then walk it from an end when it is a path.
    std::vector<int> group{s};
    seen[s] = true;
    for (std::size_t i = 0; i < group.size(); ++i)
      for (int n : adj[group[i]])
        if (!seen[n]) {
          seen[n] = true;
          group.push_back(n);
        }
    int start = group.front();
    for (int v : group)
      if (adj[v].size() == 1) {
        start = v;
        break;
      }
    CocircularChain ch;
    std::set<int> visited{start};
    ch.members.push_back(start);
    for (bool grew = true; grew;) {
      grew = false;
      for (int n : adj[ch.members.back()])
        if (!visited.count(n)) {
          visited.insert(n);
          ch.members.push_back(n);
          grew = true;
          break;
        }
    }
    if (ch.members.size() != group.size()) ch.members = group;
    ch.cocircular = std::all_of(ch.members.begin(), ch.members.end(), [&](int i) { return rep.components[i].cocircular; });
    const auto& first = rep.components[ch.members.front()];
    const auto& last = rep.components[ch.members.back()];
    ch.boundary_ends = ch.members.size() >= 2 && first.boundary && last.boundary;
    for (std::size_t i = 1; i + 1 < ch.members.size(); ++i)
      if (rep.components[ch.members[i]].boundary) ch.boundary_ends = false;

    std::set<int> members_faces, outside_regions;
    for (int i : ch.members) members_faces.insert(rep.components[i].face);
    for (int i : ch.members)
      for (const auto& st : g.faces[rep.components[i].face].steps)
        if (st.kind == FaceStep::Kind::Edge)
          for (int fo : faces_of_edge[st.edge])
            if (!members_faces.count(fo)) outside_regions.insert(g.faces[fo].region);
    ch.outside_single_region = outside_regions.size() == 1;
    ch.slide_available = ch.cocircular && ch.boundary_ends && ch.members.size() >= 3 && ch.outside_single_region;
    if (ch.cocircular) {
      std::vector<Point> c;
      for (int i : ch.members) c.push_back((rep.components[i].centers[0] + rep.components[i].centers[1]) / 2.0);
      for (std::size_t i = 1; i < c.size(); ++i) ch.preserved_distances.push_back(distance(c[i - 1], c[i]));
      ch.preserved_distances.push_back(norm(c.front()));
      ch.preserved_distances.push_back(norm(c.back()));
    }
    rep.chains.push_back(std::move(ch));
  }
  return rep;
}

}  // namespace diskpart
