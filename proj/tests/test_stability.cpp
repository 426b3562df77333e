#include <cmath>
#include <random>

#include "diskpart/fixtures.hpp"
#include "diskpart/solver.hpp"
#include "diskpart/stability.hpp"
#include "diskpart/standard.hpp"
#include "doctest.h"
#include "fd_oracle.hpp"
#include "variations.hpp"

using namespace diskpart;
using namespace variations;

namespace {

std::vector<PartitionGraph> fixture_graphs() {
  return {hex_fixture(), conf_a_fixture(), conf_c_fixture(), conf_i_fixture()};
}

}  // namespace

TEST_CASE("fixtures are stationary") {
  for (const auto& g : fixture_graphs()) {
    CHECK_NOTHROW(g.validate());
    CHECK(check_stationary(g).max_residual() < 1e-9);
    const auto A = g.region_areas();
    CHECK(A[0] + A[1] + A[2] == doctest::Approx(kPi).epsilon(1e-12));
  }
  const auto hex = hex_fixture();
  for (double a : hex.region_areas()) CHECK(a == doctest::Approx(kPi / 3).epsilon(1e-12));
  const auto p = conf_i_fixture().regions;
  CHECK(std::abs(p[0].pressure - p[1].pressure) < 1e-9);
}

TEST_CASE("first variation matches finite differences on non-stationary graphs") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int t = 0; t < 10; ++t) {
    PartitionGraph g = random_standard_graph(rng);
    for (auto& e : g.edges) e.arc.h += 0.3 * U(rng);
    const auto X = random_field(rng);
    fd::Deformation d;
    d.g = &g;
    d.use_field = true;
    d.field = X;
    d.project_boundary = false;
    for (const auto& v : g.vertices) d.V.push_back(X(v.pos));
    const DiscretizedVariation u = sample_field(g, X, 64);
    const double formula = first_variation_length(g, u);
    const double oracle = fd::first_difference(d, 1e-5);
    CHECK(std::abs(formula - oracle) <= 1e-6 * std::max(1.0, std::abs(oracle)));
  }
}

TEST_CASE("first variation vanishes for area-preserving variations of stationary graphs") {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 10; ++t) {
    const PartitionGraph g = random_standard_graph(rng);
    const Admissible a = random_admissible(g, 64, rng);
    CHECK(std::abs(first_variation_length(g, a.u)) < 1e-10);
    // And it equals sum p_i dA_i for any admissible variation.
    const Admissible b = random_admissible(g, 64, rng, false);
    const auto dA = area_derivatives(g, b.u);
    const auto p = fitted_pressures(g);
    double pd = 0.0;
    for (int k = 0; k < 3; ++k) pd += p[k] * dA[k];
    CHECK(std::abs(first_variation_length(g, b.u) - pd) < 1e-10);
  }
  const PartitionGraph flat = to_partition_graph(complete_from_edge(splitter_from_curvature(0.0), {0, 0}));
  const DiscretizedVariation u = sample_variation(flat, [](int e, double s) { return (e + 1) * std::sin(kPi * s); });
  CHECK(std::abs(first_variation_length(flat, u)) < 1e-14);
}

TEST_CASE("area derivatives") {
  std::mt19937_64 rng(43);
  const PartitionGraph g0 = random_standard_graph(rng);
  for (double x : area_derivatives(g0, zero_variation(g0))) CHECK(x == 0.0);

  const PartitionGraph hex = hex_fixture();
  for (const auto& f : hex.faces()) {
    if (f.region != 0) continue;
    DiscretizedVariation u = zero_variation(hex);
    double perim = 0.0;
    for (const auto& s : f.steps)
      if (s.kind == FaceStep::Kind::Edge) {
        u.u[s.edge].setConstant(hex.edges[s.edge].left == 0 ? 1.0 : -1.0);
        perim += arc_length(hex.edges[s.edge].arc);
      }
    const auto dA = area_derivatives(hex, u);
    CHECK(dA[0] == doctest::Approx(-perim).epsilon(1e-12));
    CHECK(dA[1] + dA[2] == doctest::Approx(perim).epsilon(1e-12));
    break;
  }

  for (int t = 0; t < 10; ++t) {
    PartitionGraph g = random_standard_graph(rng);
    const auto X = random_field(rng);
    fd::Deformation d;
    d.g = &g;
    d.use_field = true;
    d.field = X;
    for (const auto& v : g.vertices) d.V.push_back(X(v.pos));
    const auto faces = g.faces();
    const Eigen::VectorXd z = Eigen::VectorXd::Zero(g.edges.size());
    const double eps = 1e-5;
    const auto Ap = fd::areas(g, faces, fd::deform(d, eps, z));
    const auto Am = fd::areas(g, faces, fd::deform(d, -eps, z));
    const auto dA = area_derivatives(g, sample_field(g, X, 64));
    for (int k = 0; k < 3; ++k) CHECK(std::abs(dA[k] - (Ap[k] - Am[k]) / (2 * eps)) < 1e-6);
  }
}

TEST_CASE("index form matches the second difference of length at constant areas") {
  std::mt19937_64 rng(44);
  std::vector<PartitionGraph> graphs;
  for (int t = 0; t < 20; ++t) graphs.push_back(random_standard_graph(rng));
  for (auto& g : fixture_graphs()) graphs.push_back(g);
  for (const auto& g : graphs) {
    const IndexFormMatrix q = assemble_index_form(g, 32);
    const Admissible a = random_admissible(g, 32, rng);
    CHECK(admissibility_residual(g, a.u) < 1e-12);
    fd::Deformation d;
    d.g = &g;
    d.u = a.u;
    d.V = a.V;
    d.npts = 3000;
    const double Q = quadratic_form(q, a.u);
    const double L2 = fd::second_difference(d, 2e-3);
    CHECK(std::abs(Q - L2) <= 1e-4 * std::max(1.0, std::abs(Q)));
  }
}

TEST_CASE("rotation Jacobi field") {
  std::mt19937_64 rng(45);
  std::vector<PartitionGraph> graphs = fixture_graphs();
  for (int t = 0; t < 10; ++t) graphs.push_back(random_standard_graph(rng));
  graphs.push_back(to_partition_graph(solve_two_areas(kPi / 2, kPi / 2)));
  for (const auto& g : graphs) {
    const DiscretizedVariation u = rotation_jacobi(g, 64);
    CHECK(admissibility_residual(g, u) < 1e-12);
    CHECK(jacobi_residual(g, u) < 1e-6);
    const IndexFormMatrix q = assemble_index_form(g, 64);
    CHECK(std::abs(quadratic_form(q, u)) < 1e-6);
    for (double x : area_derivatives(g, u)) CHECK(std::abs(x) < 1e-8);
  }
  // Along a radius the rotation field is normal to the edge: u = |p|.
  const PartitionGraph flat = to_partition_graph(complete_from_edge(splitter_from_curvature(0.0), {0, 0}));
  const DiscretizedVariation u = rotation_jacobi(flat, 8);
  for (int k = 0; k <= 8; ++k) CHECK(std::abs(std::abs(u.u[0](k)) - k / 8.0) < 1e-14);
}

TEST_CASE("constrained spectrum") {
  std::mt19937_64 rng(46);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    const double x = 0.2 + 0.6 * U(rng), y = (1 - x) * (0.2 + 0.6 * U(rng));
    const AreaTargets a = AreaTargets::normalized({x, y, 1 - x - y});
    const PartitionGraph g = rotated(to_partition_graph(solve_three_areas(a)), 6 * U(rng));
    const auto spec = constrained_min_eigenvalue(assemble_index_form(g, 32), 2);
    CHECK(spec.constraint_rank == 2);
    CHECK(spec.rank_deficient());
    CHECK(spec.eigenvalues[0] >= -1e-6);
  }
  const PartitionGraph diam = to_partition_graph(solve_two_areas(kPi / 2, kPi / 2));
  const auto sd = constrained_min_eigenvalue(assemble_index_form(diam, 64), 2);
  CHECK(sd.eigenvalues[0] >= -1e-6);
  CHECK(sd.constraint_rank == 1);

  const auto sa = constrained_min_eigenvalue(assemble_index_form(conf_a_fixture(), 32), 2);
  CHECK(sa.eigenvalues[0] < -1e-3);
  const auto sh = constrained_min_eigenvalue(assemble_index_form(hex_fixture(), 32), 2);
  CHECK(sh.eigenvalues[0] < -1e-3);

  // Eigenvectors satisfy the constraints and are M-normalized.
  const IndexFormMatrix q = assemble_index_form(conf_a_fixture(), 32);
  const auto s2 = constrained_min_eigenvalue(q, 2);
  for (const auto& mode : s2.modes) {
    const Eigen::VectorXd x = q.flatten(mode);
    CHECK(std::abs(x.dot(q.M * x) - 1.0) < 1e-8);
    CHECK((q.A * x).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(admissibility_residual(conf_a_fixture(), mode) < 1e-9);
  }
}

TEST_CASE("diameter stability against a family of constant-area arcs") {
  // Vertical chords x = sin(t) bent back to enclose area pi/2 on the left.
  auto length_at = [](double t) {
    const Point p0{std::sin(t), -std::cos(t)}, p1{std::sin(t), std::cos(t)};
    auto left_area = [&](double h) {
      const ArcEdge e{p0, p1, h};
      ArcPolygon poly{{e, BoundaryArc{std::atan2(p1.y, p1.x), wrap_angle(std::atan2(p0.y, p0.x) - std::atan2(p1.y, p1.x))}}};
      return arc_polygon_area(poly) - kPi / 2;
    };
    double lo = -1.9 / std::cos(t), hi = 1.9 / std::cos(t);
    const double h = bracketed_root(left_area, lo, hi, left_area(lo), left_area(hi), 1e-15, 1e-15);
    return arc_length(ArcEdge{p0, p1, h});
  };
  const double t = 1e-3;
  const double L2 = (length_at(t) + length_at(-t) - 2 * length_at(0.0)) / (t * t);
  CHECK(L2 > 0.0);
}

TEST_CASE("eigenvalues converge under refinement") {
  for (const auto& g : {conf_a_fixture(), to_partition_graph(solve_three_areas(AreaTargets{{1.0, 0.9, kPi - 1.9}}))}) {
    const auto a = constrained_min_eigenvalue(assemble_index_form(g, 32), 3);
    const auto b = constrained_min_eigenvalue(assemble_index_form(g, 64), 3);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(a.eigenvalues[k] - b.eigenvalues[k]) < 1e-4);
  }
}

TEST_CASE("assembly rejects non-stationary graphs") {
  PartitionGraph g = to_partition_graph(complete_from_edge(splitter_from_curvature(0.0), {0, 0}));
  g.edges[0].arc.h = 0.5;
  CHECK_THROWS_AS(assemble_index_form(g), PreconditionError);
  CHECK_THROWS_AS(assemble_index_form(hex_fixture(), 7), ShapeError);
}

TEST_CASE("nodal regions") {
  const PartitionGraph c = conf_c_fixture();
  CHECK(nodal_region_count(c, zero_variation(c)).count == 0);
  CHECK(nodal_region_count(c, zero_variation(c)).identically_zero);
  const NodalReport rc = nodal_region_count(c, rotation_jacobi(c));
  CHECK(rc.count >= 4);
  CHECK(rc.clean());

  const PartitionGraph flat = to_partition_graph(complete_from_edge(splitter_from_curvature(0.0), {0, 0}));
  const NodalReport rf = nodal_region_count(flat, rotation_jacobi(flat));
  CHECK(rf.count == 3);
  CHECK(!rf.clean());
  REQUIRE(rf.zero_vertices.size() == 1);
  CHECK(rf.zero_vertices[0] == 0);

  // Three sign changes per edge; the positive pieces at the center vertex merge.
  DiscretizedVariation u = sample_variation(flat, [](int, double s) { return std::cos(3 * kPi * s) + 0.1; });
  CHECK(nodal_region_count(flat, u).count == 3 * 4 - 2);
}

TEST_CASE("vertex coefficients of the largest-pressure region are non-positive") {
  std::mt19937_64 rng(47);
  std::vector<PartitionGraph> graphs = fixture_graphs();
  for (int t = 0; t < 10; ++t) graphs.push_back(random_standard_graph(rng));
  for (const auto& g : graphs) {
    const auto p = fitted_pressures(g);
    const int top = static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
      if (g.vertices[v].kind != VertexKind::Interior) continue;
      double sum = 0.0;
      int count = 0;
      for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const auto& E = g.edges[e];
        if ((E.v0 == static_cast<int>(v) || E.v1 == static_cast<int>(v)) && (E.left == top || E.right == top)) {
          sum += vertex_coefficient(g, static_cast<int>(e), static_cast<int>(v));
          ++count;
        }
      }
      if (count == 2) CHECK(sum <= 1e-9);
    }
  }
}

TEST_CASE("certificates") {
  std::mt19937_64 rng(48);
  const PartitionGraph s = random_standard_graph(rng);
  const auto bs = largest_pressure_component_bound(s);
  CHECK(bs.components == 1);
  CHECK(bs.bound_satisfied);
  CHECK(!bs.certificate);

  const PartitionGraph hex = hex_fixture();
  const auto bh = largest_pressure_component_bound(hex);
  CHECK(bh.nonhexagonal_components == 3);
  CHECK(!bh.bound_satisfied);
  REQUIRE(bh.certificate);
  CHECK(bh.certificate->Q_value < -1e-3);
  CHECK(bh.certificate->area_residual < 1e-10);
  CHECK(admissibility_residual(hex, bh.certificate->u) < 1e-12);

  // The hexagon itself is bounded by segments: its indicator has Q = 0.
  for (const auto& f : hex.faces()) {
    if (f.region != 2) continue;
    DiscretizedVariation u = zero_variation(hex);
    for (const auto& st : f.steps) u.u[st.edge].setConstant(hex.edges[st.edge].left == 2 ? 1.0 : -1.0);
    CHECK(std::abs(quadratic_form(assemble_index_form(hex), u)) < 1e-10);
  }

  const PartitionGraph a = conf_a_fixture();
  const auto ca = two_boundary_three_components(a);
  REQUIRE(ca);
  CHECK(ca->Q_value < -1e-3);
  CHECK(ca->area_residual < 1e-6);
  CHECK(admissibility_residual(a, ca->u) < 1e-6);
  CHECK(!two_boundary_three_components(s));

  const PartitionGraph i = conf_i_fixture();
  const auto ci = congruent_component_swap(i);
  REQUIRE(ci);
  CHECK(ci->Q_value < -1e-3);
  CHECK(ci->area_residual < 1e-10);

  const StabilityReport rs = analyze_stability(s, 32);
  CHECK(rs.verdict == "stable");
  const StabilityReport ra = analyze_stability(a, 32);
  CHECK(ra.verdict == "unstable");
}
