#include <cmath>
#include <random>

#include "diskpart/standard.hpp"
#include "doctest.h"

using namespace diskpart;

namespace {

// Area of the intersection of two disks (radii r1, r2, centers at distance d).
double lens_area(double r1, double r2, double d) {
  const double a1 = std::acos((d * d + r1 * r1 - r2 * r2) / (2 * d * r1));
  const double a2 = std::acos((d * d + r2 * r2 - r1 * r1) / (2 * d * r2));
  const double k = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2);
  return r1 * r1 * a1 + r2 * r2 * a2 - 0.5 * std::sqrt(k);
}

// Midpoint-rule area of {|z| < 1, |z - c| < r}, integrating chord lengths in y.
double quadrature_lens(Point c, double r, int n) {
  double total = 0.0;
  const double lo = -std::min(1.0, r), hi = std::min(1.0, r);
  const double dy = (hi - lo) / n;
  for (int k = 0; k < n; ++k) {
    const double y = lo + (k + 0.5) * dy;
    const double w1 = std::sqrt(std::max(0.0, 1 - y * y));
    const double w2 = std::sqrt(std::max(0.0, r * r - (y - c.y) * (y - c.y)));
    const double a = std::max(-w1, c.x - w2), b = std::min(w1, c.x + w2);
    if (b > a) total += (b - a) * dy;
  }
  return total;
}

StandardGraph random_standard(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double h = 6.0 * (U(rng) - 0.5);
  const double d = std::exp(3.0 * (U(rng) - 0.5));
  return complete_at_depth(splitter_from_curvature(h), d);
}

}  // namespace

TEST_CASE("splitter_from_curvature examples") {
  const auto s0 = splitter_from_curvature(0.0);
  CHECK(arc_length(s0.edge) == doctest::Approx(2.0));
  CHECK(splitter_left_area(s0) == doctest::Approx(kPi / 2).epsilon(1e-14));

  const auto s1 = splitter_from_curvature(1.0);
  const Point c = *center(s1.edge);
  CHECK(dot(c, c) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(meets_unit_circle_orthogonally(s1.edge) < 1e-12);
  const double oracle = quadrature_lens(c, 1.0, 2000000);
  CHECK(std::abs(splitter_left_area(s1) - oracle) < 1e-8);
  CHECK(std::abs(splitter_left_area(s1) - lens_area(1.0, 1.0, std::sqrt(2.0))) < 1e-13);

  const auto big = splitter_from_curvature(1e3);
  CHECK(splitter_left_area(big) < 1e-3 * kPi);
  CHECK(splitter_left_area(big) > 0.0);

  const auto neg = splitter_from_curvature(-1.0);
  CHECK(splitter_left_area(neg) == doctest::Approx(kPi - splitter_left_area(s1)).epsilon(1e-13));
}

TEST_CASE("splitter areas against the lens formula") {
  for (double h : {0.05, 0.3, 0.9, 2.5, 7.0, 40.0}) {
    const auto s = splitter_from_curvature(h);
    const double r = 1.0 / h;
    CHECK(std::abs(splitter_left_area(s) - lens_area(1.0, r, std::sqrt(1 + r * r))) < 1e-10);
    const auto g = to_partition_graph(s);
    const auto areas = g.region_areas();
    CHECK(areas[0] + areas[1] == doctest::Approx(kPi).epsilon(1e-13));
    CHECK(check_stationary(g).max_residual() < 1e-12);
  }
}

TEST_CASE("complete_from_edge: three radii at the center") {
  const auto s = splitter_from_curvature(0.0);
  const StandardGraph g = complete_from_edge(s, {0.0, 0.0});
  for (const auto& e : g.edges) {
    CHECK(std::abs(e.h) < 1e-12);
    CHECK(arc_length(e) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(g.perimeter() == doctest::Approx(3.0).epsilon(1e-12));
  const auto areas = to_partition_graph(g).region_areas();
  for (double a : areas) CHECK(a == doctest::Approx(kPi / 3).epsilon(1e-12));
  const auto p = pressures_of(g);
  for (double x : p) CHECK(std::abs(x) < 1e-12);
}

TEST_CASE("complete_from_edge: off-center vertex on a diameter") {
  const auto s = splitter_from_curvature(0.0);
  for (double t : {-0.6, -0.2, 0.3, 0.7}) {
    const StandardGraph g = complete_from_edge(s, {0.0, t});
    CHECK(std::abs(g.h12()) < 1e-12);
    CHECK(std::abs(g.h23() + g.h31()) < 1e-10);
    CHECK(std::abs(g.h23()) > 1e-3);
    const auto rep = check_stationary(to_partition_graph(g));
    CHECK(rep.max_residual() < 1e-9);
  }
  CHECK_THROWS_AS(complete_from_edge(s, {0.0, 1.0}), DegenerateVertexError);
  CHECK_THROWS_AS(complete_from_edge(s, {0.3, 0.0}), DomainError);
}

TEST_CASE("curvatures_from_halfplane examples") {
  const auto [a, b] = curvatures_from_halfplane(1.0, 0.0);
  CHECK(std::abs(a) < 1e-15);
  CHECK(std::abs(b) < 1e-15);
  CHECK(curvatures_from_halfplane(1e-6, 0.0).first > 1e5);
  CHECK_THROWS_AS(curvatures_from_halfplane(0.0, 0.0), DomainError);
  CHECK_THROWS_AS(curvatures_from_halfplane(-1.0, 0.3), DomainError);
}

TEST_CASE("half-plane formulas match the geometric construction with x = h12") {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const double h = 6.0 * (U(rng) - 0.5);
    const double d = std::exp(3.0 * (U(rng) - 0.5));
    const StandardGraph g = complete_at_depth(splitter_from_curvature(h), d);
    const auto [h31, h32] = curvatures_from_halfplane(d, g.h12());
    worst = std::max({worst, std::abs(h31 - g.h31()), std::abs(h32 + g.h23())});
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("standard graph invariants on random inputs") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 200; ++t) {
    const StandardGraph g = random_standard(rng);
    CHECK(std::abs(g.h12() + g.h23() + g.h31()) < 1e-10);
    const PartitionGraph pg = to_partition_graph(g);
    CHECK(check_stationary(pg).max_residual() < 1e-9);
    const auto areas = pg.region_areas();
    CHECK(areas[0] + areas[1] + areas[2] == doctest::Approx(kPi).epsilon(1e-11));
    for (double a : areas) CHECK(a > 0.0);
    const auto p = pressures_of(g);
    CHECK(std::abs(p[0] + p[1] + p[2]) < 1e-12);
    CHECK(std::abs(p[0] - p[1] - g.h12()) < 1e-10);
    CHECK(std::abs(p[1] - p[2] - g.h23()) < 1e-10);
    // Two computation paths for p3.
    CHECK(std::abs(p[2] - (p[0] + g.h31())) < 1e-10);
  }
}

TEST_CASE("sweeping the vertex along the splitter is monotone") {
  for (double h : {-1.5, 0.0, 0.8}) {
    const auto s = splitter_from_curvature(h);
    double prev_area = 0.0, prev_p3 = 0.0;
    int sign_area = 0, sign_p3 = 0;
    bool monotone = true;
    for (int k = 0; k < 100; ++k) {
      const double d = std::exp(-2.5 + 5.0 * k / 99.0);
      const StandardGraph g = complete_at_depth(s, d);
      const double a3 = to_partition_graph(g).region_areas()[2];
      const double p3 = g.pressures[2];
      if (k > 0) {
        const int sa = a3 > prev_area ? 1 : (a3 < prev_area ? -1 : 0);
        const int sp = p3 > prev_p3 ? 1 : (p3 < prev_p3 ? -1 : 0);
        if (k == 1) {
          sign_area = sa;
          sign_p3 = sp;
        }
        monotone = monotone && sa == sign_area && sp == sign_p3 && sa != 0 && sp != 0;
      }
      prev_area = a3;
      prev_p3 = p3;
    }
    CHECK(monotone);
    CHECK(sign_area == -sign_p3);
  }
}

TEST_CASE("rigid-motion equivariance") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 50; ++t) {
    const StandardGraph g = random_standard(rng);
    const double ang = 0.37 * t;
    const StandardGraph r = rotated(g, ang);
    const auto s = splitter_from_curvature(g.h12());
    TwoRegionSplitter srot{rotated(s.edge, ang), s.h};
    const StandardGraph rebuilt = complete_from_edge(srot, r.interior_vertex);
    for (int k = 0; k < 3; ++k) {
      CHECK(std::abs(rebuilt.edges[k].h - r.edges[k].h) < 1e-10);
      CHECK(distance(rebuilt.boundary_vertices[k], r.boundary_vertices[k]) < 1e-10);
    }
  }
}

TEST_CASE("pressures_of examples") {
  const auto p = pressures_from_curvatures(1.0, -0.5, -0.5);
  CHECK(p[0] == doctest::Approx(0.5));
  CHECK(p[1] == doctest::Approx(-0.5));
  CHECK(std::abs(p[2]) < 1e-15);
  CHECK_THROWS_AS(pressures_from_curvatures(1.0, 0.0, 0.0), GeometryError);
}

TEST_CASE("check_stationary flags a bad junction") {
  PartitionGraph g;
  const int c = g.add_vertex({0, 0}, VertexKind::Interior);
  g.regions.resize(3);
  const double angs[3] = {kPi / 2, kPi / 2 + 3 * kPi / 4, kPi / 2 + 3 * kPi / 2};
  for (int k = 0; k < 3; ++k) {
    const int b = g.add_vertex(unit_vector(angs[k]), VertexKind::Boundary);
    g.add_edge({{0, 0}, unit_vector(angs[k]), 0.0}, c, b, k, (k + 1) % 3);
  }
  const auto rep = check_stationary(g);
  CHECK(rep.angle_residuals[0] >= 15.0 * kPi / 180.0 - 1e-12);
  CHECK(!rep.stationary(1e-3));
}
