#include <cmath>
#include <random>

#include "diskpart/catalog.hpp"
#include "diskpart/solver.hpp"
#include "diskpart/standard.hpp"
#include "doctest.h"

using namespace diskpart;

namespace {

AreaTargets equal_areas(int n) { return AreaTargets{std::vector<double>(n, kPi / n)}; }

AreaTargets random_triple(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.6, 1.4);
  return AreaTargets::normalized({U(rng), U(rng), U(rng)});
}

RelaxResult relax_template(const std::string& name, const AreaTargets& a, int n_pts, DiscreteGraph* out = nullptr) {
  DiscreteGraph g = template_instantiate(find_template(name), a, n_pts);
  RelaxOptions o;
  o.max_iters = 1000;
  RelaxResult r = relax(g, o);
  if (out) *out = std::move(g);
  return r;
}

// Arc from p to q on the circle about c (minor arc).
ArcEdge arc_about(Point p, Point q, Point c) {
  const double h = 1.0 / distance(p, c);
  const ArcEdge e{p, q, h};
  return distance(*center(e), c) < 1e-9 ? e : ArcEdge{p, q, -h};
}

}  // namespace

TEST_CASE("catalog contents") {
  CHECK(catalog_for(3).size() == 11);
  CHECK(catalog_for(4).size() == 2);
  CHECK(catalog_for(5).size() == 2);
  CHECK(catalog_for(6).size() == 4);
  CHECK_THROWS_AS(find_template("conf_z"), DomainError);
  for (const auto& t : catalog()) {
    CAPTURE(t.name);
    const PlanarMap m = t.combinatorics();
    CHECK_NOTHROW(validate_degrees(m, 1e-9));
    DiscreteGraph g = discretize(t.seed(), 8);
    CHECK(g.region_count() == t.regions);
    for (const auto& f : g.faces) CHECK(f.side_count() != 2);
    std::vector<bool> used(t.regions, false);
    for (const auto& f : g.faces) used[f.region] = true;
    for (int r = 0; r < t.regions; ++r) CHECK(used[r]);
  }
}

TEST_CASE("instantiate reaches target areas") {
  std::mt19937_64 rng(11);
  const AreaTargets a = random_triple(rng);
  for (const auto& t : catalog_for(3)) {
    CAPTURE(t.name);
    const DiscreteGraph g = template_instantiate(t, a, 16);
    CHECK(g.template_name == t.name);
    CHECK_NOTHROW(g.validate());
    const auto A = g.region_areas();
    for (int r = 0; r < 3; ++r) CHECK(A[r] == doctest::Approx(a[r]).epsilon(1e-10));
    for (int v = 0; v < g.vertex_count(); ++v)
      if (g.is_boundary(v)) CHECK(std::abs(norm(g.nodes[v]) - 1.0) < 1e-9);
  }
  CHECK_THROWS_AS(template_instantiate(find_template("conf_j"), equal_areas(4), 16), DomainError);
  CHECK_THROWS_AS(template_instantiate(find_template("conf_j"), AreaTargets{{1.0, 1.0, 1.0}}, 16), DomainError);
}

TEST_CASE("instantiate: equal-area seeds") {
  const DiscreteGraph j = template_instantiate(find_template("conf_j"), equal_areas(3), 16);
  CHECK(j.perimeter() == doctest::Approx(3.0).epsilon(1e-12));
  const DiscreteGraph h = template_instantiate(find_template("hex"), equal_areas(3), 16);
  int interior = 0;
  for (int v = 0; v < h.vertex_count(); ++v) interior += !h.is_boundary(v);
  CHECK(interior == 6);
  CHECK(h.edges.size() == 12);
}

TEST_CASE("relax: standard graph at equal areas") {
  DiscreteGraph g;
  const RelaxResult r = relax_template("conf_j", equal_areas(3), 32, &g);
  CHECK(r.converged);
  CHECK(std::abs(r.perimeter - 3.0) < 1e-3);
  for (double m : r.multipliers) CHECK(std::abs(m) < 1e-2);
  const PressureEstimate p = pressures_estimate(g);
  CHECK_FALSE(p.unrelaxed);
  for (double x : p.pressures) CHECK(std::abs(x) < 1e-2);
}

TEST_CASE("relax: hex is longer than the standard graph") {
  const RelaxResult r = relax_template("hex", equal_areas(3), 24);
  CHECK(r.perimeter > 3.0);
}

TEST_CASE("relax: single region") {
  PartitionGraph p;
  p.regions.resize(1);
  DiscreteGraph g = discretize(p, 8);
  const RelaxResult r = relax(g);
  CHECK(r.perimeter == 0.0);
  CHECK(r.converged);
  CHECK(r.iterations == 0);
}

TEST_CASE("relax: pressures against the exact solver") {
  const AreaTargets a{{kPi / 2, kPi / 4, kPi / 4}};
  DiscreteGraph g;
  const RelaxResult r = relax_template("conf_j", a, 64, &g);
  REQUIRE(r.converged);
  const StandardGraph exact = solve_three_areas(a);
  const PressureEstimate p = pressures_estimate(g);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(p.pressures[i] - exact.pressures[i]) < 1e-2);
    CHECK(std::abs(r.multipliers[i] - exact.pressures[i]) < 1e-2);
  }
  for (double b : p.junction_balance) CHECK(b < 1e-2);
  CHECK(p.fit_residual < 1e-2);
}

TEST_CASE("relax: perimeter history and area error") {
  std::mt19937_64 rng(5);
  for (const char* name : {"conf_j", "std4"}) {
    CAPTURE(name);
    const AreaTargets a = std::string(name) == "std4" ? equal_areas(4) : random_triple(rng);
    const RelaxResult r = relax_template(name, a, 24);
    for (std::size_t k = 1; k < r.perimeter_history.size(); ++k)
      CHECK(r.perimeter_history[k] <= r.perimeter_history[k - 1]);
    CHECK(r.max_area_error < 1e-9);
  }
}

TEST_CASE("relax: converges to the exact standard graph") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 10; ++trial) {
    const AreaTargets a = random_triple(rng);
    CAPTURE(a.a[0]);
    CAPTURE(a.a[1]);
    DiscreteGraph g;
    const RelaxResult r = relax_template("conf_j", a, 64, &g);
    CHECK(r.converged);
    const PartitionGraph exact = to_partition_graph(solve_three_areas(a));
    CHECK(aligned_hausdorff(g, exact) < 1e-3);
    CHECK(std::abs(r.perimeter - exact.perimeter()) < 1e-4);
  }
}

TEST_CASE("relax: refinement") {
  const AreaTargets a{{kPi / 2, kPi / 4, kPi / 4}};
  const double coarse = relax_template("conf_j", a, 32).perimeter;
  const double fine = relax_template("conf_j", a, 64).perimeter;
  CHECK(std::abs(coarse - fine) < 1e-4);
}

TEST_CASE("relax: collapse is reported") {
  DiscreteGraph g = template_instantiate(find_template("conf_i"), equal_areas(3), 24);
  CHECK_THROWS_AS(relax(g), TopologyEventError);
}

TEST_CASE("cocircular report: standard graph is empty") {
  DiscreteGraph g;
  relax_template("conf_j", equal_areas(3), 16, &g);
  const CocircularReport rep = cocircular_chain_report(g);
  CHECK(rep.empty());
  CHECK(rep.chains.empty());
}

TEST_CASE("cocircular report: concentric band") {
  // Band between circles about c cut by two radial separators into three 4-components;
  // the caps above and below are 4-sided too but only touch the chain along its cocircular sides.
  const Point c{0.0, -1.5};
  const double Ro = 1.8, Ri = 1.2;
  auto foot = [&](double R, double sx) {
    const double y = (R * R - 1.0 - dot(c, c)) / (2.0 * c.y) * -1.0;
    return Point{sx * std::sqrt(1.0 - y * y), y};
  };
  const double s = 0.2, co = std::sqrt(1.0 - s * s);
  PartitionGraph p;
  const int bl = p.add_vertex(foot(Ri, -1), VertexKind::Boundary), br = p.add_vertex(foot(Ri, 1), VertexKind::Boundary);
  const int tl = p.add_vertex(foot(Ro, -1), VertexKind::Boundary), tr = p.add_vertex(foot(Ro, 1), VertexKind::Boundary);
  const int il = p.add_vertex(c + Point{-s, co} * Ri, VertexKind::Interior);
  const int ir = p.add_vertex(c + Point{s, co} * Ri, VertexKind::Interior);
  const int ol = p.add_vertex(c + Point{-s, co} * Ro, VertexKind::Interior);
  const int orr = p.add_vertex(c + Point{s, co} * Ro, VertexKind::Interior);
  auto arc = [&](int a, int b, int left, int right) {
    p.add_edge(arc_about(p.vertices[a].pos, p.vertices[b].pos, c), a, b, left, right);
  };
  auto seg = [&](int a, int b, int left, int right) {
    p.add_edge({p.vertices[a].pos, p.vertices[b].pos, 0.0}, a, b, left, right);
  };
  arc(bl, il, 0, 2);
  arc(il, ir, 1, 2);
  arc(ir, br, 0, 2);
  arc(tl, ol, 2, 0);
  arc(ol, orr, 2, 1);
  arc(orr, tr, 2, 0);
  seg(il, ol, 0, 1);
  seg(ir, orr, 1, 0);
  p.regions.resize(3);
  const DiscreteGraph g = discretize(p, 32);
  REQUIRE_NOTHROW(g.validate());

  const CocircularReport rep = cocircular_chain_report(g);
  REQUIRE(rep.components.size() == 5);
  for (const auto& comp : rep.components) CHECK(comp.cocircular);
  REQUIRE(rep.chains.size() == 1);
  const CocircularChain& ch = rep.chains[0];
  CHECK(ch.members.size() == 3);
  CHECK(ch.cocircular);
  CHECK(ch.boundary_ends);
  CHECK(ch.outside_single_region);
  CHECK(ch.slide_available);
  REQUIRE(ch.preserved_distances.size() == 4);
  CHECK(ch.preserved_distances[0] < 1e-3);
  CHECK(ch.preserved_distances[1] < 1e-3);
  CHECK(ch.preserved_distances[2] == doctest::Approx(1.5).epsilon(1e-3));
  CHECK(ch.preserved_distances[3] == doctest::Approx(1.5).epsilon(1e-3));
}

TEST_CASE("cocircular report: relaxed conf_c") {
  DiscreteGraph g = template_instantiate(find_template("conf_c"), equal_areas(3), 24);
  RelaxOptions o;
  o.max_iters = 300;
  relax(g, o);
  const CocircularReport rep = cocircular_chain_report(g);
  REQUIRE_FALSE(rep.empty());
  for (const auto& comp : rep.components)
    if (!comp.boundary) CHECK_FALSE(comp.cocircular);
}

TEST_CASE("compare: standard graph first for three regions") {
  std::mt19937_64 rng(77);
  const AreaTargets a = random_triple(rng);
  CompareOptions o;
  o.n_pts = 24;
  const auto res = compare_candidates(a, catalog_for(3), o);
  REQUIRE(res.size() == 11);
  CHECK(res.front().name == "conf_j");
  CHECK(res.front().status == CandidateStatus::Converged);
  for (const auto& r : res)
    if (r.status != CandidateStatus::Infeasible) CHECK(r.perimeter >= res.front().perimeter - 1e-3);
  const auto again = compare_candidates(a, catalog_for(3), o);
  for (std::size_t i = 0; i < res.size(); ++i) {
    CHECK(res[i].name == again[i].name);
    CHECK(res[i].perimeter == again[i].perimeter);
  }
}

TEST_CASE("compare: standard templates lead at equal areas") {
  CompareOptions o;
  o.n_pts = 24;
  for (int n : {4, 5, 6}) {
    CAPTURE(n);
    const auto res = compare_candidates(equal_areas(n), catalog_for(n), o);
    REQUIRE(!res.empty());
    CHECK(res.front().name == "std" + std::to_string(n));
    CHECK(res.front().status == CandidateStatus::Converged);
    CHECK(res.front().perimeter < n);
    for (std::size_t i = 1; i < res.size(); ++i) CHECK(res[i].perimeter > res.front().perimeter);
  }
}
