#include <cmath>
#include <random>
#include <regex>

#include "diskpart/catalog.hpp"
#include "diskpart/fixtures.hpp"
#include "diskpart/io.hpp"
#include "diskpart/solver.hpp"
#include "doctest.h"

using namespace diskpart;

namespace {

PartitionGraph standard(const std::vector<double>& raw) {
  PartitionGraph g = to_partition_graph(solve_three_areas(AreaTargets::normalized(raw)));
  return g;
}

// Center of an SVG elliptical arc with rx = ry from its endpoints and flags,
// following the endpoint-to-center conversion in the SVG implementation notes.
Point svg_arc_center(Point p1, Point p2, double r, int large, int sweep) {
  const Point m = (p1 - p2) / 2.0;
  const double d2 = dot(m, m);
  double k = std::sqrt(std::max(0.0, (r * r - d2) / d2));
  if (large == sweep) k = -k;
  const Point cp{k * m.y, -k * m.x};
  return cp + (p1 + p2) / 2.0;
}

int count(const std::string& s, const std::string& needle) {
  int n = 0;
  for (std::size_t at = s.find(needle); at != std::string::npos; at = s.find(needle, at + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("document round trip: exact graph") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.3, 1.7);
  for (int t = 0; t < 10; ++t) {
    const PartitionGraph g = standard({U(rng), U(rng), U(rng)});
    GraphDocument d = to_document(g);
    d.metadata["provenance"] = "solve";
    const std::string text = serialize(d);
    const GraphDocument back = parse_document(text);
    CHECK(serialize(back) == text);
    const PartitionGraph h = to_partition_graph(back);
    const auto r0 = check_stationary(g), r1 = check_stationary(h);
    CHECK(std::abs(r0.max_residual() - r1.max_residual()) <= 1e-12);
    CHECK(r1.max_residual() < 1e-6);
    CHECK(h.perimeter() == doctest::Approx(g.perimeter()).epsilon(1e-14));
    for (std::size_t i = 0; i < g.regions.size(); ++i) CHECK(h.regions[i].pressure == g.regions[i].pressure);
  }
}

TEST_CASE("document round trip: polyline graph") {
  DiscreteGraph g = template_instantiate(find_template("conf_a"), AreaTargets::normalized({1, 1, 1}), 12);
  relax(g);
  const std::string text = serialize(to_document(g));
  const DiscreteGraph h = to_discrete_graph(parse_document(text));
  CHECK(serialize(to_document(h)) == text);
  CHECK(h.template_name == "conf_a");
  CHECK(h.perimeter() == g.perimeter());
  const auto a = g.region_areas(), b = h.region_areas();
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i] == doctest::Approx(a[i]).epsilon(1e-14));
  CHECK(h.faces.size() == g.faces.size());
}

TEST_CASE("document validation") {
  const std::string good = serialize(to_document(standard({1, 1, 1})));
  CHECK_NOTHROW(parse_document(good));
  CHECK_THROWS_AS(parse_document("{"), DocumentError);
  CHECK_THROWS_AS(parse_document("[]"), DocumentError);
  auto j = nlohmann::json::parse(good);
  j["schema_version"] = "diskpart.graph/0";
  CHECK_THROWS_AS(from_json(j), DocumentError);
  j = nlohmann::json::parse(good);
  j["edges"][0]["v1"] = 99;
  CHECK_THROWS_AS(from_json(j), DocumentError);
  j = nlohmann::json::parse(good);
  j["edges"][0]["polyline"] = nlohmann::json::array();
  CHECK_THROWS_AS(from_json(j), DocumentError);
  j = nlohmann::json::parse(good);
  j["vertices"][0]["kind"] = "corner";
  CHECK_THROWS_AS(from_json(j), DocumentError);
  j = nlohmann::json::parse(good);
  j.erase("regions");
  CHECK_THROWS_AS(from_json(j), DocumentError);
}

TEST_CASE("svg: structure and determinism") {
  const PartitionGraph g = standard({2, 1, kPi - 3});
  const std::string svg = render_svg(g);
  CHECK(count(svg, "<path") == 4);
  CHECK(count(svg, "<text") == 3);
  CHECK(svg.find("width=\"512\"") != std::string::npos);
  CHECK(render_svg(g) == svg);
  CHECK(render_svg(standard({2, 1, kPi - 3})) == svg);

  const PartitionGraph d = to_partition_graph(solve_two_areas(kPi / 2, kPi / 2));
  CHECK(count(render_svg(d), "<path") == 2);
}

TEST_CASE("svg: arcs bend toward their centers") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(0.3, 1.7);
  const std::regex arc_re(R"(M ([-0-9.]+) ([-0-9.]+) A ([-0-9.]+) [-0-9.]+ 0 (\d) (\d) ([-0-9.]+) ([-0-9.]+))");
  int arcs = 0;
  for (int t = 0; t < 10; ++t) {
    const PartitionGraph g = standard({U(rng), U(rng), U(rng)});
    const std::string svg = render_svg(g);
    // The disk outline comes first; edges follow in order.
    auto it = std::sregex_iterator(svg.begin(), svg.end(), arc_re);
    std::vector<std::smatch> found(it, std::sregex_iterator());
    std::size_t k = 1;
    for (const auto& e : g.edges) {
      if (is_straight(e.arc)) continue;
      REQUIRE(k < found.size());
      const auto& m = found[k++];
      const Point p1{std::stod(m[1]), std::stod(m[2])}, p2{std::stod(m[6]), std::stod(m[7])};
      const double r = std::stod(m[3]);
      const Point c = svg_arc_center(p1, p2, r, std::stoi(m[4]), std::stoi(m[5]));
      const Point ce = *center(e.arc);
      const Point expect{256.0 + 240.0 * ce.x, 256.0 - 240.0 * ce.y};
      CHECK(distance(c, expect) < 0.05 * std::max(1.0, r / 240.0));
      ++arcs;
    }
  }
  CHECK(arcs > 0);
}

TEST_CASE("svg: polyline graphs") {
  DiscreteGraph g = template_instantiate(find_template("hex"), AreaTargets::normalized({1, 1, 1}), 8);
  const std::string svg = render_svg(g);
  CHECK(count(svg, "<path") == static_cast<int>(g.edges.size()) + 1);
  CHECK(count(svg, "<text") == static_cast<int>(g.faces.size()));
}

TEST_CASE("result payloads") {
  RelaxResult r;
  r.perimeter = 3.0;
  r.multipliers = {0.1, -0.1};
  r.iterations = 7;
  r.converged = true;
  const auto j = to_json(r);
  CHECK(j["perimeter"] == 3.0);
  CHECK(j["iterations"] == 7);
  CHECK(j["converged"] == true);
  CHECK(j["multipliers"].size() == 2);
  const auto s = to_json(check_stationary(standard({1, 1, 1})));
  CHECK(s["max_residual"].get<double>() < 1e-9);
}
