// Runs the acceptance checks and prints one PASS/FAIL line per criterion.
// Exit status is the number of failing criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>

#include "diskpart/commands.hpp"
#include "diskpart/fixtures.hpp"
#include "diskpart/stability.hpp"
#include "fd_oracle.hpp"
#include "variations.hpp"

using namespace diskpart;
using namespace variations;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

AreaTargets random_triple(std::mt19937_64& rng, double lo = 0.15) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (;;) {
    const double x = U(rng), y = U(rng);
    std::vector<double> a{x, y, 1.0 - x - y};
    if (*std::min_element(a.begin(), a.end()) < lo / kPi) continue;
    return AreaTargets::normalized(a);
  }
}

AreaTargets equal(int n) { return AreaTargets{std::vector<double>(n, kPi / n)}; }

// Unit tangent of edge e leaving vertex v.
Point leaving(const PartitionGraph& g, int e, int v) {
  const auto& E = g.edges[e];
  return E.v0 == v ? tangent_at(E.arc, 0.0) : tangent_at(E.arc, 1.0) * -1.0;
}

Outcome equal_areas_exact() {
  RunConfig c;
  c.areas = "equal";
  const PartitionGraph g = to_partition_graph(cmd_solve(c));
  double angle_err = 0.0, h_max = 0.0;
  int interior = -1;
  for (std::size_t v = 0; v < g.vertices.size(); ++v)
    if (g.vertices[v].kind == VertexKind::Interior) interior = static_cast<int>(v);
  for (const auto& e : g.edges) h_max = std::max(h_max, std::abs(e.arc.h));
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b)
      angle_err = std::max(angle_err, std::abs(angle_between(leaving(g, a, interior), leaving(g, b, interior)) -
                                               2.0 * kPi / 3.0));
  const double dL = std::abs(g.perimeter() - 3.0);
  return {g.edges.size() == 3 && h_max == 0.0 && angle_err < 1e-9 && dL < 1e-9,
          fmt("edges %zu, max |h| %.1e, angle error %.1e, |L - 3| %.1e", g.edges.size(), h_max, angle_err, dL)};
}

Outcome two_region_diameter() {
  const PartitionGraph g = to_partition_graph(solve_two_areas(kPi / 2, kPi / 2));
  const double dL = std::abs(g.perimeter() - 2.0);
  const bool straight = g.edges.size() == 1 && is_straight(g.edges[0].arc);
  return {straight && dL < 1e-12, fmt("straight %d, |L - 2| %.1e", straight, dL)};
}

Outcome mobius_formulas() {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double curv = 0.0, orth = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const double h = 6.0 * (U(rng) - 0.5);
    const double d = std::exp(3.0 * (U(rng) - 0.5));
    const StandardGraph g = complete_at_depth(splitter_from_curvature(h), d);
    const auto [h31, h32] = curvatures_from_halfplane(d, g.h12());
    curv = std::max({curv, std::abs(h31 - g.h31()), std::abs(h32 + g.h23())});
    orth = std::max({orth, meets_unit_circle_orthogonally(g.edges[1]), meets_unit_circle_orthogonally(g.edges[2])});
  }
  return {curv < 1e-8 && orth < 1e-9, fmt("1000 pairs, curvature error %.1e, orthogonality %.1e", curv, orth)};
}

Outcome monotone_and_unique() {
  bool monotone = true;
  for (double h : {-2.0, -0.7, 0.0, 0.4, 1.5}) {
    const auto s = splitter_from_curvature(h);
    int sa = 0, sp = 0;
    double pa = 0.0, pp = 0.0;
    for (int k = 0; k < 100; ++k) {
      const double d = std::exp(-2.5 + 5.0 * k / 99.0);
      const StandardGraph g = complete_at_depth(s, d);
      const double a3 = to_partition_graph(g).region_areas()[2], p3 = g.pressures[2];
      if (k > 0) {
        const int da = (a3 > pa) - (a3 < pa), dp = (p3 > pp) - (p3 < pp);
        if (k == 1) sa = da, sp = dp;
        monotone = monotone && da == sa && dp == sp && da != 0 && dp != 0;
      }
      pa = a3;
      pp = p3;
    }
  }
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const AreaTargets a = random_triple(rng);
    const auto ref = sample_points(to_partition_graph(solve_three_areas(a)), 64);
    for (int s = 0; s < 5; ++s) {
      ThreeAreaOptions opt;
      opt.h12_seed = U(rng);
      worst = std::max(worst, hausdorff_distance(ref, sample_points(to_partition_graph(solve_three_areas(a, opt)), 64)));
    }
  }
  return {monotone && worst < 1e-6, fmt("monotone %d over 5 splitters x 100 positions, seed spread %.1e", monotone, worst)};
}

Outcome variation_contracts() {
  std::mt19937_64 rng(33);
  double first = 0.0, second = 0.0;
  for (int t = 0; t < 20; ++t) {
    const PartitionGraph g = random_standard_graph(rng);
    const auto X = random_field(rng);
    fd::Deformation d;
    d.g = &g;
    d.use_field = true;
    d.field = X;
    d.project_boundary = false;
    for (const auto& v : g.vertices) d.V.push_back(X(v.pos));
    const double formula = first_variation_length(g, sample_field(g, X, 64));
    const double oracle = fd::first_difference(d, 1e-5);
    first = std::max(first, std::abs(formula - oracle) / std::max(1.0, std::abs(oracle)));

    const IndexFormMatrix q = assemble_index_form(g, 32);
    const Admissible a = random_admissible(g, 32, rng);
    fd::Deformation e;
    e.g = &g;
    e.u = a.u;
    e.V = a.V;
    e.npts = 3000;
    const double Q = quadratic_form(q, a.u);
    second = std::max(second, std::abs(Q - fd::second_difference(e, 2e-3)) / std::max(1.0, std::abs(Q)));
  }
  return {first <= 1e-6 && second <= 1e-4, fmt("20 graphs, first variation rel %.1e, Q rel %.1e", first, second)};
}

Outcome rotation_null() {
  std::mt19937_64 rng(34);
  std::vector<PartitionGraph> graphs{hex_fixture(), conf_a_fixture(), conf_c_fixture(), conf_i_fixture(),
                                     to_partition_graph(solve_two_areas(kPi / 2, kPi / 2))};
  for (int t = 0; t < 20; ++t) graphs.push_back(to_partition_graph(solve_three_areas(random_triple(rng))));
  double worst = 0.0;
  for (const auto& g : graphs)
    worst = std::max(worst, std::abs(quadratic_form(assemble_index_form(g, 64), rotation_jacobi(g, 64))));
  return {worst < 1e-6, fmt("%zu graphs, max |Q(u_rot, u_rot)| %.1e", graphs.size(), worst)};
}

Outcome stability_verdicts() {
  std::mt19937_64 rng(35);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double standard_min = 1e300;
  for (int t = 0; t < 20; ++t) {
    const PartitionGraph g = rotated(to_partition_graph(solve_three_areas(random_triple(rng))), 6.0 * U(rng));
    standard_min = std::min(standard_min, constrained_min_eigenvalue(assemble_index_form(g, 32), 1).eigenvalues[0]);
  }
  const PartitionGraph a = conf_a_fixture(), h = hex_fixture();
  const double la = constrained_min_eigenvalue(assemble_index_form(a, 32), 1).eigenvalues[0];
  const double lh = constrained_min_eigenvalue(assemble_index_form(h, 32), 1).eigenvalues[0];
  const auto ca = two_boundary_three_components(a);
  const auto ch = largest_pressure_component_bound(h).certificate;
  const double qa = ca ? ca->Q_value : 0.0, qh = ch ? ch->Q_value : 0.0;
  const bool pass = standard_min >= -1e-6 && la < -1e-3 && lh < -1e-3 && qa < -1e-3 && qh < -1e-3;
  return {pass, fmt("standard min %.1e; conf_a lambda %.3f, Q %.3f; hex lambda %.3f, Q %.3f", standard_min, la, qa, lh,
                    qh)};
}

Outcome three_region_ordering() {
  bool pass = true;
  double worst_gap = 1e300, worst_hd = 0.0;
  std::string first_names;
  for (int s = 1; s <= 5; ++s) {
    RunConfig c;
    c.areas = "random";
    c.seed = static_cast<std::uint64_t>(s);
    c.n_pts = 64;
    const auto rows = cmd_compare(c);
    const auto& top = rows.front();
    first_names += (s > 1 ? "," : "") + top.name;
    pass = pass && top.name == "conf_j" && top.status == CandidateStatus::Converged;
    for (std::size_t i = 1; i < rows.size(); ++i)
      if (rows[i].status != CandidateStatus::Infeasible) worst_gap = std::min(worst_gap, rows[i].perimeter - top.perimeter);
    if (top.name == "conf_j" && top.graph) {
      const PartitionGraph exact = to_partition_graph(solve_three_areas(parse_areas(c)));
      worst_hd = std::max(worst_hd, aligned_hausdorff(*top.graph, exact));
    }
  }
  pass = pass && worst_gap >= -1e-3 && worst_hd < 1e-3;
  return {pass, fmt("first: %s; smallest gap %.2e; conf_j vs exact Hausdorff %.1e", first_names.c_str(), worst_gap,
                    worst_hd)};
}

std::map<int, std::vector<CandidateResult>> equal_area_runs;

const std::vector<CandidateResult>& equal_area_compare(int n) {
  auto it = equal_area_runs.find(n);
  if (it != equal_area_runs.end()) return it->second;
  CompareOptions o;
  o.n_pts = 48;
  return equal_area_runs[n] = compare_candidates(equal(n), catalog_for(n), o);
}

Outcome profile_bound() {
  bool below = true, only_n3 = true;
  std::string eq;
  for (int n : {2, 3}) {
    RunConfig c;
    c.n = n;
    c.grid = 11;
    for (const auto& p : cmd_profile(c)) {
      if (!p.ok()) continue;
      below = below && p.perimeter <= n + 1e-9;
      if (std::abs(p.perimeter - n) > 1e-9) continue;
      bool equal_point = n == 3;
      for (double a : p.areas.a) equal_point = equal_point && std::abs(a - kPi / 3) < 1e-12;
      only_n3 = only_n3 && equal_point;
      std::string at = fmt("n=%d (", n);
      for (std::size_t i = 0; i < p.areas.a.size(); ++i) at += fmt(i ? ",%.4f" : "%.4f", p.areas.a[i]);
      eq += (eq.empty() ? "" : " ") + at + ")";
    }
  }
  if (eq.empty()) eq = "none";

  bool strict = true;
  std::string best;
  for (int n : {4, 5, 6}) {
    double b = 1e300;
    for (const auto& r : equal_area_compare(n))
      if (r.status == CandidateStatus::Converged) b = std::min(b, r.perimeter);
    strict = strict && b < n;
    best += fmt(" %d:%.6f", n, b);
  }
  return {below && only_n3 && strict,
          fmt("I <= n %d; equality at %s; best relaxed%s", below, eq.c_str(), best.c_str())};
}

Outcome alternate_orderings() {
  bool pass = true;
  std::string detail;
  auto perimeter = [](const std::vector<CandidateResult>& rows, const std::string& name) -> const CandidateResult* {
    for (const auto& r : rows)
      if (r.name == name) return &r;
    return nullptr;
  };
  const std::vector<std::pair<std::string, std::vector<std::string>>> pairs{
      {"std4", {"alt4"}}, {"std5", {"alt5"}}, {"std6", {"alt6a", "alt6b", "alt6c"}}};
  for (const auto& [std_name, alts] : pairs) {
    const auto& rows = equal_area_compare(std_name.back() - '0');
    const auto* s = perimeter(rows, std_name);
    if (!s || s->status != CandidateStatus::Converged) {
      pass = false;
      detail += " " + std_name + " not converged;";
      continue;
    }
    for (const auto& alt : alts) {
      const auto* a = perimeter(rows, alt);
      if (!a || a->status == CandidateStatus::Infeasible) {
        pass = false;
        detail += " " + alt + " infeasible;";
        continue;
      }
      const double gap = a->perimeter - s->perimeter;
      pass = pass && gap > 0.0;
      detail += fmt(" %s-%s %+.4f (%s);", alt.c_str(), std_name.c_str(), gap, to_string(a->status));
    }
  }
  return {pass, detail.substr(1)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "equal-areas exactness", 1, equal_areas_exact},
      {2, "two-region baseline", 1, two_region_diameter},
      {3, "mobius formulas", 10, mobius_formulas},
      {4, "monotonicity and uniqueness", 30, monotone_and_unique},
      {5, "variation formula contracts", 60, variation_contracts},
      {6, "jacobi null direction", 10, rotation_null},
      {7, "stability verdicts", 60, stability_verdicts},
      {8, "three-region ordering", 300, three_region_ordering},
      {9, "profile bound", 300, profile_bound},
      {10, "alternate orderings", 600, alternate_orderings},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.pass && secs < c.limit_s;
    failed += !pass;
    std::printf("%s %2d %-28s %7.2fs  %s%s\n", pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str(),
                secs < c.limit_s ? "" : " (over time limit)");
    std::fflush(stdout);
  }
  return failed;
}
