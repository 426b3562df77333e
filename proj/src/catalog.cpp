#include "diskpart/catalog.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "diskpart/fixtures.hpp"

namespace diskpart {

namespace {

double deg(double d) { return d * kPi / 180.0; }

// Straight-edge seed from junction coordinates and feet on the circle.
struct Seed {
  PartitionGraph g;

  explicit Seed(int regions) { g.regions.resize(regions); }
  int junction(double x, double y) { return g.add_vertex({x, y}, VertexKind::Interior); }
  int foot(double angle_deg) { return g.add_vertex(unit_vector(deg(angle_deg)), VertexKind::Boundary); }
  void edge(int a, int b, int left, int right) {
    g.add_edge({g.vertices[a].pos, g.vertices[b].pos, 0.0}, a, b, left, right);
  }
  // Junction to a new foot; the foot's counterclockwise side is `left`.
  void spoke(int a, double angle_deg, int left, int right) { edge(a, foot(angle_deg), left, right); }
};

// Regular k-gon of region `inner` with radial spokes; outer[i] lies between spokes i and i+1.
PartitionGraph ring(int k, double rho, double rot_deg, int inner, const std::vector<int>& outer, int regions) {
  Seed s(regions);
  std::vector<int> p(k);
  for (int i = 0; i < k; ++i) {
    const Point q = unit_vector(deg(rot_deg + 360.0 * i / k)) * rho;
    p[i] = s.junction(q.x, q.y);
  }
  for (int i = 0; i < k; ++i) s.edge(p[i], p[(i + 1) % k], inner, outer[i]);
  for (int i = 0; i < k; ++i) s.spoke(p[i], rot_deg + 360.0 * i / k, outer[i], outer[(i + k - 1) % k]);
  return s.g;
}

// Radius of a regular k-gon of the given area.
double polygon_radius(int k, double area) { return std::sqrt(2.0 * area / (k * std::sin(2.0 * kPi / k))); }

// Row of components separated by vertical edges with region 2 above and below.
PartitionGraph chain(const std::vector<int>& labels, double y, double half_width, double foot_deg) {
  Seed s(3);
  const int k = static_cast<int>(labels.size());
  std::vector<int> top(k - 1), bot(k - 1);
  for (int i = 0; i < k - 1; ++i) {
    const double x = k == 2 ? 0.0 : -half_width + 2.0 * half_width * i / (k - 2);
    top[i] = s.junction(x, y);
    bot[i] = s.junction(x, -y);
  }
  for (int i = 0; i < k - 1; ++i) s.edge(bot[i], top[i], labels[i], labels[i + 1]);
  for (int i = 0; i + 1 < k - 1; ++i) {
    s.edge(top[i], top[i + 1], 2, labels[i + 1]);
    s.edge(bot[i + 1], bot[i], 2, labels[i + 1]);
  }
  s.spoke(top[k - 2], foot_deg, 2, labels[k - 1]);
  s.spoke(top[0], 180 - foot_deg, labels[0], 2);
  s.spoke(bot[k - 2], -foot_deg, labels[k - 1], 2);
  s.spoke(bot[0], 180 + foot_deg, 2, labels[0]);
  return s.g;
}

PartitionGraph recolored(PartitionGraph g, const std::vector<int>& map) {
  for (auto& e : g.edges) {
    e.left = map[e.left];
    e.right = map[e.right];
  }
  return g;
}

PartitionGraph standard_seed() {
  Seed s(3);
  const int o = s.junction(0, 0);
  s.spoke(o, 90, 0, 2);
  s.spoke(o, 210, 1, 0);
  s.spoke(o, 330, 2, 1);
  return s.g;
}

// R1: boundary 3-component above an interior 4-component.
PartitionGraph conf_d_seed() {
  Seed s(3);
  const int T = s.junction(0, 0.5), Pt = s.junction(0, 0.15), Pr = s.junction(0.3, -0.15),
            Pb = s.junction(0, -0.45), Pl = s.junction(-0.3, -0.15);
  s.spoke(T, 150, 1, 0);
  s.spoke(T, 30, 0, 2);
  s.edge(Pt, T, 1, 2);
  s.edge(Pt, Pl, 0, 1);
  s.edge(Pt, Pr, 2, 0);
  s.edge(Pl, Pb, 0, 2);
  s.edge(Pr, Pb, 1, 0);
  s.spoke(Pl, 190, 2, 1);
  s.spoke(Pr, -10, 2, 1);
  s.spoke(Pb, 270, 1, 2);
  return s.g;
}

// R1: boundary 4-component above an interior 4-component.
PartitionGraph conf_e_seed() {
  Seed s(3);
  const int T1 = s.junction(-0.35, 0.45), T2 = s.junction(0.35, 0.45), Q1 = s.junction(-0.25, 0.05),
            Q2 = s.junction(0.25, 0.05), Q3 = s.junction(-0.3, -0.4), Q4 = s.junction(0.3, -0.4);
  s.spoke(T1, 150, 2, 0);
  s.spoke(T2, 30, 0, 2);
  s.edge(T1, T2, 0, 1);
  s.edge(Q1, T1, 2, 1);
  s.edge(Q2, T2, 1, 2);
  s.edge(Q1, Q2, 1, 0);
  s.edge(Q3, Q1, 2, 0);
  s.edge(Q4, Q2, 0, 2);
  s.edge(Q3, Q4, 0, 1);
  s.spoke(Q3, 225, 1, 2);
  s.spoke(Q4, 315, 2, 1);
  return s.g;
}

// R1: two interior 4-components joined by one edge.
PartitionGraph conf_f_seed() {
  Seed s(3);
  const int t1 = s.junction(-0.4, 0.2), l1 = s.junction(-0.6, 0), b1 = s.junction(-0.4, -0.2), r1 = s.junction(-0.2, 0);
  const int t2 = s.junction(0.4, 0.2), r2 = s.junction(0.6, 0), b2 = s.junction(0.4, -0.2), l2 = s.junction(0.2, 0);
  s.edge(r1, l2, 1, 2);
  s.edge(t1, r1, 1, 0);
  s.edge(l1, t1, 2, 0);
  s.edge(b1, l1, 1, 0);
  s.edge(r1, b1, 2, 0);
  s.spoke(t1, 110, 2, 1);
  s.spoke(l1, 180, 1, 2);
  s.spoke(b1, 250, 2, 1);
  s.edge(l2, t2, 1, 0);
  s.edge(t2, r2, 2, 0);
  s.edge(r2, b2, 1, 0);
  s.edge(b2, l2, 2, 0);
  s.spoke(t2, 70, 1, 2);
  s.spoke(r2, 0, 2, 1);
  s.spoke(b2, 290, 1, 2);
  return s.g;
}

// R1: boundary 4-component and boundary 3-component.
PartitionGraph conf_g_seed() {
  Seed s(3);
  const int T1 = s.junction(-0.35, 0.4), T2 = s.junction(0.35, 0.4), S = s.junction(0.1, -0.45);
  s.spoke(T1, 150, 2, 0);
  s.spoke(T2, 30, 0, 2);
  s.edge(T1, T2, 0, 1);
  s.spoke(T1, 200, 1, 2);
  s.edge(S, T2, 1, 2);
  s.spoke(S, 240, 0, 1);
  s.spoke(S, 300, 2, 0);
  return s.g;
}

PartitionGraph std4_seed() {
  Seed s(4);
  const int J1 = s.junction(-0.3, 0), J2 = s.junction(0.3, 0);
  s.edge(J1, J2, 0, 2);
  s.spoke(J1, 135, 1, 0);
  s.spoke(J1, 225, 2, 1);
  s.spoke(J2, 45, 0, 3);
  s.spoke(J2, 315, 3, 2);
  return s.g;
}

PartitionGraph std5_seed() {
  Seed s(5);
  const int J1 = s.junction(-0.35, -0.1), J2 = s.junction(0, -0.35), J3 = s.junction(0.35, -0.1);
  s.edge(J1, J2, 0, 2);
  s.edge(J2, J3, 0, 3);
  s.spoke(J1, 126, 1, 0);
  s.spoke(J1, 198, 2, 1);
  s.spoke(J2, 270, 3, 2);
  s.spoke(J3, 342, 4, 3);
  s.spoke(J3, 54, 0, 4);
  return s.g;
}

// Six boundary regions around a zigzag chain of four junctions.
PartitionGraph alt6a_seed() {
  Seed s(6);
  const int J1 = s.junction(-0.45, 0), J2 = s.junction(-0.15, 0), J3 = s.junction(0.15, 0), J4 = s.junction(0.45, 0);
  s.edge(J1, J2, 1, 3);
  s.edge(J2, J3, 1, 4);
  s.edge(J3, J4, 0, 4);
  s.spoke(J4, 30, 0, 5);
  s.spoke(J3, 90, 1, 0);
  s.spoke(J1, 150, 2, 1);
  s.spoke(J1, 210, 3, 2);
  s.spoke(J2, 270, 4, 3);
  s.spoke(J4, 330, 5, 4);
  return s.g;
}

// Interior quadrilateral with five boundary regions (one spoke forks).
PartitionGraph alt6b_seed() {
  Seed s(6);
  const double rho = polygon_radius(4, kPi / 6);
  std::vector<int> p(4);
  for (int i = 0; i < 4; ++i) {
    const Point q = unit_vector(deg(45 + 90 * i)) * rho;
    p[i] = s.junction(q.x, q.y);
  }
  const Point y = unit_vector(deg(45)) * 0.65;
  const int Y = s.junction(y.x, y.y);
  s.edge(p[0], p[1], 5, 1);
  s.edge(p[1], p[2], 5, 2);
  s.edge(p[2], p[3], 5, 3);
  s.edge(p[3], p[0], 5, 4);
  s.edge(p[0], Y, 1, 4);
  s.spoke(Y, 70, 1, 0);
  s.spoke(Y, 20, 0, 4);
  s.spoke(p[1], 135, 2, 1);
  s.spoke(p[2], 225, 3, 2);
  s.spoke(p[3], 315, 4, 3);
  return s.g;
}

// Interior triangle with five boundary regions (two spokes fork).
PartitionGraph alt6c_seed() {
  Seed s(6);
  const double rho = polygon_radius(3, kPi / 6);
  std::vector<int> p(3);
  for (int i = 0; i < 3; ++i) {
    const Point q = unit_vector(deg(90 + 120 * i)) * rho;
    p[i] = s.junction(q.x, q.y);
  }
  const Point y0 = unit_vector(deg(90)) * 0.65, y1 = unit_vector(deg(210)) * 0.65;
  const int Y0 = s.junction(y0.x, y0.y), Y1 = s.junction(y1.x, y1.y);
  s.edge(p[0], p[1], 5, 1);
  s.edge(p[1], p[2], 5, 3);
  s.edge(p[2], p[0], 5, 4);
  s.edge(p[0], Y0, 1, 4);
  s.spoke(Y0, 115, 1, 0);
  s.spoke(Y0, 65, 0, 4);
  s.edge(p[1], Y1, 3, 1);
  s.spoke(Y1, 235, 3, 2);
  s.spoke(Y1, 185, 2, 1);
  s.spoke(p[2], 330, 4, 3);
  return s.g;
}

std::vector<Template> build_catalog() {
  std::vector<Template> c;
  c.push_back({"conf_a", 3, "R1 has two boundary 3-components", [] { return conf_a_fixture(); }});
  c.push_back({"conf_b", 3, "R1 has two boundary 4-components around an interior 4-component of R2",
               [] { return recolored(conf_c_fixture(0.3), {1, 0, 2}); }});
  c.push_back({"conf_c", 3, "R1 is an interior 4-component", [] { return conf_c_fixture(); }});
  c.push_back({"conf_d", 3, "R1 has a boundary 3-component and an interior 4-component", conf_d_seed});
  c.push_back({"conf_e", 3, "R1 has a boundary 4-component and an interior 4-component", conf_e_seed});
  c.push_back({"conf_f", 3, "R1 has two interior 4-components joined by an edge", conf_f_seed});
  c.push_back({"conf_g", 3, "R1 has a boundary 4-component and a boundary 3-component", conf_g_seed});
  c.push_back({"conf_h", 3, "chain R1 | R2 | R1 | R2 between two components of R3",
               [] { return chain({0, 1, 0, 1}, 0.4, 0.3, 55); }});
  c.push_back({"conf_i", 3, "chain R2 | R1 | R2 | R1 | R2 between two components of R3",
               [] { return chain({1, 0, 1, 0, 1}, 0.4, 0.45, 45); }});
  c.push_back({"conf_j", 3, "standard graph", standard_seed});
  c.push_back({"hex", 3, "interior hexagon with six spokes", [] { return hex_fixture(); }});
  c.push_back({"std4", 4, "two junctions, four boundary regions", std4_seed});
  c.push_back({"alt4", 4, "three boundary regions around an interior triangle",
               [] { return ring(3, polygon_radius(3, kPi / 4), 90, 3, {0, 1, 2}, 4); }});
  c.push_back({"std5", 5, "three junctions, five boundary regions", std5_seed});
  c.push_back({"alt5", 5, "four boundary regions around an interior quadrilateral",
               [] { return ring(4, polygon_radius(4, kPi / 5), 45, 4, {0, 1, 2, 3}, 5); }});
  c.push_back({"std6", 6, "five boundary regions around an interior pentagon",
               [] { return ring(5, polygon_radius(5, kPi / 6), 90, 5, {0, 1, 2, 3, 4}, 6); }});
  c.push_back({"alt6a", 6, "six boundary regions around a zigzag of four junctions", alt6a_seed});
  c.push_back({"alt6b", 6, "five boundary regions around an interior quadrilateral", alt6b_seed});
  c.push_back({"alt6c", 6, "five boundary regions around an interior triangle", alt6c_seed});
  return c;
}

}  // namespace

const std::vector<Template>& catalog() {
  static const std::vector<Template> c = build_catalog();
  return c;
}

std::vector<Template> catalog_for(int regions) {
  std::vector<Template> out;
  for (const auto& t : catalog())
    if (t.regions == regions) out.push_back(t);
  return out;
}

const Template& find_template(const std::string& name) {
  for (const auto& t : catalog())
    if (t.name == name) return t;
  throw DomainError("unknown template '" + name + "'");
}

DiscreteGraph template_instantiate(const Template& t, const AreaTargets& areas, int n_pts) {
  if (static_cast<int>(areas.size()) != t.regions)
    throw DomainError("template " + t.name + " has " + std::to_string(t.regions) + " regions, got " +
                      std::to_string(areas.size()) + " areas");
  areas.validate();
  if (n_pts < 2) throw DomainError("n_pts must be at least 2");
  DiscreteGraph g = discretize(t.seed(), n_pts);
  g.template_name = t.name;
  g.validate();
  const std::vector<double> start = g.region_areas();
  double spread = 0.0;
  for (int r = 0; r < t.regions; ++r) {
    if (start[r] <= 0.0) throw InfeasibleInstantiation("seed of " + t.name + " has a region of non-positive area");
    spread = std::max(spread, std::abs(std::log(areas[r] / start[r])));
  }
  // Geometric interpolation of the targets, at most 20% relative change per stage.
  const int stages = std::max(1, static_cast<int>(std::ceil(spread / std::log(1.2))));
  for (int k = 1; k <= stages; ++k) {
    const double s = static_cast<double>(k) / stages;
    std::vector<double> target(t.regions);
    double sum = 0.0;
    for (int r = 0; r < t.regions; ++r) sum += target[r] = std::pow(start[r], 1 - s) * std::pow(areas[r], s);
    for (double& a : target) a *= kPi / sum;
    g.target_area = target;
    try {
      restore_areas(g, k == stages ? 1e-11 : 1e-9);
    } catch (const AreaConstraintError& e) {
      throw InfeasibleInstantiation("seed of " + t.name + " cannot reach the target areas: " + e.what());
    }
  }
  g.target_area = areas.a;
  return g;
}

const char* to_string(CandidateStatus s) {
  switch (s) {
    case CandidateStatus::Converged: return "converged";
    case CandidateStatus::NotConverged: return "not-converged";
    case CandidateStatus::TopologyEvent: return "topology-event";
    case CandidateStatus::Infeasible: return "infeasible";
  }
  return "?";
}

std::vector<CandidateResult> compare_candidates(const AreaTargets& areas, const std::vector<Template>& templates,
                                                const CompareOptions& opts) {
  std::vector<CandidateResult> out(templates.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < templates.size(); i = next++) {
      CandidateResult& r = out[i];
      r.name = templates[i].name;
      try {
        DiscreteGraph g = template_instantiate(templates[i], areas, opts.n_pts);
        try {
          const RelaxResult rr = relax(g, opts.relax);
          r.status = rr.converged ? CandidateStatus::Converged : CandidateStatus::NotConverged;
          r.perimeter = rr.perimeter;
          r.iterations = rr.iterations;
          r.gradient_norm = rr.gradient_norm;
          r.multipliers = rr.multipliers;
        } catch (const TopologyEventError& e) {
          r.status = CandidateStatus::TopologyEvent;
          r.perimeter = e.perimeter;
          r.iterations = e.iteration;
          r.message = e.what();
        } catch (const AreaConstraintError& e) {
          r.status = CandidateStatus::Infeasible;
          r.message = e.what();
        }
        if (r.status != CandidateStatus::Infeasible) r.graph = std::move(g);
      } catch (const std::exception& e) {
        r.status = CandidateStatus::Infeasible;
        r.message = e.what();
      }
    }
  };
  const int n = opts.threads > 0 ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (int k = 0; k < std::min<int>(n, static_cast<int>(templates.size())); ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  std::stable_sort(out.begin(), out.end(), [](const CandidateResult& a, const CandidateResult& b) {
    const bool fa = a.status == CandidateStatus::Infeasible, fb = b.status == CandidateStatus::Infeasible;
    if (fa != fb) return fb;
    if (!fa && a.perimeter != b.perimeter) return a.perimeter < b.perimeter;
    return a.name < b.name;
  });
  return out;
}

}  // namespace diskpart
