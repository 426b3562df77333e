#include "diskpart/commands.hpp"

#include <cstdio>
#include <random>
#include <sstream>

#include "diskpart/stability.hpp"

namespace diskpart {

using nlohmann::json;

AreaTargets parse_areas(const RunConfig& c) {
  if (c.areas == "equal") {
    if (c.n < 1) throw CommandError(kExitInput, "--n must be positive");
    return AreaTargets{std::vector<double>(c.n, kPi / c.n)};
  }
  if (c.areas == "random") {
    if (c.n < 1) throw CommandError(kExitInput, "--n must be positive");
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> U(0.5, 1.5);
    std::vector<double> raw(c.n);
    for (double& x : raw) x = U(rng);
    return AreaTargets::normalized(raw);
  }
  std::vector<double> raw;
  std::stringstream ss(c.areas);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      raw.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CommandError(kExitInput, "cannot parse area '" + item + "'");
    }
  }
  if (raw.empty()) throw CommandError(kExitInput, "no areas given");
  try {
    AreaTargets t = c.normalize ? AreaTargets::normalized(raw) : AreaTargets{raw};
    t.validate();
    return t;
  } catch (const DomainError& e) {
    throw CommandError(kExitInput, std::string("invalid areas: ") + e.what() + " (use --normalize to rescale)");
  }
}

namespace {

json areas_json(const AreaTargets& t) { return t.a; }

}  // namespace

GraphDocument cmd_solve(const RunConfig& c) {
  const AreaTargets t = parse_areas(c);
  if (t.size() != 2 && t.size() != 3) throw CommandError(kExitInput, "solve takes two or three areas");
  PartitionGraph g;
  try {
    if (t.size() == 2) {
      g = to_partition_graph(solve_two_areas(t[0], t[1]));
    } else {
      ThreeAreaOptions opt;
      if (c.seed != 0) {
        std::mt19937_64 rng(c.seed);
        opt.h12_seed = (t[1] - t[0]) / 2.0 + std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
      }
      g = to_partition_graph(solve_three_areas(t, opt));
    }
  } catch (const SolverError& e) {
    throw CommandError(kExitSolver, std::string("solver failed: ") + e.what(), json{{"last_iterate", e.last_iterate}});
  } catch (const DomainError& e) {
    throw CommandError(kExitInput, e.what());
  }
  GraphDocument d = to_document(g);
  d.metadata["provenance"] = "solve";
  d.metadata["areas"] = areas_json(t);
  d.metadata["perimeter"] = g.perimeter();
  return d;
}

nlohmann::json cmd_check(const GraphDocument& doc, const RunConfig& c) {
  PartitionGraph g;
  try {
    g = doc.exact() ? to_partition_graph(doc) : fitted_graph(to_discrete_graph(doc));
    g.validate();
  } catch (const std::exception& e) {
    throw CommandError(kExitInput, std::string("invalid graph: ") + e.what());
  }
  const StationarityReport r = check_stationary(g);
  json j = to_json(r);
  j["tol"] = c.tol;
  j["stationary"] = r.stationary(c.tol);
  if (!r.stationary(c.tol)) throw CommandError(kExitStationarity, "graph is not stationary", j);
  return j;
}

nlohmann::json cmd_stability(const GraphDocument& doc, const RunConfig& c) {
  RunConfig strict = c;
  strict.tol = 1e-6;
  cmd_check(doc, strict);
  const PartitionGraph g = doc.exact() ? to_partition_graph(doc) : fitted_graph(to_discrete_graph(doc));
  StabilityReport rep;
  try {
    rep = analyze_stability(g, c.m, c.modes);
  } catch (const PreconditionError& e) {
    throw CommandError(kExitStationarity, e.what(), to_json(check_stationary(g)));
  }
  json j{{"lambda", rep.modes},
         {"lambda_min", rep.lambda_min},
         {"constraint_rank", rep.constraint_rank},
         {"verdict", rep.verdict},
         {"m", c.m}};
  j["certificates"] = json::array();
  for (const auto& cert : rep.certificates)
    j["certificates"].push_back({{"kind", cert.kind},
                                 {"Q", cert.Q_value},
                                 {"support", cert.support},
                                 {"area_residual", cert.area_residual}});
  j["rotation_nodal"] = {{"count", rep.rotation_nodal.count}, {"clean", rep.rotation_nodal.clean()}};
  return j;
}

EvolveOutput cmd_evolve(const RunConfig& c) {
  const Template* t = nullptr;
  try {
    t = &find_template(c.template_name);
  } catch (const DomainError& e) {
    throw CommandError(kExitInput, e.what());
  }
  RunConfig rc = c;
  if (c.areas == "equal" || c.areas == "random") rc.n = t->regions;
  const AreaTargets a = parse_areas(rc);
  if (static_cast<int>(a.size()) != t->regions)
    throw CommandError(kExitInput, t->name + " needs " + std::to_string(t->regions) + " areas");
  if (c.n_pts < 2) throw CommandError(kExitInput, "--n-pts must be at least 2");
  if (!(c.tol > 0.0) || c.max_iters < 0) throw CommandError(kExitInput, "tolerances must be positive");
  DiscreteGraph g;
  try {
    g = template_instantiate(*t, a, c.n_pts);
  } catch (const DomainError& e) {
    throw CommandError(kExitInput, e.what());
  } catch (const AreaConstraintError& e) {
    throw CommandError(kExitSolver, e.what());
  }
  RelaxOptions o;
  o.tol = c.tol;
  o.max_iters = c.max_iters;
  EvolveOutput out;
  try {
    out.result = relax(g, o);
  } catch (const TopologyEventError& e) {
    GraphDocument d = to_document(g);
    json payload{{"event", {{"edge", e.edge}, {"iteration", e.iteration}, {"perimeter", e.perimeter}, {"message", e.what()}}},
                 {"graph", to_json(d)}};
    throw CommandError(kExitTopology, std::string("topology event: ") + e.what(), payload);
  } catch (const AreaConstraintError& e) {
    throw CommandError(kExitSolver, e.what());
  }
  out.document = to_document(g);
  out.document.metadata["provenance"] = "evolve";
  out.document.metadata["areas"] = areas_json(a);
  out.document.metadata["n_pts"] = c.n_pts;
  return out;
}

std::vector<ProfilePoint> cmd_profile(const RunConfig& c) {
  if (c.n != 2 && c.n != 3) throw CommandError(kExitInput, "profile supports n = 2 or 3");
  if (c.grid < 2) throw CommandError(kExitInput, "--grid must be at least 2");
  return profile_sweep(c.n, c.grid);
}

std::string profile_csv(const std::vector<ProfilePoint>& rows, int n) {
  std::ostringstream out;
  for (int i = 0; i < n; ++i) out << "a" << i + 1 << ",";
  out << "perimeter,error\n";
  char buf[64];
  for (const auto& p : rows) {
    for (double a : p.areas.a) {
      std::snprintf(buf, sizeof buf, "%.12f,", a);
      out << buf;
    }
    if (p.ok()) {
      std::snprintf(buf, sizeof buf, "%.12f", p.perimeter);
      out << buf;
    }
    out << ",\"" << p.error << "\"\n";
  }
  return out.str();
}

std::vector<CandidateResult> cmd_compare(const RunConfig& c) {
  const AreaTargets a = parse_areas(c);
  const auto templates = catalog_for(static_cast<int>(a.size()));
  if (templates.empty()) throw CommandError(kExitInput, "no templates for n = " + std::to_string(a.size()));
  CompareOptions o;
  o.n_pts = c.n_pts;
  o.relax.tol = c.tol;
  o.relax.max_iters = c.max_iters;
  return compare_candidates(a, templates, o);
}

std::string compare_table(const std::vector<CandidateResult>& rows) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-8s %14s  %-15s %s\n", "template", "perimeter", "status", "note");
  out << buf;
  for (const auto& r : rows) {
    if (r.status == CandidateStatus::Infeasible)
      std::snprintf(buf, sizeof buf, "%-8s %14s  %-15s %s\n", r.name.c_str(), "-", to_string(r.status), r.message.c_str());
    else
      std::snprintf(buf, sizeof buf, "%-8s %14.9f  %-15s %s\n", r.name.c_str(), r.perimeter, to_string(r.status),
                    r.message.c_str());
    out << buf;
  }
  return out.str();
}

std::string compare_csv(const std::vector<CandidateResult>& rows) {
  std::ostringstream out;
  out << "template,perimeter,converged,status,iterations\n";
  char buf[64];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.12f", r.perimeter);
    out << r.name << "," << buf << "," << (r.status == CandidateStatus::Converged ? "true" : "false") << ","
        << to_string(r.status) << "," << r.iterations << "\n";
  }
  return out.str();
}

nlohmann::json compare_json(const std::vector<CandidateResult>& rows) {
  json j = json::array();
  for (const auto& r : rows)
    j.push_back({{"template", r.name},
                 {"perimeter", r.perimeter},
                 {"converged", r.status == CandidateStatus::Converged},
                 {"status", to_string(r.status)},
                 {"iterations", r.iterations},
                 {"gradient_norm", r.gradient_norm},
                 {"multipliers", r.multipliers},
                 {"message", r.message}});
  return j;
}

}  // namespace diskpart
