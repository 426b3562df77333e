#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "diskpart/commands.hpp"

namespace diskpart {

namespace {

using nlohmann::json;

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw CommandError(kExitInput, "cannot write " + path);
  f << text;
}

GraphDocument read_document(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw CommandError(kExitInput, "cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  try {
    return parse_document(ss.str());
  } catch (const DocumentError& e) {
    throw CommandError(kExitInput, path + ": " + e.what());
  }
}

// The artifact goes to the requested file, or to stdout when none was given.
void emit(std::ostream& out, const std::string& path, const std::string& text) {
  if (path.empty())
    out << text << (text.empty() || text.back() == '\n' ? "" : "\n");
  else
    write_file(path, text);
}

int dispatch(const RunConfig& c, std::ostream& out, std::ostream& err) {
  char buf[128];
  if (c.command == "solve") {
    const GraphDocument d = cmd_solve(c);
    emit(out, c.json_path, serialize(d));
    if (!c.svg_path.empty()) write_file(c.svg_path, render_svg(to_partition_graph(d)));
    std::snprintf(buf, sizeof buf, "perimeter %.12f", d.metadata["perimeter"].get<double>());
    err << buf << "\n";
  } else if (c.command == "stability") {
    const json rep = cmd_stability(read_document(c.input), c);
    emit(out, c.json_path, rep.dump(2));
    std::snprintf(buf, sizeof buf, "lambda_min %.3e", rep["lambda_min"].get<double>());
    err << buf << ", verdict " << rep["verdict"].get<std::string>() << "\n";
  } else if (c.command == "evolve") {
    const EvolveOutput r = cmd_evolve(c);
    json j = to_json(r.document);
    j["result"] = to_json(r.result);
    emit(out, c.json_path, j.dump(2));
    if (!c.svg_path.empty()) write_file(c.svg_path, render_svg(to_discrete_graph(r.document)));
    std::snprintf(buf, sizeof buf, "perimeter %.9f, %s after %d iterations", r.result.perimeter,
                  r.result.converged ? "converged" : "not converged", r.result.iterations);
    err << buf << "\n";
  } else if (c.command == "profile") {
    const auto rows = cmd_profile(c);
    emit(out, c.csv_path, profile_csv(rows, c.n));
    if (!c.json_path.empty()) {
      json j = json::array();
      for (const auto& p : rows) j.push_back({{"areas", p.areas.a}, {"perimeter", p.perimeter}, {"error", p.error}});
      write_file(c.json_path, j.dump(2));
    }
  } else if (c.command == "compare") {
    const auto rows = cmd_compare(c);
    out << compare_table(rows);
    if (!c.json_path.empty()) write_file(c.json_path, compare_json(rows).dump(2));
    if (!c.csv_path.empty()) write_file(c.csv_path, compare_csv(rows));
  } else if (c.command == "check") {
    const json rep = cmd_check(read_document(c.input), c);
    emit(out, c.json_path, rep.dump(2));
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Least-perimeter partitions of the unit disk"};
  app.require_subcommand(1);
  RunConfig c;

  auto areas = [&](CLI::App* s) {
    s->add_option("--areas", c.areas, "comma-separated areas, 'equal' or 'random'")->capture_default_str();
    s->add_flag("--normalize", c.normalize, "rescale the areas to sum to pi");
    s->add_option("--n", c.n, "number of regions")->capture_default_str();
    s->add_option("--seed", c.seed, "seed for random areas and perturbed starts")->capture_default_str();
  };
  auto relax_opts = [&](CLI::App* s) {
    s->add_option("--n-pts", c.n_pts, "segments per polyline edge")->capture_default_str();
    s->add_option("--tol", c.tol, "constrained gradient tolerance")->capture_default_str();
    s->add_option("--max-iters", c.max_iters, "iteration limit")->capture_default_str();
  };

  auto* solve = app.add_subcommand("solve", "exact standard graph for two or three areas");
  areas(solve);
  solve->add_option("--json", c.json_path, "write the graph document here instead of stdout");
  solve->add_option("--svg", c.svg_path, "render to this SVG file");

  auto* stability = app.add_subcommand("stability", "second-variation spectrum of a stationary graph");
  stability->add_option("input", c.input, "graph document")->required();
  stability->add_option("--m", c.m, "quadrature nodes per edge")->capture_default_str();
  stability->add_option("--modes", c.modes, "eigenvalues to report")->capture_default_str();
  stability->add_option("--json", c.json_path, "write the report here");

  auto* evolve = app.add_subcommand("evolve", "relax a catalog template");
  evolve->add_option("--template", c.template_name, "template name")->capture_default_str();
  areas(evolve);
  relax_opts(evolve);
  evolve->add_option("--json", c.json_path, "write the result document here");
  evolve->add_option("--svg", c.svg_path, "render to this SVG file");

  auto* profile = app.add_subcommand("profile", "exact perimeters over the area simplex");
  profile->add_option("--n", c.n, "2 or 3")->capture_default_str();
  profile->add_option("--grid", c.grid, "grid points per side")->capture_default_str();
  profile->add_option("--csv", c.csv_path, "write the CSV here");
  profile->add_option("--json", c.json_path, "also write JSON rows");

  auto* compare = app.add_subcommand("compare", "relax every template and rank by perimeter");
  areas(compare);
  relax_opts(compare);
  compare->add_option("--json", c.json_path, "write the ranking as JSON");
  compare->add_option("--csv", c.csv_path, "write the ranking as CSV");

  auto* check = app.add_subcommand("check", "stationarity residuals of a graph document");
  check->add_option("input", c.input, "graph document")->required();
  check->add_option("--tol", c.tol, "largest accepted residual")->capture_default_str();
  check->add_option("--json", c.json_path, "write the report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }
  for (auto* s : app.get_subcommands()) c.command = s->get_name();

  try {
    return dispatch(c, out, err);
  } catch (const CommandError& e) {
    if (!e.payload.is_null()) emit(out, c.command == "compare" ? "" : c.json_path, e.payload.dump(2));
    err << "error: " << e.what() << "\n";
    return e.code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolver;
  }
}

}  // namespace diskpart
