#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "diskpart/commands.hpp"
#include "diskpart/fixtures.hpp"
#include "doctest.h"

using namespace diskpart;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "diskpart");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("diskpart_test_" + name)).string();
}

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string p = temp_path(name);
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli: solve emits a stationary document") {
  const Run r = run({"solve", "--areas", "equal"});
  REQUIRE(r.code == kExitOk);
  const GraphDocument d = parse_document(r.out);
  CHECK(d.metadata["provenance"] == "solve");
  const PartitionGraph g = to_partition_graph(d);
  CHECK(g.perimeter() == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(g.edges.size() == 3);
  for (const auto& e : g.edges) CHECK(is_straight(e.arc));

  // Emitted documents re-check with the same residuals.
  const PartitionGraph direct = to_partition_graph(solve_three_areas(AreaTargets{{kPi / 3, kPi / 3, kPi / 3}}));
  const auto a = check_stationary(g), b = check_stationary(direct);
  CHECK(std::abs(a.max_residual() - b.max_residual()) <= 1e-12);

  const Run c = run({"check", write_temp("equal.json", r.out)});
  CHECK(c.code == kExitOk);
  CHECK(json::parse(c.out)["stationary"] == true);
}

TEST_CASE("cli: solve with two areas and an svg") {
  const std::string svg = temp_path("two.svg");
  const Run r = run({"solve", "--areas", "1,1", "--normalize", "--svg", svg});
  REQUIRE(r.code == kExitOk);
  CHECK(to_partition_graph(parse_document(r.out)).perimeter() == doctest::Approx(2.0).epsilon(1e-12));
  const std::string first = slurp(svg);
  CHECK(first.find("<svg") != std::string::npos);
  REQUIRE(run({"solve", "--areas", "1,1", "--normalize", "--svg", svg}).code == kExitOk);
  CHECK(slurp(svg) == first);
}

TEST_CASE("cli: input errors exit 2") {
  CHECK(run({"solve", "--areas", "1,1,1"}).code == kExitInput);
  CHECK(run({"solve", "--areas", "1,x,1"}).code == kExitInput);
  CHECK(run({"solve", "--areas", "1,-1,1", "--normalize"}).code == kExitInput);
  CHECK(run({"solve", "--areas", "1,1,1,1", "--normalize"}).code == kExitInput);
  CHECK(run({"frobnicate"}).code == kExitInput);
  CHECK(run({"solve", "--bogus"}).code == kExitInput);
  CHECK(run({"evolve", "--template", "nope"}).code == kExitInput);
  CHECK(run({"check", temp_path("missing.json")}).code == kExitInput);
  CHECK(run({"check", write_temp("garbage.json", "{\"schema_version\": 1}")}).code == kExitInput);
  CHECK(run({"profile", "--n", "4"}).code == kExitInput);
}

TEST_CASE("cli: check rejects a perturbed graph with exit 4") {
  GraphDocument d = to_document(to_partition_graph(solve_three_areas(AreaTargets::normalized({1, 2, 3}))));
  for (auto& v : d.vertices)
    if (v.kind == VertexKind::Interior) v.pos.x += 0.01;
  const Run r = run({"check", write_temp("bent.json", serialize(d))});
  CHECK(r.code == kExitStationarity);
  const json rep = json::parse(r.out);
  CHECK(rep["stationary"] == false);
  CHECK(rep["max_residual"].get<double>() > 1e-6);

  const Run s = run({"stability", temp_path("bent.json")});
  CHECK(s.code == kExitStationarity);
}

TEST_CASE("cli: stability verdicts") {
  const Run st = run({"solve", "--areas", "2,1,0.5", "--normalize"});
  REQUIRE(st.code == kExitOk);
  const Run rs = run({"stability", write_temp("std.json", st.out), "--m", "24"});
  REQUIRE(rs.code == kExitOk);
  const json js = json::parse(rs.out);
  CHECK(js["verdict"] == "stable");
  CHECK(js["lambda_min"].get<double>() > -1e-6);

  auto verdict = [](const PartitionGraph& g, const std::string& name) {
    const Run r = run({"stability", write_temp(name, serialize(to_document(g))), "--m", "24"});
    REQUIRE(r.code == kExitOk);
    return json::parse(r.out);
  };
  const json ja = verdict(conf_a_fixture(), "conf_a.json");
  CHECK(ja["verdict"] == "unstable");
  bool two = false;
  for (const auto& c : ja["certificates"]) two |= c["kind"] == "two-boundary-3-components";
  CHECK(two);

  const json jh = verdict(hex_fixture(), "hex.json");
  CHECK(jh["verdict"] == "unstable");
  bool largest = false;
  for (const auto& c : jh["certificates"]) {
    largest |= c["kind"] == "largest-pressure-components";
    CHECK(c["Q"].get<double>() < 0.0);
  }
  CHECK(largest);
}

TEST_CASE("cli: evolve and topology events") {
  const Run r = run({"evolve", "--template", "conf_j", "--n-pts", "12"});
  REQUIRE(r.code == kExitOk);
  const json j = json::parse(r.out);
  CHECK(j["result"]["converged"] == true);
  CHECK(j["result"]["perimeter"].get<double>() == doctest::Approx(3.0).epsilon(1e-6));
  const GraphDocument d = from_json(j);
  CHECK_FALSE(d.exact());
  CHECK(run({"check", write_temp("evolved.json", r.out), "--tol", "1e-3"}).code == kExitOk);

  const Run e = run({"evolve", "--template", "conf_e", "--n-pts", "12"});
  CHECK(e.code == kExitTopology);
  const json p = json::parse(e.out);
  CHECK(p.contains("event"));
  CHECK_NOTHROW(from_json(p["graph"]));
}

TEST_CASE("cli: profile bound and symmetry") {
  const Run r = run({"profile", "--n", "3", "--grid", "7"});
  REQUIRE(r.code == kExitOk);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "a1,a2,a3,perimeter,error");
  std::map<std::vector<long>, double> by_areas;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string x; std::getline(ss, x, ',');) f.push_back(x);
    REQUIRE(f.size() >= 4);
    if (f[3].empty()) continue;
    const double I = std::stod(f[3]);
    CHECK(I <= 3.0 + 1e-9);
    std::vector<long> key;
    for (int i = 0; i < 3; ++i) key.push_back(std::lround(std::stod(f[i]) * 1e6));
    by_areas[key] = I;
  }
  CHECK(by_areas.size() > 5);
  int compared = 0;
  for (const auto& [key, I] : by_areas) {
    auto perm = key;
    std::sort(perm.begin(), perm.end());
    do {
      const auto it = by_areas.find(perm);
      if (it == by_areas.end()) continue;
      CHECK(std::abs(it->second - I) < 1e-9);
      ++compared;
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  CHECK(compared > static_cast<int>(by_areas.size()));
}

TEST_CASE("cli: compare ranks the standard template first") {
  const std::string csv = temp_path("compare.csv");
  const Run r = run({"compare", "--n", "4", "--n-pts", "16", "--csv", csv});
  REQUIRE(r.code == kExitOk);
  std::istringstream in(r.out);
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  CHECK(first.rfind("std4", 0) == 0);
  CHECK(slurp(csv).find("std4,") != std::string::npos);
}
