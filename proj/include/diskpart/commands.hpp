#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "diskpart/catalog.hpp"
#include "diskpart/io.hpp"
#include "diskpart/solver.hpp"

namespace diskpart {

enum ExitCode : int { kExitOk = 0, kExitInput = 2, kExitSolver = 3, kExitStationarity = 4, kExitTopology = 5 };

/// Failure carrying the process exit code and an optional JSON payload for stdout.
class CommandError : public std::runtime_error {
 public:
  CommandError(int code, const std::string& what, nlohmann::json payload = nullptr)
      : std::runtime_error(what), code(code), payload(std::move(payload)) {}
  int code;
  nlohmann::json payload;
};

struct RunConfig {
  std::string command;
  std::string areas = "equal";  // comma list, "equal" or "random"
  bool normalize = false;
  std::string template_name = "conf_j";
  std::string input;  // graph document path for stability / check
  int n = 3;
  int m = 64;
  int n_pts = 64;
  int grid = 11;
  int modes = 4;
  double tol = 1e-6;
  int max_iters = 500;
  std::uint64_t seed = 0;  // nonzero: perturbed solver start; also drives "random" areas
  std::string json_path, svg_path, csv_path;
};

/// "equal" gives n equal areas, "random" n uniform draws (seeded) normalized,
/// otherwise a comma list, rescaled when normalize is set. Throws CommandError(2).
AreaTargets parse_areas(const RunConfig& c);

GraphDocument cmd_solve(const RunConfig& c);
/// Spectrum and certificates; CommandError(4) with the stationarity report for
/// non-stationary input.
nlohmann::json cmd_stability(const GraphDocument& doc, const RunConfig& c);

struct EvolveOutput {
  GraphDocument document;
  RelaxResult result;
};
/// CommandError(5) with the event payload on a topology event.
EvolveOutput cmd_evolve(const RunConfig& c);

std::vector<ProfilePoint> cmd_profile(const RunConfig& c);
std::string profile_csv(const std::vector<ProfilePoint>& rows, int n);

std::vector<CandidateResult> cmd_compare(const RunConfig& c);
std::string compare_table(const std::vector<CandidateResult>& rows);
std::string compare_csv(const std::vector<CandidateResult>& rows);
nlohmann::json compare_json(const std::vector<CandidateResult>& rows);

/// Stationarity report of a document; CommandError(4) when residuals exceed tol.
nlohmann::json cmd_check(const GraphDocument& doc, const RunConfig& c);

/// Full command line: artifacts on out, diagnostics on err; returns the exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace diskpart
