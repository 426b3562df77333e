#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "diskpart/evolver.hpp"
#include "diskpart/solver.hpp"

namespace diskpart {

/// A candidate topology with a hand-authored seed geometry (artifact data, not
/// taken from any published coordinates). Region 0 is the highest-pressure region
/// in the three-region templates.
struct Template {
  std::string name;
  int regions = 0;
  std::string description;
  std::function<PartitionGraph()> seed;

  PlanarMap combinatorics() const { return seed().planar_map(); }
};

class InfeasibleInstantiation : public DomainError {
 public:
  using DomainError::DomainError;
};

/// conf_a .. conf_j, hex, std4, alt4, std5, alt5, std6, alt6a, alt6b, alt6c.
const std::vector<Template>& catalog();
std::vector<Template> catalog_for(int regions);
/// Throws DomainError for unknown names.
const Template& find_template(const std::string& name);

/// Seed discretized with n_pts segments per edge, then moved onto the target
/// areas by area-restoring continuation.
DiscreteGraph template_instantiate(const Template& t, const AreaTargets& areas, int n_pts = 64);

enum class CandidateStatus { Converged, NotConverged, TopologyEvent, Infeasible };
const char* to_string(CandidateStatus s);

struct CandidateResult {
  std::string name;
  CandidateStatus status = CandidateStatus::Infeasible;
  double perimeter = 0.0;
  int iterations = 0;
  double gradient_norm = 0.0;
  std::vector<double> multipliers;
  std::string message;
  std::optional<DiscreteGraph> graph;
};

struct CompareOptions {
  int n_pts = 48;
  RelaxOptions relax;
  int threads = 0;  // 0: hardware concurrency
};

/// Relaxes every template; instantiable ones sorted by perimeter (ties by name),
/// infeasible ones last.
std::vector<CandidateResult> compare_candidates(const AreaTargets& areas, const std::vector<Template>& templates,
                                                const CompareOptions& opts = {});

}  // namespace diskpart
