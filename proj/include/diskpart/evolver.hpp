#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "diskpart/discrete_graph.hpp"

namespace diskpart {

/// An edge (or one of its segments) shrank below the minimum length.
class TopologyEventError : public std::runtime_error {
 public:
  TopologyEventError(int edge, int iteration, double perimeter, const std::string& what)
      : std::runtime_error(what), edge(edge), iteration(iteration), perimeter(perimeter) {}
  int edge;
  int iteration;
  double perimeter;
};

class AreaConstraintError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RelaxOptions {
  double step = 0.05;           // largest node displacement per iteration
  int max_iters = 500;
  double tol = 1e-6;            // constrained gradient norm (max abs, per node)
  double min_edge_length = 1e-3;
  double graze_cosine = 0.05;   // edge meeting the circle at under ~3 degrees
  double area_tol = 1e-11;
};

struct RelaxResult {
  double perimeter = 0.0;
  std::vector<double> multipliers;  // zero-sum gauge
  int iterations = 0;
  bool converged = false;
  double gradient_norm = 0.0;
  std::vector<double> perimeter_history;  // after every accepted step
  double max_area_error = 0.0;            // worst |A_i - a_i| over accepted steps
};

/// Damped Gauss-Newton on the area constraints; throws AreaConstraintError.
void restore_areas(DiscreteGraph& g, double tol = 1e-11, int max_iters = 60);

/// Constrained gradient norm and zero-sum multipliers at the current geometry.
double constrained_gradient(const DiscreteGraph& g, std::vector<double>* multipliers = nullptr);

/// Projected (Newton-preconditioned) descent on total length at fixed areas.
RelaxResult relax(DiscreteGraph& g, const RelaxOptions& opts = {});

struct PressureEstimate {
  std::vector<double> pressures;        // zero-sum gauge
  std::vector<double> edge_curvatures;  // circle fit, w.r.t. the left normal
  double fit_residual = 0.0;            // max |p_left - p_right - h_e|
  std::vector<double> junction_balance; // |h_ij + h_jk + h_ki| per interior junction
  bool unrelaxed = false;
};

PressureEstimate pressures_estimate(const DiscreteGraph& g, double relaxed_tol = 1e-6);

struct FourComponent {
  int face = -1;
  int region = -1;
  bool boundary = false;
  bool cocircular = false;
  std::vector<Point> centers;  // centers of the tested opposite pair (empty when straight)
};

struct CocircularChain {
  std::vector<int> members;  // indices into CocircularReport::components, in chain order
  bool cocircular = false;
  bool boundary_ends = false;
  bool outside_single_region = false;
  bool slide_available = false;
  /// d(c_i, c_i+1) followed by d(c_1, 0) and d(c_n, 0).
  std::vector<double> preserved_distances;
};

struct CocircularReport {
  std::vector<FourComponent> components;
  std::vector<CocircularChain> chains;
  bool empty() const { return components.empty(); }
};

CocircularReport cocircular_chain_report(const DiscreteGraph& g, double tol = 1e-3);

}  // namespace diskpart
