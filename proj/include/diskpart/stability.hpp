#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "diskpart/partition_graph.hpp"

namespace diskpart {

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kDefaultNodes = 64;

/// Normal components u_e sampled at m+1 equally spaced arc-length nodes on every
/// edge, ordered from v0 to v1; u_e is taken against the left normal of the
/// edge, i.e. the normal pointing into its left region.
struct DiscretizedVariation {
  int m = kDefaultNodes;
  std::vector<Eigen::VectorXd> u;
  /// Optional full velocity at each vertex (tangential part included).
  std::vector<std::optional<Point>> vertex_velocity;

  double at(int edge, int node) const { return u[edge](node); }
};

using EdgeFunction = std::function<double(int edge, double s)>;  // s in [0, 1]

DiscretizedVariation zero_variation(const PartitionGraph& g, int m = kDefaultNodes);
DiscretizedVariation sample_variation(const PartitionGraph& g, const EdgeFunction& f, int m = kDefaultNodes);
/// Normal components of a vector field.
DiscretizedVariation sample_field(const PartitionGraph& g, const std::function<Point(Point)>& X,
                                  int m = kDefaultNodes);

/// Largest violation of u_ij + u_jk + u_ki = 0 at interior vertices.
double admissibility_residual(const PartitionGraph& g, const DiscretizedVariation& u);

/// Vertex velocity: the stored one, otherwise reconstructed from the normal
/// components (least squares at interior vertices, along the circle at
/// boundary vertices).
Point vertex_velocity(const PartitionGraph& g, const DiscretizedVariation& u, int v);

double first_variation_length(const PartitionGraph& g, const DiscretizedVariation& u);
std::vector<double> area_derivatives(const PartitionGraph& g, const DiscretizedVariation& u);

/// Q, M and A act on the full nodal space (edge-major, m+1 nodes per edge); P maps
/// the admissible coordinates (interior vertex velocities, boundary vertex
/// values, interior nodes) into it.
struct IndexFormMatrix {
  int m = kDefaultNodes;
  int edge_count = 0;
  Eigen::MatrixXd Q;
  Eigen::MatrixXd M;
  Eigen::MatrixXd A;
  Eigen::MatrixXd P;
  std::vector<int> vertex_column;  // first admissible coordinate of each vertex
  std::vector<int> vertex_dofs;    // 2 for interior vertices, 1 for boundary vertices

  int node_index(int edge, int node) const { return edge * (m + 1) + node; }
  Eigen::VectorXd flatten(const DiscretizedVariation& u) const;
  DiscretizedVariation unflatten(const Eigen::VectorXd& x) const;
};

/// Coefficient (h_ki + h_kj)/sqrt(3) of edge `e` at its interior endpoint `v`.
double vertex_coefficient(const PartitionGraph& g, int e, int v);

/// Throws PreconditionError unless check_stationary residuals are below `stationary_tol`.
IndexFormMatrix assemble_index_form(const PartitionGraph& g, int m = kDefaultNodes, double stationary_tol = 1e-6);
double quadratic_form(const IndexFormMatrix& q, const DiscretizedVariation& u);

struct ConstrainedSpectrum {
  std::vector<double> eigenvalues;
  std::vector<DiscretizedVariation> modes;  // M-orthonormal
  int constraint_rank = 0;
  int constraint_rows = 0;
  bool rank_deficient() const { return constraint_rank < constraint_rows; }
};

ConstrainedSpectrum constrained_min_eigenvalue(const IndexFormMatrix& q, int k = 1);

DiscretizedVariation rotation_jacobi(const PartitionGraph& g, int m = kDefaultNodes);
/// max |u'' + h^2 u| over the nodes, fourth-order differences.
double jacobi_residual(const PartitionGraph& g, const DiscretizedVariation& u);

struct NodalReport {
  int count = 0;
  bool identically_zero = false;
  std::vector<int> zero_vertices;                // vertices where some incident u vanishes
  std::vector<std::pair<int, int>> zero_nodes;   // (edge, node) ties with |u| < 1e-10
  bool clean() const { return !identically_zero && zero_vertices.empty(); }
};

NodalReport nodal_region_count(const PartitionGraph& g, const DiscretizedVariation& u, double zero_tol = 1e-10);

/// Zero-sum pressures fitted to h_e = p_left - p_right by least squares.
std::vector<double> fitted_pressures(const PartitionGraph& g);

struct Certificate {
  std::string kind;
  double Q_value = 0.0;
  std::vector<int> support;  // edge ids
  DiscretizedVariation u;
  double area_residual = 0.0;
};

struct ComponentBoundReport {
  int region = -1;
  int components = 0;
  int nonhexagonal_components = 0;
  bool bound_satisfied = true;
  std::optional<Certificate> certificate;
};

ComponentBoundReport largest_pressure_component_bound(const PartitionGraph& g, int m = kDefaultNodes);

/// Boundary 3-components of one region, deformed by sliding their vertex
/// along the third edge; empty when no region has two of them or when no
/// area-preserving combination exists.
std::optional<Certificate> two_boundary_three_components(const PartitionGraph& g, int m = kDefaultNodes);

/// +1/-1 indicator pair on two congruent interior components of one region.
std::optional<Certificate> congruent_component_swap(const PartitionGraph& g, int m = kDefaultNodes);

struct StabilityReport {
  double lambda_min = 0.0;
  std::vector<double> modes;
  int constraint_rank = 0;
  std::vector<Certificate> certificates;
  NodalReport rotation_nodal;
  std::string verdict;  // "stable", "unstable" or "inconclusive"
};

StabilityReport analyze_stability(const PartitionGraph& g, int m = kDefaultNodes, int modes = 4);

}  // namespace diskpart
