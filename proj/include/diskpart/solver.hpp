#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "diskpart/partition_graph.hpp"
#include "diskpart/standard.hpp"

namespace diskpart {

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::vector<double> last_iterate = {})
      : std::runtime_error(what), last_iterate(std::move(last_iterate)) {}
  std::vector<double> last_iterate;
};

class DegenerateTargetError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Prescribed region areas; they must be positive and sum to pi.
struct AreaTargets {
  std::vector<double> a;

  std::size_t size() const { return a.size(); }
  double operator[](std::size_t i) const { return a[i]; }
  /// Throws DomainError for non-positive entries or a sum away from pi.
  void validate(double tol = 1e-9) const;
  /// Rescales positive entries to sum to pi.
  static AreaTargets normalized(std::vector<double> raw);
};

inline constexpr double kMinTargetArea = 1e-6;
inline constexpr double kAreaTol = 1e-9;

/// Root of a continuous f on [lo, hi] with f(lo), f(hi) of opposite signs.
/// Bisection safeguarded secant steps (Illinois variant).
double bracketed_root(const std::function<double(double)>& f, double lo, double hi, double flo,
                      double fhi, double xtol, double ftol, int max_steps = 200);

TwoRegionSplitter solve_two_areas(double a1, double a2);

struct ThreeAreaOptions {
  std::optional<double> h12_seed;
  double tol = 1e-12;
};

StandardGraph solve_three_areas(const AreaTargets& t, const ThreeAreaOptions& opt = {});

/// Length of the n-radii construction, an upper bound for the profile.
double radii_upper_bound(const AreaTargets& t);

struct ProfilePoint {
  AreaTargets areas;
  double perimeter = 0.0;
  PartitionGraph graph;
  std::string error;  // empty on success
  bool ok() const { return error.empty(); }
};

/// Exact profile over the interior points of the area simplex with spacing
/// pi / (grid - 1). Points are evaluated concurrently; output order is the
/// lexicographic order of the integer grid coordinates.
std::vector<ProfilePoint> profile_sweep(int n, int grid, int threads = 0);

}  // namespace diskpart
