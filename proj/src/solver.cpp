#include "diskpart/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

namespace diskpart {

void AreaTargets::validate(double tol) const {
  if (a.empty()) throw DomainError("no area targets");
  double sum = 0.0;
  for (double x : a) {
    if (!std::isfinite(x) || !(x > 0.0)) throw DomainError("area targets must be positive");
    sum += x;
  }
  if (std::abs(sum - kPi) > tol) throw DomainError("area targets must sum to pi");
}

AreaTargets AreaTargets::normalized(std::vector<double> raw) {
  double sum = 0.0;
  for (double x : raw) {
    if (!std::isfinite(x) || !(x > 0.0)) throw DomainError("area targets must be positive");
    sum += x;
  }
  for (double& x : raw) x *= kPi / sum;
  return AreaTargets{std::move(raw)};
}

double bracketed_root(const std::function<double(double)>& f, double lo, double hi, double flo, double fhi,
                      double xtol, double ftol, int max_steps) {
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) throw SolverError("root is not bracketed", {lo, hi});
  int side = 0;
  for (int it = 0; it < max_steps; ++it) {
    double x = hi - fhi * (hi - lo) / (fhi - flo);
    if (!(x > std::min(lo, hi) && x < std::max(lo, hi))) x = 0.5 * (lo + hi);
    const double fx = f(x);
    if (std::abs(fx) <= ftol || std::abs(hi - lo) <= xtol) return x;
    if ((fx > 0) == (fhi > 0)) {
      hi = x;
      fhi = fx;
      if (side == -1) flo *= 0.5;
      side = -1;
    } else {
      lo = x;
      flo = fx;
      if (side == 1) fhi *= 0.5;
      side = 1;
    }
    // Plain bisection every few steps keeps the bracket shrinking.
    if (it % 6 == 5) {
      const double m = 0.5 * (lo + hi);
      const double fm = f(m);
      if (std::abs(fm) <= ftol) return m;
      if ((fm > 0) == (fhi > 0)) {
        hi = m;
        fhi = fm;
      } else {
        lo = m;
        flo = fm;
      }
      side = 0;
    }
  }
  throw SolverError("root finder did not converge", {lo, hi, flo, fhi});
}

namespace {

void reject_degenerate(const AreaTargets& t) {
  for (double x : t.a)
    if (x < kMinTargetArea) throw DegenerateTargetError("degenerate area target");
}

struct Bracket {
  double lo, hi, flo, fhi;
};

// Expands from x0 in both directions by doubling steps until f changes sign.
// Points where f throws DomainError are treated as the end of the search direction.
std::optional<Bracket> expand_bracket(const std::function<double(double)>& f, double x0, double step,
                                      int max_expansions = 60) {
  const double f0 = f(x0);
  if (f0 == 0.0) return Bracket{x0, x0, 0.0, 0.0};
  bool up_ok = true, down_ok = true;
  double up = x0, fup = f0, down = x0, fdown = f0;
  for (int k = 0; k < max_expansions && (up_ok || down_ok); ++k) {
    const double s = step * std::ldexp(1.0, k);
    if (up_ok) {
      try {
        const double x = x0 + s, fx = f(x);
        if ((fx > 0) != (fup > 0) || fx == 0.0) return Bracket{up, x, fup, fx};
        up = x;
        fup = fx;
      } catch (const DomainError&) {
        up_ok = false;
      }
    }
    if (down_ok) {
      try {
        const double x = x0 - s, fx = f(x);
        if ((fx > 0) != (fdown > 0) || fx == 0.0) return Bracket{x, down, fx, fdown};
        down = x;
        fdown = fx;
      } catch (const DomainError&) {
        down_ok = false;
      }
    }
  }
  return std::nullopt;
}

// Depth of the vertex on `s` at which region 3 has area a3.
double depth_for_area(const TwoRegionSplitter& s, double a3, double tol) {
  auto f = [&](double logd) {
    const StandardGraph g = complete_at_depth(s, std::exp(logd));
    return to_partition_graph(g).region_areas()[2] - a3;
  };
  const auto b = expand_bracket(f, 0.0, 0.5, 8);
  if (!b) throw DomainError("region 3 area is not attainable on this splitter");
  if (b->lo == b->hi) return std::exp(b->lo);
  return std::exp(bracketed_root(f, b->lo, b->hi, b->flo, b->fhi, 1e-15, tol));
}

}  // namespace

TwoRegionSplitter solve_two_areas(double a1, double a2) {
  const AreaTargets t{{a1, a2}};
  t.validate();
  reject_degenerate(t);
  auto f = [&](double h) { return splitter_left_area(splitter_from_curvature(h)) - a1; };
  const auto b = expand_bracket(f, 0.0, 1.0);
  if (!b) throw SolverError("could not bracket the splitter curvature");
  const double h = b->lo == b->hi ? b->lo : bracketed_root(f, b->lo, b->hi, b->flo, b->fhi, 1e-15, 1e-15);
  return splitter_from_curvature(h);
}

StandardGraph solve_three_areas(const AreaTargets& t, const ThreeAreaOptions& opt) {
  if (t.size() != 3) throw DomainError("solve_three_areas needs three targets");
  t.validate();
  reject_degenerate(t);
  const double a1 = t[0], a3 = t[2];
  const double tol = opt.tol;
  double last_h = 0.0, last_d = 0.0;
  auto f = [&](double h12) {
    const TwoRegionSplitter s = splitter_from_curvature(h12);
    const double d = depth_for_area(s, a3, tol * 0.1);
    last_h = h12;
    last_d = d;
    return to_partition_graph(complete_at_depth(s, d)).region_areas()[0] - a1;
  };
  // Seed: the two-region curvature that separates a1 from the rest is a decent start.
  double seed = 0.0;
  if (opt.h12_seed) {
    seed = *opt.h12_seed;
  } else {
    seed = (t[1] - t[0]) / 2.0;
  }
  std::optional<Bracket> b;
  try {
    b = expand_bracket(f, seed, 0.25);
  } catch (const DomainError& e) {
    throw SolverError(std::string("inner solve failed at the seed: ") + e.what(), {last_h, last_d});
  }
  if (!b) throw SolverError("could not bracket h12", {last_h, last_d});
  const double h12 = b->lo == b->hi ? b->lo : bracketed_root(f, b->lo, b->hi, b->flo, b->fhi, 1e-15, tol);
  const TwoRegionSplitter s = splitter_from_curvature(h12);
  const StandardGraph g = complete_at_depth(s, depth_for_area(s, a3, tol * 0.1));
  const auto areas = to_partition_graph(g).region_areas();
  for (int k = 0; k < 3; ++k)
    if (std::abs(areas[k] - t[k]) > kAreaTol)
      throw SolverError("area residual above tolerance", {h12, splitter_depth(s, g.interior_vertex), areas[0],
                                                          areas[1], areas[2]});
  return g;
}

double radii_upper_bound(const AreaTargets& t) {
  t.validate();
  return static_cast<double>(t.size());
}

namespace {

void grid_points(int n, int remaining, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == n - 1) {
    if (remaining >= 1) {
      cur.push_back(remaining);
      out.push_back(cur);
      cur.pop_back();
    }
    return;
  }
  for (int i = 1; i <= remaining - (n - 1 - static_cast<int>(cur.size())); ++i) {
    cur.push_back(i);
    grid_points(n, remaining - i, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<ProfilePoint> profile_sweep(int n, int grid, int threads) {
  if (n != 2 && n != 3) throw DomainError("profile_sweep supports n = 2 or 3");
  if (grid < 2) throw DomainError("grid must be at least 2");
  std::vector<std::vector<int>> pts;
  std::vector<int> cur;
  grid_points(n, grid - 1, cur, pts);

  std::vector<ProfilePoint> out(pts.size());
  auto work = [&](std::size_t k) {
    ProfilePoint& pp = out[k];
    for (int i : pts[k]) pp.areas.a.push_back(kPi * i / (grid - 1));
    try {
      if (n == 2) {
        const auto s = solve_two_areas(pp.areas[0], pp.areas[1]);
        pp.graph = to_partition_graph(s);
      } else {
        pp.graph = to_partition_graph(solve_three_areas(pp.areas));
      }
      pp.perimeter = pp.graph.perimeter();
    } catch (const std::exception& e) {
      pp.error = e.what();
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t nt = std::min<std::size_t>(threads > 0 ? threads : hw, std::max<std::size_t>(1, out.size()));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < nt; ++w)
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < out.size(); k = next++) work(k);
    });
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace diskpart
