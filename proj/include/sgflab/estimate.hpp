#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sgflab/dynamics.hpp"
#include "sgflab/simulate.hpp"
#include "sgflab/volatility.hpp"

namespace sgflab {

/// Default seed when none is configured.
inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

enum class Quantity {
  objective_gap,             // f(X(t)) − min f
  ergodic_objective_gap,     // f(X̄(t)) − min f
  averaged_objective_gap,    // (f∘X)‾(t) − min f
  sq_distance,               // dist(X(t), S)²
  operator_norm_sq,          // ‖M(X(t))‖²
  ergodic_operator_norm_sq,  // ‖M(X)‖²‾(t)
  distance_of_mean_average,  // dist(E[X̄(t)], S)
};

std::string_view quantity_name(Quantity q);
Quantity parse_quantity(std::string_view name);
const std::vector<Quantity>& all_quantities();

/// Everything needed to simulate independent paths of one experiment.
struct PathSetup {
  Dynamics dynamics;
  VolatilitySchedule volatility;
  Vector x0;
  double T = 1.0;
  int level = 10;
  std::size_t stride = 1;
  std::uint64_t seed = kDefaultSeed;

  BrownianPath path(std::uint64_t index) const { return sample_brownian(seed, index, T, level, volatility.m); }
  Trajectory run(std::uint64_t index) const { return simulate(dynamics, volatility, x0, T, level, path(index), stride); }
};

/// Monte-Carlo mean of a tagged quantity with 95% normal-approximation CIs.
struct GapSeries {
  Quantity quantity = Quantity::objective_gap;
  std::vector<double> times;
  std::vector<double> mean;
  std::vector<double> ci_halfwidth;
  std::vector<double> sample_std;
  std::size_t n_paths = 0;
};

/// Paths are grouped in fixed blocks of this many; each block is reduced in
/// path order and blocks are merged in block order, so results do not depend
/// on the worker count.
inline constexpr std::size_t kPathBlock = 64;

/// Simulates `n_paths` trajectories and aggregates each requested quantity.
std::vector<GapSeries> estimate(const PathSetup& setup, const std::vector<Quantity>& quantities,
                                std::size_t n_paths, unsigned workers = 1);
GapSeries estimate(const PathSetup& setup, Quantity quantity, std::size_t n_paths, unsigned workers = 1);

/// Per-path quantity series taken from a recorded trajectory.
std::vector<double> quantity_series(const Trajectory& tr, const Dynamics& dyn, Quantity q);

/// Running mean/variance with Chan's merge; deterministic given the order of
/// add()/merge() calls.
struct MomentAccumulator {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }
  void merge(const MomentAccumulator& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double na = static_cast<double>(n), nb = static_cast<double>(o.n);
    const double delta = o.mean - mean;
    const double nt = na + nb;
    mean += delta * nb / nt;
    m2 += o.m2 + delta * delta * na * nb / nt;
    n += o.n;
  }
  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  double ci95() const { return n > 0 ? 1.96 * std::sqrt(variance() / static_cast<double>(n)) : 0.0; }
};

}  // namespace sgflab
