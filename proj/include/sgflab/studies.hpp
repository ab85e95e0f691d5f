#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "sgflab/bounds.hpp"
#include "sgflab/estimate.hpp"
#include "sgflab/fit.hpp"
#include "sgflab/operators.hpp"
#include "sgflab/smoothing.hpp"

namespace sgflab {

// ---- strong order -------------------------------------------------------

struct StrongOrderConfig {
  Dynamics dynamics;
  VolatilitySchedule volatility;
  Vector x0;
  double T = 1.0;
  std::vector<int> levels;  // coarse levels, ascending
  int ref_level = 0;        // reference level; must exceed every coarse level
  std::size_t n_paths = 1000;
  std::uint64_t seed = kDefaultSeed;
  unsigned workers = 1;
};

struct StrongOrderLevel {
  int level = 0;
  double h = 0.0;
  double state_ms = 0.0;  // E sup_k ‖X_L(t_k) − X_ref(t_k)‖²
  double state_ms_ci = 0.0;
  double state_rms = 0.0;  // √state_ms
  double objective_error = 0.0;  // E|f(X̄_L(T)) − f(X̄_ref(T))|
  double objective_error_ci = 0.0;
};

struct StrongOrderResult {
  std::vector<StrongOrderLevel> levels;
  int ref_level = 0;
  std::size_t n_paths = 0;
  LineFit state_order{};      // slope of log state_rms against log h
  LineFit objective_order{};  // slope of log objective_error against log h
  bool objective_monotone = false;
};

/// Couples every coarse level with the reference level through the same
/// Brownian path (the reference path coarsened exactly).
StrongOrderResult strong_order_study(const StrongOrderConfig& cfg);

// ---- θ sweep ------------------------------------------------------------

struct ThetaSweepConfig {
  CompositeProblem problem;
  VolatilitySchedule volatility;
  Vector x0;
  double T = 100.0;
  int level = 13;
  std::size_t stride = 64;
  std::size_t n_paths = 1000;
  std::uint64_t seed = kDefaultSeed;
  unsigned workers = 1;
  std::vector<double> thetas;
  double epsilon = 0.01;
};

struct ThetaSweepRow {
  double theta = 0.0;
  double C0 = 0.0;  // dist(X₀, argmin F_θ)
  GapSeries series;  // E[F(X̄_θ(t)) − min F]
  BoundReport report;
};

struct ThetaSweepResult {
  std::vector<ThetaSweepRow> rows;
  double L0 = 0.0;
  double sigma_star_sq = 0.0;
  ThetaSchedule schedule{};
  std::optional<ArgminRadius> coercive_radius;  // from the coercivity data of F
};

/// Requires g with a finite Lipschitz constant.
ThetaSweepResult theta_sweep(const ThetaSweepConfig& cfg);

// ---- cocoercive operator ---------------------------------------------------

struct CocoConfig {
  CompositeProblem problem;
  VolatilitySchedule volatility;
  Vector x0;
  double T = 20.0;
  int level = 12;
  std::size_t stride = 16;
  std::size_t n_paths = 1000;
  std::uint64_t seed = kDefaultSeed;
  unsigned workers = 1;
  std::vector<double> mus;  // step sizes μ
  std::size_t samples = 10000;
  double check_radius = 5.0;
};

struct CocoRow {
  double mu = 0.0;
  double rho = 0.0;
  BooleanReport cocoercivity;
  double zero_residual = 0.0;  // ‖M(x*)‖
  double dist0_sq = 0.0;
  GapSeries series;  // time average of ‖M(X)‖²
  BoundReport report;
};

std::vector<CocoRow> coco_study(const CocoConfig& cfg);

// ---- conjecture -----------------------------------------------------------

struct ConjectureConfig {
  double r = 4.0;
  std::size_t dim = 1;
  double sigma0 = 0.5;
  Vector x0;
  double T = 100.0;
  int level = 14;
  std::size_t stride = 16;
  std::size_t n_paths = 500;
  std::uint64_t seed = kDefaultSeed;
  unsigned workers = 1;
};

struct ConjectureResult {
  double q = 0.0;
  double b = 0.0;
  double alpha = 0.0;
  bool exponential_branch = false;
  GapSeries series;  // E[f(X(t)) − min f]
  RateFit fit;
  double conjectured_exponent = 0.0;
  double distance = 0.0;  // |fit.exponent − conjectured|
};

/// Exploratory: fits the decay of E[f(X) − min f] for f = ‖x‖^r with
/// σ∞(t) = σ₀(1+t)^{−b/(2(b−1))}, b = 2q.
ConjectureResult conjecture_study(const ConjectureConfig& cfg);

// ---- almost-sure decay proxy ----------------------------------------------

struct DecaySpotCheck {
  std::size_t n_paths = 0;
  std::size_t n_decreased = 0;
  double fraction = 0.0;
  bool passed = false;  // fraction ≥ 0.9
};

/// Statistical proxy for pathwise o(1/t) decay: per path, the mean of t·gap(t)
/// over the last quarter of the horizon is compared with that over the first.
DecaySpotCheck decay_spot_check(const PathSetup& setup, std::size_t n_paths, unsigned workers = 1);

}  // namespace sgflab
