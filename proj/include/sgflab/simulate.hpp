#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "sgflab/brownian.hpp"
#include "sgflab/dynamics.hpp"
#include "sgflab/volatility.hpp"

namespace sgflab {

/// States whose norm exceeds this are reported as divergent.
inline constexpr double kDivergenceGuard = 1e12;

using SigmaAction = std::function<void(std::span<const double> dW, std::span<double> out)>;

/// x − h·drift + σ·dW. Throws NumericFailure (carrying `step`) on non-finite
/// inputs or output.
Vector em_step(std::span<const double> x, std::span<const double> drift, double h, const SigmaAction& sigma,
               std::span<const double> dW, std::size_t step = 0);
/// Scalar volatility σ·I.
Vector em_step(std::span<const double> x, std::span<const double> drift, double h, double sigma,
               std::span<const double> dW, std::size_t step = 0);

enum class Interpolation { piecewise_constant, piecewise_linear };

/// Recorded Euler–Maruyama trajectory. Running averages are left-Riemann sums
/// over the full simulation grid, i.e. exact time averages of the piecewise
/// constant interpolant X̂; at t = 0 they equal the initial value.
struct Trajectory {
  int level = 0;
  double step_size = 0.0;
  std::size_t stride = 1;
  Interpolation mode = Interpolation::piecewise_constant;

  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<Vector> running_average;             // X̄(t)
  std::vector<double> running_objective_average;   // (f∘X)‾(t)
  std::vector<double> objective_gap;               // f(X(t)) − min f
  std::vector<double> drift_norm_sq;               // ‖drift(X(t))‖²
  std::vector<double> running_drift_norm_sq_average;
  std::vector<double> running_norm_average;        // ‖X‖‾(t)
  std::vector<double> running_sqnorm_average;      // ‖X‖²‾(t)
  double max_noise_frobenius_sq = 0.0;

  std::size_t size() const noexcept { return times.size(); }
};

/// Explicit Euler–Maruyama sweep of dX = −drift(X)dt + σ(t,X)dW driven by
/// `path`, recording every `record_stride` steps (and the final step).
Trajectory simulate(const Dynamics& dyn, const VolatilitySchedule& vol, std::span<const double> x0, double T,
                    int level, const BrownianPath& path, std::size_t record_stride = 1);

/// Piecewise-constant X̂(t) and piecewise-linear X̃(t) at time t. Needs a
/// stride-1 trajectory. When the noise is active, `fine_path` must be the
/// driving path refined to a level at which t is a grid point.
std::pair<Vector, Vector> interpolants(const Trajectory& traj, const Dynamics& dyn, const VolatilitySchedule& vol,
                                       const BrownianPath* fine_path, double t);

/// CSV with header t,x_0..x_{d-1},favg,gap.
void write_trajectory_csv(const Trajectory& traj, std::ostream& os);

}  // namespace sgflab
