#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>

#include "sgflab/operators.hpp"
#include "sgflab/potentials.hpp"
#include "sgflab/smoothing.hpp"

namespace sgflab {

enum class DriftKind { gradient, composite_smoothed, operator_field };

/// Drift of dX = −drift(X) dt + σ dW and the objective used for bookkeeping.
///
/// `objective` is the quantity whose gap is recorded: f for gradient drifts,
/// the true F = f + g for smoothed and operator drifts. `dist_to_solution`
/// measures distance to the solution set of the drift itself (argmin f,
/// argmin F_θ, or M⁻¹(0)).
struct Dynamics {
  DriftKind kind = DriftKind::gradient;
  std::string name;
  std::size_t dim = 0;
  std::function<void(std::span<const double>, std::span<double>)> drift;
  ScalarField objective;
  double objective_min = 0.0;
  ScalarField dist_to_solution;
  std::optional<Vector> solution;
  double drift_lipschitz = 0.0;
};

Dynamics gradient_dynamics(const SmoothPotential& f);

/// Drift ∇(f + g_θ); the objective reported is the unsmoothed f + g.
Dynamics smoothed_dynamics(const CompositeProblem& problem, double theta);

/// Drift M; the objective is `problem` (its gap is recorded alongside ‖M‖²).
Dynamics operator_dynamics(const CocoerciveOperator& op, const CompositeProblem& problem);

}  // namespace sgflab
