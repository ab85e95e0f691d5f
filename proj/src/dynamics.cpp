#include "sgflab/dynamics.hpp"

#include "sgflab/errors.hpp"

namespace sgflab {

Dynamics gradient_dynamics(const SmoothPotential& f) {
  Dynamics d;
  d.kind = DriftKind::gradient;
  d.name = f.name;
  d.dim = f.dim;
  d.drift = [grad = f.gradient](std::span<const double> x, std::span<double> out) {
    const Vector g = grad(x);
    std::copy(g.begin(), g.end(), out.begin());
  };
  d.objective = f.value;
  d.objective_min = f.min_value;
  d.dist_to_solution = f.dist_to_argmin;
  d.solution = f.minimizer;
  d.drift_lipschitz = f.lipschitz_L;
  return d;
}

Dynamics smoothed_dynamics(const CompositeProblem& problem, double theta) {
  if (!problem.min_value) throw Unsupported("smoothed_dynamics: min of f + g is not known in closed form");
  const CompositeSmoothed cs = make_composite_smoothed(problem.f, problem.g, theta);
  Dynamics d;
  d.kind = DriftKind::composite_smoothed;
  d.name = cs.combined.name;
  d.dim = cs.combined.dim;
  d.drift = [grad = cs.combined.gradient](std::span<const double> x, std::span<double> out) {
    const Vector g = grad(x);
    std::copy(g.begin(), g.end(), out.begin());
  };
  d.objective = [problem](std::span<const double> x) { return problem.value(x); };
  d.objective_min = *problem.min_value;
  d.dist_to_solution = cs.combined.dist_to_argmin;
  d.solution = cs.combined.minimizer;
  d.drift_lipschitz = cs.combined.lipschitz_L;
  return d;
}

Dynamics operator_dynamics(const CocoerciveOperator& op, const CompositeProblem& problem) {
  if (op.dim != problem.f.dim) throw InvalidProblem("operator_dynamics: dimension mismatch");
  if (!op.zero_set_dist) throw Unsupported("operator_dynamics: operator zero set unknown");
  if (!problem.min_value) throw Unsupported("operator_dynamics: min of f + g is not known in closed form");
  Dynamics d;
  d.kind = DriftKind::operator_field;
  d.name = op.name;
  d.dim = op.dim;
  d.drift = [apply = op.apply](std::span<const double> x, std::span<double> out) {
    const Vector m = apply(x);
    std::copy(m.begin(), m.end(), out.begin());
  };
  d.objective = [problem](std::span<const double> x) { return problem.value(x); };
  d.objective_min = *problem.min_value;
  d.dist_to_solution = *op.zero_set_dist;
  d.solution = op.zero;
  d.drift_lipschitz = 1.0 / op.rho;
  return d;
}

}  // namespace sgflab
