#pragma once

#include <span>

#include "sgflab/potentials.hpp"

namespace sgflab {

/// Moreau envelope g_θ(x) = inf_y g(y) + ‖x − y‖²/(2θ).
struct MoreauEnvelope {
  NonsmoothTerm base;
  double theta;

  MoreauEnvelope(NonsmoothTerm g, double theta);
};

double envelope_value(const MoreauEnvelope& e, std::span<const double> x);

/// ∇g_θ(x) = (x − prox_{θg}(x)) / θ; (1/θ)-Lipschitz.
Vector envelope_gradient(const MoreauEnvelope& e, std::span<const double> x);

/// Strong-convexity modulus c/(1+θc) of the envelope of a c-strongly convex g.
double envelope_strong_convexity(double c, double theta);

/// Upper bound (θ/2)D² on g − g_θ. Throws Unsupported when D is not finite.
double envelope_gap_bound(const NonsmoothTerm& term, double theta);

/// Pointwise form (θ/2)‖∂⁰g(x)‖²; infinite outside dom g.
double envelope_gap_bound_at(const NonsmoothTerm& term, double theta, std::span<const double> x);

/// √(L₀θ/μ): bound on ‖x*_θ − x*‖ for μ-strongly convex f.
double minimizer_drift_bound(double mu, double L0, double theta);

/// Coercivity data a‖x‖ + b ≤ F(x).
struct CoercivityData {
  double a;
  double b;
  double min_F;
  double L0;
  double theta_bar;
};

struct ArgminRadius {
  double C;  // sup over argmin F_θ of ‖z‖
  double dist_bound(double x0_norm) const { return x0_norm + C; }
};

/// C = (min F + (L₀²/2)θ̄ − b)/a.
ArgminRadius sup_argmin_bound(const CoercivityData& data);

enum class ScheduleRegime { convex, strongly_convex_dist, strongly_convex_value };

struct ThetaSchedule {
  double theta;
  double t_min;
};

/// θ and horizon recommended to reach accuracy ε. `dist0` is dist(X₀, S),
/// `c` the strong-convexity modulus (strongly convex regimes only).
ThetaSchedule theta_schedule(double sigma_star_sq, double epsilon, double D, ScheduleRegime regime,
                             double dist0, double c = 1.0);

/// f + g_θ as a smooth potential with gradient Lipschitz constant L + 1/θ.
struct CompositeSmoothed {
  SmoothPotential smooth;
  MoreauEnvelope envelope;
  SmoothPotential combined;
};

/// Requires f to be a separable quadratic (or zero with g's argmin known) so
/// that argmin F_θ is available in closed form.
CompositeSmoothed make_composite_smoothed(const SmoothPotential& f, const NonsmoothTerm& g, double theta);

}  // namespace sgflab
