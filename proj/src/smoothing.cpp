#include "sgflab/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sgflab/errors.hpp"

namespace sgflab {

namespace {

void require_theta(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw InvalidParameter("theta must be positive and finite");
}

// Stationary point of ½λ(x−c)² + e(x) for a one-dimensional catalog envelope e.
double smoothed_coordinate_minimizer(const NonsmoothTerm& g, std::size_t i, double lam, double c, double theta) {
  switch (g.kind) {
    case TermKind::zero:
      return c;
    case TermKind::weighted_l1: {
      // Huber branch |x| ≤ wθ: λ(x−c) + x/θ = 0.
      const double inner = lam * c * theta / (lam * theta + 1.0);
      if (std::fabs(inner) <= g.weight * theta) return inner;
      return c > 0.0 ? c - g.weight / lam : c + g.weight / lam;
    }
    case TermKind::box_indicator: {
      if (c >= g.lo[i] && c <= g.hi[i]) return c;
      const double face = c > g.hi[i] ? g.hi[i] : g.lo[i];
      return (lam * c + face / theta) / (lam + 1.0 / theta);
    }
    case TermKind::quadratic: {
      const double m = envelope_strong_convexity(g.weight, theta);
      return lam * c / (lam + m);
    }
  }
  return c;
}

}  // namespace

MoreauEnvelope::MoreauEnvelope(NonsmoothTerm g, double t) : base(std::move(g)), theta(t) { require_theta(theta); }

double envelope_value(const MoreauEnvelope& e, std::span<const double> x) {
  require_theta(e.theta);
  const Vector p = e.base.prox(x, e.theta);
  return e.base.value(p) + squared_distance(x, p) / (2.0 * e.theta);
}

Vector envelope_gradient(const MoreauEnvelope& e, std::span<const double> x) {
  require_theta(e.theta);
  const Vector p = e.base.prox(x, e.theta);
  Vector g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = (x[i] - p[i]) / e.theta;
  return g;
}

double envelope_strong_convexity(double c, double theta) {
  if (!(c > 0.0)) throw InvalidParameter("envelope_strong_convexity: c must be positive");
  require_theta(theta);
  return c / (1.0 + theta * c);
}

double envelope_gap_bound(const NonsmoothTerm& term, double theta) {
  if (!term.subgrad_bound_D)
    throw Unsupported("envelope_gap_bound: term '" + term.name + "' has no finite subgradient bound D");
  if (!(theta >= 0.0)) throw InvalidParameter("envelope_gap_bound: theta must be >= 0");
  const double D = *term.subgrad_bound_D;
  return 0.5 * theta * D * D;
}

double envelope_gap_bound_at(const NonsmoothTerm& term, double theta, std::span<const double> x) {
  const Vector s = term.min_norm_subgradient(x);
  return 0.5 * theta * squared_norm(s);
}

double minimizer_drift_bound(double mu, double L0, double theta) {
  if (!(mu > 0.0)) throw InvalidParameter("minimizer_drift_bound: mu must be positive");
  if (!(L0 >= 0.0) || !(theta >= 0.0)) throw InvalidParameter("minimizer_drift_bound: L0 and theta must be >= 0");
  return std::sqrt(L0 * theta / mu);
}

ArgminRadius sup_argmin_bound(const CoercivityData& d) {
  if (!(d.a > 0.0)) throw InvalidParameter("sup_argmin_bound: coercivity constant a must be positive");
  if (!(d.theta_bar >= 0.0)) throw InvalidParameter("sup_argmin_bound: theta_bar must be >= 0");
  const double c_tilde = d.min_F + 0.5 * d.L0 * d.L0 * d.theta_bar;
  return {(c_tilde - d.b) / d.a};
}

ThetaSchedule theta_schedule(double sigma_star_sq, double epsilon, double D, ScheduleRegime regime,
                             double dist0, double c) {
  if (!(epsilon > 0.0)) throw InvalidParameter("theta_schedule: epsilon must be positive");
  if (!(sigma_star_sq >= 0.0)) throw InvalidParameter("theta_schedule: sigma_star_sq must be >= 0");
  const double d2 = dist0 * dist0;
  switch (regime) {
    case ScheduleRegime::convex: {
      if (!(D > 0.0)) throw InvalidParameter("theta_schedule: D must be positive");
      return {std::min(sigma_star_sq, epsilon) / (D * D), d2 / (2.0 * epsilon)};
    }
    case ScheduleRegime::strongly_convex_dist: {
      if (!(c > 0.0)) throw InvalidParameter("theta_schedule: c must be positive");
      const double theta = std::min(sigma_star_sq, epsilon);
      return {theta, (1.0 / c + theta) * std::log(d2 / (2.0 * epsilon))};
    }
    case ScheduleRegime::strongly_convex_value: {
      if (!(D > 0.0)) throw InvalidParameter("theta_schedule: D must be positive");
      if (!(c > 0.0)) throw InvalidParameter("theta_schedule: c must be positive");
      if (!(sigma_star_sq > 0.0)) throw InvalidParameter("theta_schedule: value regime needs sigma_star_sq > 0");
      const double theta = std::sqrt(sigma_star_sq) / (D * D);
      return {theta, (1.0 / c + theta) * std::log(d2 / (2.0 * sigma_star_sq))};
    }
  }
  throw InvalidParameter("theta_schedule: unknown regime");
}

CompositeSmoothed make_composite_smoothed(const SmoothPotential& f, const NonsmoothTerm& g, double theta) {
  require_theta(theta);
  if (f.dim != g.dim) throw InvalidProblem("composite_smoothed: f and g dimensions differ");
  MoreauEnvelope env(g, theta);

  Vector xstar;
  std::optional<double> mu_f;
  if (f.quadratic_eigenvalues && f.quadratic_center) {
    const Vector& lam = *f.quadratic_eigenvalues;
    const Vector& c = *f.quadratic_center;
    xstar.resize(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) xstar[i] = smoothed_coordinate_minimizer(g, i, lam[i], c[i], theta);
    mu_f = f.strong_mu;
  } else if (f.lipschitz_L == 0.0 && !g.argmin_known.empty()) {
    xstar = g.argmin_known.front();  // argmin g_θ = argmin g
  } else {
    throw Unsupported("composite_smoothed: argmin of f + g_theta not available in closed form for '" + f.name + "'");
  }

  SmoothPotential F;
  F.name = f.name + "+" + g.name + "_theta";
  F.dim = f.dim;
  F.value = [f, env](std::span<const double> x) { return f.value(x) + envelope_value(env, x); };
  F.gradient = [f, env](std::span<const double> x) {
    Vector a = f.gradient(x);
    const Vector b = envelope_gradient(env, x);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
  };
  F.lipschitz_L = f.lipschitz_L + 1.0 / theta;
  double mu = mu_f.value_or(0.0);
  if (g.strong_c) mu += envelope_strong_convexity(*g.strong_c, theta);
  if (mu > 0.0) F.strong_mu = mu;
  F.min_value = F.value(xstar);
  F.dist_to_argmin = [xstar](std::span<const double> x) { return distance(x, xstar); };
  F.minimizer = xstar;
  return {f, std::move(env), std::move(F)};
}

}  // namespace sgflab
