#include "sgflab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sgflab/errors.hpp"
#include "sgflab/rng.hpp"

namespace sgflab {

Vector resolvent(const NonsmoothTerm& term, double mu, std::span<const double> x) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw InvalidParameter("resolvent: mu must be positive");
  return term.prox(x, mu);
}

namespace {

void require_fb_step(const SmoothPotential& f, double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw InvalidParameter("forward_backward: mu must be positive");
  if (f.lipschitz_L > 0.0 && !(mu < 2.0 / f.lipschitz_L))
    throw InvalidParameter("forward_backward: mu must lie in (0, 2/L)");
}

Vector fb_apply(const SmoothPotential& f, const NonsmoothTerm& g, double mu, std::span<const double> x) {
  if (g.kind == TermKind::zero) return f.gradient(x);
  const Vector grad = f.gradient(x);
  Vector y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] - mu * grad[i];
  const Vector j = g.prox(y, mu);
  Vector m(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) m[i] = (x[i] - j[i]) / mu;
  return m;
}

}  // namespace

Vector forward_backward(const SmoothPotential& f, const NonsmoothTerm& g, double mu, std::span<const double> x) {
  require_fb_step(f, mu);
  return fb_apply(f, g, mu, x);
}

double cocoercivity_constant(double lambda, double mu) {
  if (!(lambda > 0.0)) throw InvalidParameter("cocoercivity_constant: lambda must be positive");
  if (!(mu > 0.0) || !(mu < 2.0 * lambda)) throw InvalidParameter("cocoercivity_constant: mu must lie in (0, 2*lambda)");
  return mu * (1.0 - mu / (4.0 * lambda));
}

CocoerciveOperator make_forward_backward_operator(const CompositeProblem& problem, double mu) {
  const SmoothPotential& f = problem.f;
  require_fb_step(f, mu);
  CocoerciveOperator op;
  op.name = "forward_backward[" + f.name + "," + problem.g.name + "]";
  op.dim = f.dim;
  op.apply = [f, g = problem.g, mu](std::span<const double> x) { return fb_apply(f, g, mu, x); };
  if (problem.g.kind == TermKind::zero) {
    op.rho = f.lipschitz_L > 0.0 ? 1.0 / f.lipschitz_L : std::numeric_limits<double>::infinity();
    op.gamma_strong = f.strong_mu;
  } else {
    // f ≡ 0 leaves the Yosida approximation, which is μ-cocoercive.
    op.rho = f.lipschitz_L > 0.0 ? cocoercivity_constant(1.0 / f.lipschitz_L, mu) : mu;
  }
  if (problem.minimizer) {
    op.zero = problem.minimizer;
    op.zero_set_dist = [z = *problem.minimizer](std::span<const double> x) { return distance(x, z); };
  }
  return op;
}

CocoerciveOperator make_saturated_square_operator(std::size_t dim) {
  if (dim == 0) throw InvalidProblem("dimension must be positive");
  CocoerciveOperator op;
  op.name = "saturated_square";
  op.dim = dim;
  op.apply = [](std::span<const double> x) { return scaled(x, std::min(1.0, norm(x))); };
  // Gradient of the convex ψ(‖x‖) with ψ′(s) = s·min(1,s); ψ″ ≤ 2.
  op.rho = 0.5;
  op.zero = Vector(dim, 0.0);
  op.zero_set_dist = [](std::span<const double> x) { return norm(x); };
  op.hms_p = 4.0;
  op.hms_gamma = 1.0;
  return op;
}

BooleanReport check_hms(const CocoerciveOperator& op, double radius, std::size_t samples, std::uint64_t seed) {
  if (!op.hms_p || !op.hms_gamma || !op.zero_set_dist || !op.zero)
    throw Unsupported("check_hms: operator '" + op.name + "' lacks HMS metadata");
  if (samples == 0) throw InvalidParameter("check_hms: samples must be >= 1");
  BooleanReport rep;
  rep.name = "hms[" + op.name + "]";
  CounterStream rng(seed, 0x4D5);
  for (std::size_t s = 0; s < samples; ++s) {
    const Vector x = sample_ball(*op.zero, radius, rng);
    const double lhs = squared_norm(op.apply(x));
    const double rhs = *op.hms_gamma * std::pow((*op.zero_set_dist)(x), *op.hms_p);
    ++rep.checked;
    const double margin = lhs - rhs;
    if (margin >= -1e-12 * (lhs + rhs)) ++rep.passed;
    rep.worst_margin = std::min(rep.worst_margin, margin);
  }
  return rep;
}

BooleanReport check_cocoercivity(const CocoerciveOperator& op, std::span<const double> center, double radius,
                                 std::size_t pairs, double slack, std::uint64_t seed) {
  BooleanReport rep;
  rep.name = "cocoercivity[" + op.name + "]";
  CounterStream rng(seed, 0xC0C0);
  for (std::size_t s = 0; s < pairs; ++s) {
    const Vector x = sample_ball(center, radius, rng);
    const Vector y = sample_ball(center, radius, rng);
    const Vector d = subtract(op.apply(x), op.apply(y));
    const Vector e = subtract(x, y);
    const double margin = dot(d, e) - op.rho * squared_norm(d);
    ++rep.checked;
    if (margin >= -slack) ++rep.passed;
    rep.worst_margin = std::min(rep.worst_margin, margin);
  }
  return rep;
}

BooleanReport check_operator_lipschitz(const CocoerciveOperator& op, double lipschitz, std::span<const double> center,
                                       double radius, std::size_t pairs, std::uint64_t seed) {
  BooleanReport rep;
  rep.name = "lipschitz[" + op.name + "]";
  CounterStream rng(seed, 0x11B);
  for (std::size_t s = 0; s < pairs; ++s) {
    const Vector x = sample_ball(center, radius, rng);
    const Vector y = sample_ball(center, radius, rng);
    const double lhs = distance(op.apply(x), op.apply(y));
    const double rhs = lipschitz * distance(x, y);
    const double margin = rhs - lhs;
    ++rep.checked;
    if (margin >= -1e-12 * (1.0 + rhs)) ++rep.passed;
    rep.worst_margin = std::min(rep.worst_margin, margin);
  }
  return rep;
}

}  // namespace sgflab
