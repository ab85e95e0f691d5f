#include "sgflab/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sgflab/errors.hpp"

namespace sgflab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double soft_threshold(double x, double tau) {
  if (x > tau) return x - tau;
  if (x < -tau) return x + tau;
  return 0.0;
}

void require_dim(std::size_t dim) {
  if (dim == 0) throw InvalidProblem("dimension must be positive");
}

}  // namespace

SmoothPotential make_quadratic(std::size_t dim, const Vector& eigenvalues, const Vector& center) {
  require_dim(dim);
  if (eigenvalues.size() != dim || center.size() != dim)
    throw InvalidProblem("quadratic: eigenvalues and center must have length dim");
  for (double l : eigenvalues)
    if (!(l > 0.0) || !std::isfinite(l)) throw InvalidProblem("quadratic: eigenvalues must be positive");

  const double lmax = *std::max_element(eigenvalues.begin(), eigenvalues.end());
  const double lmin = *std::min_element(eigenvalues.begin(), eigenvalues.end());

  SmoothPotential p;
  p.name = "quadratic";
  p.dim = dim;
  p.value = [eigenvalues, center](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - center[i];
      s += eigenvalues[i] * d * d;
    }
    return 0.5 * s;
  };
  p.gradient = [eigenvalues, center](std::span<const double> x) {
    Vector g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = eigenvalues[i] * (x[i] - center[i]);
    return g;
  };
  p.lipschitz_L = lmax;
  p.strong_mu = lmin;
  p.min_value = 0.0;
  p.dist_to_argmin = [center](std::span<const double> x) { return distance(x, center); };
  p.minimizer = center;
  p.eb_exponent_p = 2.0;
  p.eb_gamma = 0.5 * lmin;
  p.loja_q = 0.5;
  // ‖∇f‖² = Σλᵢ²dᵢ² ≥ 2λ_min f
  p.loja_mu = std::sqrt(2.0 * lmin);
  p.quadratic_eigenvalues = eigenvalues;
  p.quadratic_center = center;
  return p;
}

SmoothPotential make_power_norm(std::size_t dim, double r, double radius) {
  require_dim(dim);
  if (!(r >= 2.0) || !std::isfinite(r)) throw InvalidProblem("power_norm: exponent r must be >= 2");
  if (!(radius > 0.0)) throw InvalidProblem("power_norm: radius must be positive");

  SmoothPotential p;
  p.name = "power_norm";
  p.dim = dim;
  p.value = [r](std::span<const double> x) { return std::pow(norm(x), r); };
  p.gradient = [r](std::span<const double> x) {
    const double n = norm(x);
    Vector g(x.size(), 0.0);
    if (n == 0.0) return g;
    const double s = r * std::pow(n, r - 2.0);
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = s * x[i];
    return g;
  };
  // Hessian spectrum on the ball is bounded by r(r−1)R^{r−2}.
  p.lipschitz_L = r * (r - 1.0) * std::pow(radius, r - 2.0);
  if (r == 2.0) {
    p.lipschitz_L = 2.0;
    p.strong_mu = 2.0;
  }
  p.min_value = 0.0;
  p.dist_to_argmin = [](std::span<const double> x) { return norm(x); };
  p.minimizer = Vector(dim, 0.0);
  p.eb_exponent_p = r;
  p.eb_gamma = 1.0;
  p.loja_q = 1.0 - 1.0 / r;
  p.loja_mu = r;
  p.eb_radius = radius;
  return p;
}

SmoothPotential make_zero_potential(std::size_t dim) {
  require_dim(dim);
  SmoothPotential p;
  p.name = "zero";
  p.dim = dim;
  p.value = [](std::span<const double>) { return 0.0; };
  p.gradient = [](std::span<const double> x) { return Vector(x.size(), 0.0); };
  p.lipschitz_L = 0.0;
  p.min_value = 0.0;
  p.dist_to_argmin = [](std::span<const double>) { return 0.0; };
  p.minimizer = Vector(dim, 0.0);
  return p;
}

NonsmoothTerm make_abs_l1(std::size_t dim, double weight) {
  require_dim(dim);
  if (!(weight >= 0.0) || !std::isfinite(weight)) throw InvalidProblem("abs_l1: weight must be >= 0");
  NonsmoothTerm g;
  g.name = "abs_l1";
  g.kind = TermKind::weighted_l1;
  g.dim = dim;
  g.weight = weight;
  g.value = [weight](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += std::fabs(v);
    return weight * s;
  };
  g.prox = [weight](std::span<const double> x, double theta) {
    Vector p(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) p[i] = soft_threshold(x[i], weight * theta);
    return p;
  };
  g.min_norm_subgradient = [weight](std::span<const double> x) {
    Vector s(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) s[i] = x[i] > 0.0 ? weight : (x[i] < 0.0 ? -weight : 0.0);
    return s;
  };
  const double root_d = std::sqrt(static_cast<double>(dim));
  g.lipschitz_L0 = weight * root_d;
  g.subgrad_bound_D = weight * root_d;
  g.min_value = 0.0;
  g.argmin_known = {Vector(dim, 0.0)};
  return g;
}

NonsmoothTerm make_indicator_box(const Vector& lo, const Vector& hi) {
  require_dim(lo.size());
  if (lo.size() != hi.size()) throw InvalidProblem("indicator_box: lo and hi must have equal length");
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (!(lo[i] <= hi[i])) throw InvalidProblem("indicator_box: lo > hi in coordinate " + std::to_string(i));

  NonsmoothTerm g;
  g.name = "indicator_box";
  g.kind = TermKind::box_indicator;
  g.dim = lo.size();
  g.lo = lo;
  g.hi = hi;
  g.value = [lo, hi](std::span<const double> x) {
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] < lo[i] || x[i] > hi[i]) return kInf;
    return 0.0;
  };
  g.prox = [lo, hi](std::span<const double> x, double) {
    Vector p(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) p[i] = std::clamp(x[i], lo[i], hi[i]);
    return p;
  };
  // 0 belongs to the normal cone at every feasible point.
  g.min_norm_subgradient = [lo, hi](std::span<const double> x) {
    Vector s(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] < lo[i] || x[i] > hi[i]) s[i] = kInf;
    return s;
  };
  g.min_value = 0.0;
  return g;
}

NonsmoothTerm make_zero_term(std::size_t dim) {
  require_dim(dim);
  NonsmoothTerm g;
  g.name = "zero";
  g.kind = TermKind::zero;
  g.dim = dim;
  g.value = [](std::span<const double>) { return 0.0; };
  g.prox = [](std::span<const double> x, double) { return Vector(x.begin(), x.end()); };
  g.min_norm_subgradient = [](std::span<const double> x) { return Vector(x.size(), 0.0); };
  g.lipschitz_L0 = 0.0;
  g.subgrad_bound_D = 0.0;
  g.min_value = 0.0;
  return g;
}

NonsmoothTerm make_quadratic_term(std::size_t dim, double c) {
  require_dim(dim);
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidProblem("quadratic_term: modulus c must be positive");
  NonsmoothTerm g;
  g.name = "quadratic_term";
  g.kind = TermKind::quadratic;
  g.dim = dim;
  g.weight = c;
  g.value = [c](std::span<const double> x) { return 0.5 * c * squared_norm(x); };
  g.prox = [c](std::span<const double> x, double theta) { return scaled(x, 1.0 / (1.0 + theta * c)); };
  g.min_norm_subgradient = [c](std::span<const double> x) { return scaled(x, c); };
  g.strong_c = c;
  g.min_value = 0.0;
  g.argmin_known = {Vector(dim, 0.0)};
  return g;
}

CompositeProblem make_composite(SmoothPotential f, NonsmoothTerm g) {
  if (f.dim != g.dim) throw InvalidProblem("composite: f and g dimensions differ");
  CompositeProblem F{std::move(f), std::move(g), std::nullopt, std::nullopt};
  if (F.f.quadratic_eigenvalues && F.f.quadratic_center) {
    const Vector& lam = *F.f.quadratic_eigenvalues;
    const Vector& c = *F.f.quadratic_center;
    Vector x(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      switch (F.g.kind) {
        case TermKind::zero: x[i] = c[i]; break;
        case TermKind::weighted_l1: x[i] = soft_threshold(c[i], F.g.weight / lam[i]); break;
        case TermKind::box_indicator: x[i] = std::clamp(c[i], F.g.lo[i], F.g.hi[i]); break;
        case TermKind::quadratic: x[i] = lam[i] * c[i] / (lam[i] + F.g.weight); break;
      }
    }
    F.min_value = F.value(x);
    F.minimizer = std::move(x);
  } else if (F.g.kind == TermKind::zero && F.f.minimizer) {
    F.minimizer = F.f.minimizer;
    F.min_value = F.f.min_value;
  }
  return F;
}

Vector sample_ball(std::span<const double> center, double radius, CounterStream& rng) {
  const std::size_t d = center.size();
  Vector dir(d);
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (auto& v : dir) {
      v = rng.normal();
      n2 += v * v;
    }
  } while (n2 == 0.0);
  const double rad = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
  const double s = rad / std::sqrt(n2);
  Vector x(d);
  for (std::size_t i = 0; i < d; ++i) x[i] = center[i] + s * dir[i];
  return x;
}

namespace {

// Relative slack absorbing rounding in equality cases of the inequalities.
constexpr double kRelSlack = 1e-12;

void record(BooleanReport& rep, double lhs_small, double rhs_large) {
  ++rep.checked;
  const double margin = rhs_large - lhs_small;
  if (margin >= -kRelSlack * (std::fabs(lhs_small) + std::fabs(rhs_large)))
    ++rep.passed;
  rep.worst_margin = std::min(rep.worst_margin, margin);
}

}  // namespace

BooleanReport check_error_bound(const SmoothPotential& p, double radius, std::size_t samples,
                                double gamma_candidate, std::uint64_t seed) {
  if (!p.eb_exponent_p) throw Unsupported("check_error_bound: potential '" + p.name + "' has no error-bound exponent");
  if (!p.minimizer) throw Unsupported("check_error_bound: potential '" + p.name + "' has no known minimizer");
  if (samples == 0) throw InvalidParameter("check_error_bound: samples must be >= 1");
  if (p.eb_radius) radius = std::min(radius, *p.eb_radius);

  BooleanReport rep;
  rep.name = "error_bound[" + p.name + "]";
  CounterStream rng(seed, 0xEB);
  const double pe = *p.eb_exponent_p;
  for (std::size_t s = 0; s < samples; ++s) {
    const Vector x = sample_ball(*p.minimizer, radius, rng);
    const double gap = p.value(x) - p.min_value;
    const double rhs = gamma_candidate * std::pow(p.dist_to_argmin(x), pe);
    record(rep, rhs, gap);
  }
  return rep;
}

BooleanReport check_lojasiewicz(const SmoothPotential& p, double radius, std::size_t samples,
                                std::uint64_t seed) {
  if (!p.loja_q || !p.loja_mu) throw Unsupported("check_lojasiewicz: potential '" + p.name + "' has no Lojasiewicz data");
  if (!p.minimizer) throw Unsupported("check_lojasiewicz: potential '" + p.name + "' has no known minimizer");
  if (samples == 0) throw InvalidParameter("check_lojasiewicz: samples must be >= 1");
  if (p.eb_radius) radius = std::min(radius, *p.eb_radius);

  const double q = *p.loja_q;
  const double mu = *p.loja_mu;
  const double pe = 1.0 / (1.0 - q);
  const double gamma_eb = std::pow(mu * (1.0 - q), pe);

  BooleanReport rep;
  rep.name = "lojasiewicz[" + p.name + "]";
  CounterStream rng(seed, 0x10A);
  for (std::size_t s = 0; s < samples; ++s) {
    // The minimizer itself is part of the sample stream so that the
    // "skip points at min f" branch is exercised.
    const Vector x = s == 0 ? *p.minimizer : sample_ball(*p.minimizer, radius, rng);
    const double gap = p.value(x) - p.min_value;
    if (!(gap > 0.0)) {
      ++rep.skipped;
      continue;
    }
    const Vector g = p.gradient(x);
    BooleanReport loja_part, eb_part;
    record(loja_part, mu * std::pow(gap, q), norm(g));
    record(eb_part, gamma_eb * std::pow(p.dist_to_argmin(x), pe), gap);
    ++rep.checked;
    if (loja_part.passed == 1 && eb_part.passed == 1) ++rep.passed;
    rep.worst_margin = std::min({rep.worst_margin, loja_part.worst_margin, eb_part.worst_margin});
  }
  return rep;
}

}  // namespace sgflab
