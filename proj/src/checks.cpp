#include "sgflab/checks.hpp"

#include <algorithm>
#include <cmath>

#include "sgflab/errors.hpp"
#include "sgflab/format.hpp"

namespace sgflab {

namespace {

struct Tally {
  BooleanReport r;
  explicit Tally(std::string name) { r.name = std::move(name); }
  void record(double margin, double slack = 0.0) {
    ++r.checked;
    if (margin >= -slack) ++r.passed;
    r.worst_margin = std::min(r.worst_margin, margin);
  }
  void skip() { ++r.skipped; }
};

Vector sample_center(const SmoothPotential& f) { return f.minimizer.value_or(Vector(f.dim, 0.0)); }

double sample_radius(const SmoothPotential& f) { return f.eb_radius.value_or(3.0); }

double sample_theta(CounterStream& rng) { return std::pow(10.0, rng.uniform(-3.0, 1.0)); }

}  // namespace

std::vector<double> theta_grid() {
  std::vector<double> g(17);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::pow(10.0, -3.0 + 0.25 * static_cast<double>(i));
  return g;
}

std::vector<CheckRow> potential_invariants(const SmoothPotential& f, std::size_t samples, std::uint64_t seed) {
  const Vector c = sample_center(f);
  const double R = sample_radius(f);
  CounterStream rng(seed, 0x9071);
  Tally fd("gradient_finite_difference[" + f.name + "]");
  Tally lip("gradient_lipschitz[" + f.name + "]");
  Tally sc("strong_convexity[" + f.name + "]");
  Tally two_l("gradient_norm_2L[" + f.name + "]");
  for (std::size_t s = 0; s < samples; ++s) {
    const Vector x = sample_ball(c, R, rng);
    const Vector y = sample_ball(c, R, rng);
    const Vector g = f.gradient(x);

    Vector fdg(f.dim);
    Vector xp = x, xm = x;
    for (std::size_t i = 0; i < f.dim; ++i) {
      const double h = 1e-5 * std::max(1.0, std::abs(x[i]));
      xp[i] = x[i] + h;
      xm[i] = x[i] - h;
      fdg[i] = (f.value(xp) - f.value(xm)) / (xp[i] - xm[i]);
      xp[i] = xm[i] = x[i];
    }
    fd.record(1e-5 * (1.0 + norm(g)) - distance(fdg, g));

    const double dg = distance(g, f.gradient(y));
    const double rhs = f.lipschitz_L * distance(x, y);
    lip.record(rhs - dg, 1e-12 * (1.0 + rhs));

    const double gap = f.value(x) - f.min_value;
    if (f.strong_mu) {
      const double d = f.dist_to_argmin(x);
      sc.record(gap - 0.5 * *f.strong_mu * d * d, 1e-12 * (1.0 + std::abs(gap)));
    } else {
      sc.skip();
    }
    const double g2 = squared_norm(g);
    two_l.record(2.0 * f.lipschitz_L * gap - g2, 1e-12 * (1.0 + g2));
  }
  std::vector<CheckRow> rows{{"potentials", fd.r}, {"potentials", lip.r}, {"potentials", two_l.r}};
  if (f.strong_mu) rows.push_back({"potentials", sc.r});
  if (f.loja_q && f.loja_mu) rows.push_back({"potentials", check_lojasiewicz(f, R, samples, seed)});
  if (f.eb_exponent_p && f.eb_gamma)
    rows.push_back({"potentials", check_error_bound(f, R, samples, *f.eb_gamma, seed)});
  return rows;
}

std::vector<CheckRow> term_invariants(const NonsmoothTerm& g, std::size_t samples, std::uint64_t seed) {
  CounterStream rng(seed, 0x7E53);
  const Vector c(g.dim, 0.0);
  Tally var("prox_variational[" + g.name + "]");
  Tally lip("term_lipschitz[" + g.name + "]");
  for (std::size_t s = 0; s < samples; ++s) {
    const Vector x = sample_ball(c, 5.0, rng);
    const double theta = sample_theta(rng);
    const Vector p = g.prox(x, theta);
    const double lhs = g.value(p) + squared_distance(x, p) / (2.0 * theta);
    for (int j = 0; j < 4; ++j) {
      const Vector y = sample_ball(p, 1.0, rng);
      const double rhs = g.value(y) + squared_distance(x, y) / (2.0 * theta);
      if (std::isinf(rhs)) {
        var.skip();
        continue;
      }
      var.record(rhs - lhs, 1e-12 * (1.0 + std::abs(lhs)));
    }
    if (g.lipschitz_L0) {
      const Vector y = sample_ball(c, 5.0, rng);
      const double rhs = *g.lipschitz_L0 * distance(x, y);
      lip.record(rhs - std::abs(g.value(x) - g.value(y)), 1e-12 * (1.0 + rhs));
    }
  }
  std::vector<CheckRow> rows{{"potentials", var.r}};
  if (g.lipschitz_L0) rows.push_back({"potentials", lip.r});
  return rows;
}

std::vector<CheckRow> envelope_invariants(const NonsmoothTerm& g, std::size_t samples, std::uint64_t seed) {
  CounterStream rng(seed, 0xE7E1);
  const Vector c(g.dim, 0.0);
  Tally sandwich("envelope_sandwich[" + g.name + "]");
  Tally fd("envelope_gradient_identity[" + g.name + "]");
  Tally lip("envelope_gradient_lipschitz[" + g.name + "]");
  Tally mono("envelope_monotone_in_theta[" + g.name + "]");
  Tally argmin("envelope_argmin_preserved[" + g.name + "]");
  Tally transfer("envelope_strong_convexity_transfer[" + g.name + "]");
  const std::vector<double> grid = theta_grid();
  for (std::size_t s = 0; s < samples; ++s) {
    Vector x = sample_ball(c, 5.0, rng);
    const double theta = sample_theta(rng);
    const MoreauEnvelope e(g, theta);
    const double gx = g.value(x);
    if (!std::isfinite(gx)) {
      sandwich.skip();
    } else {
      const double ex = envelope_value(e, x);
      const double gap = gx - ex;
      const double ub = g.subgrad_bound_D ? envelope_gap_bound(g, theta) : envelope_gap_bound_at(g, theta, x);
      const double slack = 1e-12 * (1.0 + std::abs(gx));
      sandwich.record(std::min(gap, ub - gap), slack);
    }

    const Vector grad = envelope_gradient(e, x);
    Vector fdg(g.dim);
    Vector xp = x, xm = x;
    for (std::size_t i = 0; i < g.dim; ++i) {
      const double h = 1e-6 * std::max(1.0, std::abs(x[i]));
      xp[i] = x[i] + h;
      xm[i] = x[i] - h;
      fdg[i] = (envelope_value(e, xp) - envelope_value(e, xm)) / (xp[i] - xm[i]);
      xp[i] = xm[i] = x[i];
    }
    fd.record(1e-6 * (1.0 + norm(grad)) - distance(fdg, grad));

    const Vector y = sample_ball(c, 5.0, rng);
    const double rhs = distance(x, y) / theta;
    lip.record(rhs - distance(grad, envelope_gradient(e, y)), 1e-12 * (1.0 + rhs));

    double prev = std::numeric_limits<double>::infinity();
    for (double th : grid) {
      const double v = envelope_value(MoreauEnvelope(g, th), x);
      if (std::isfinite(prev)) mono.record(prev - v, 1e-12 * (1.0 + std::abs(prev)));
      prev = v;
    }

    if (g.kind == TermKind::quadratic && g.strong_c) {
      const double m = envelope_strong_convexity(*g.strong_c, theta);
      const double exact = 0.5 * m * squared_norm(x);
      const double ev = envelope_value(e, x);
      transfer.record(1e-12 * (1.0 + std::abs(exact)) - std::abs(ev - exact));
    }
  }
  for (const Vector& a : g.argmin_known)
    for (double th : grid) argmin.record(-norm(envelope_gradient(MoreauEnvelope(g, th), a)));
  if (g.kind == TermKind::weighted_l1 || g.kind == TermKind::quadratic) {
    // Away from the unique minimizer the gradient never vanishes.
    CounterStream r2(seed, 0xA11);
    for (std::size_t s = 0; s < std::min<std::size_t>(samples, 100); ++s) {
      const Vector x = sample_ball(c, 5.0, r2);
      if (norm(x) == 0.0) continue;
      argmin.record(norm(envelope_gradient(MoreauEnvelope(g, sample_theta(r2)), x)) > 0.0 ? 0.0 : -1.0);
    }
  }
  std::vector<CheckRow> rows{{"smoothing", sandwich.r}, {"smoothing", fd.r}, {"smoothing", lip.r},
                             {"smoothing", mono.r}};
  if (argmin.r.checked > 0) rows.push_back({"smoothing", argmin.r});
  if (transfer.r.checked > 0) rows.push_back({"smoothing", transfer.r});
  return rows;
}

std::vector<CheckRow> operator_invariants(const CompositeProblem& problem, std::size_t samples, std::uint64_t seed) {
  std::vector<CheckRow> rows;
  const double L = problem.f.lipschitz_L;
  const double lambda = L > 0.0 ? 1.0 / L : 1.0;
  const Vector center = problem.minimizer.value_or(Vector(problem.f.dim, 0.0));
  const double radius = problem.f.eb_radius.value_or(5.0);
  for (double k : {0.5, 1.0, 1.5}) {
    const CocoerciveOperator op = make_forward_backward_operator(problem, k * lambda);
    BooleanReport r = check_cocoercivity(op, center, radius, samples, 1e-12, seed);
    r.name += "[mu=" + format_number(k) + "*lambda]";
    rows.push_back({"operators", r});
    if (problem.minimizer) {
      Tally z("zero_consistency[" + op.name + ",mu=" + format_number(k) + "*lambda]");
      z.record(1e-9 - norm(op.apply(*problem.minimizer)));
      rows.push_back({"operators", z.r});
    }
  }
  const CompositeProblem yosida = make_composite(make_zero_potential(problem.f.dim), problem.g);
  const CocoerciveOperator y = make_forward_backward_operator(yosida, 1.0);
  BooleanReport r = check_operator_lipschitz(y, 1.0, center, radius, samples, seed);
  r.name = "yosida_lipschitz[" + problem.g.name + "]";
  rows.push_back({"operators", r});
  return rows;
}

std::vector<CheckRow> volatility_invariants(const VolatilitySchedule& vol, std::size_t samples, std::uint64_t seed) {
  CounterStream rng(seed, 0x5161);
  const Vector c(vol.dim, 0.0);
  Tally env("noise_envelope[" + vol.state_factor_name + "]");
  Tally lip("noise_entry_lipschitz[" + vol.state_factor_name + "]");
  Tally tag("square_integrable_tag");
  const double s2 = vol.sigma_star_sq();
  const double l0 = vol.entry_lipschitz();
  for (std::size_t s = 0; s < samples; ++s) {
    const double t = rng.uniform(0.0, 100.0);
    const Vector x = sample_ball(c, 3.0, rng);
    const Vector y = sample_ball(c, 3.0, rng);
    env.record(s2 - vol.frobenius_sq(t, x), 1e-12 * (1.0 + s2));
    const double rhs = l0 * distance(x, y);
    lip.record(rhs - std::abs(vol.scale(t, x) - vol.scale(t, y)), 1e-12 * (1.0 + rhs));
  }
  // Trapezoid rule on a log grid: a convergent integral gains little between
  // 1e4 and 1e8.
  if (vol.sigma0 == 0.0 || std::abs(vol.alpha - 0.5) >= 0.25) {
    auto integral = [&](double T) {
      double acc = 0.0, prev_t = 0.0, prev_v = vol.sigma_inf(0.0) * vol.sigma_inf(0.0);
      const std::size_t n = 4000;
      for (std::size_t i = 1; i <= n; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(n);
        const double t = std::expm1(u * std::log1p(T));
        const double v = vol.sigma_inf(t) * vol.sigma_inf(t);
        acc += 0.5 * (v + prev_v) * (t - prev_t);
        prev_t = t;
        prev_v = v;
      }
      return acc;
    };
    const double i4 = integral(1e4), i8 = integral(1e8);
    const bool converges = i8 - i4 <= 0.5 * i4 || i8 == 0.0;
    tag.record(converges == vol.square_integrable() ? 0.0 : -1.0);
  } else {
    tag.skip();
  }
  return {{"sde_engine", env.r}, {"sde_engine", lip.r}, {"sde_engine", tag.r}};
}

std::vector<CheckRow> run_check_suite(const CompositeProblem& problem, const VolatilitySchedule& vol,
                                      std::size_t samples, std::uint64_t seed) {
  std::vector<CheckRow> all;
  auto append = [&](std::vector<CheckRow> rows) {
    for (auto& r : rows) all.push_back(std::move(r));
  };
  append(potential_invariants(problem.f, samples, seed));
  append(term_invariants(problem.g, samples, seed));
  append(envelope_invariants(problem.g, samples, seed));
  append(operator_invariants(problem, samples, seed));
  append(volatility_invariants(vol, samples, seed));
  return all;
}

}  // namespace sgflab
