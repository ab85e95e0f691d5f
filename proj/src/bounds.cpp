#include "sgflab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sgflab/errors.hpp"

namespace sgflab {

namespace {

void require_positive_time(double t, const char* who) {
  if (!(t > 0.0)) throw InvalidParameter(std::string(who) + ": t must be > 0");
}

struct VariantInfo {
  MoreauVariant v;
  std::string_view name;
};

constexpr VariantInfo kVariants[] = {
    {MoreauVariant::nuevo_1, "nuevo_1"},   {MoreauVariant::nuevo_2, "nuevo_2"},
    {MoreauVariant::nuevo_3, "nuevo_3"},   {MoreauVariant::nuevo1_1, "nuevo1_1"},
    {MoreauVariant::nuevo1_2, "nuevo1_2"}, {MoreauVariant::nuevo1_3, "nuevo1_3"},
    {MoreauVariant::nuevo1_4, "nuevo1_4"}, {MoreauVariant::nuevo1_5, "nuevo1_5"},
    {MoreauVariant::nuevo1_6, "nuevo1_6"}, {MoreauVariant::nuevo1_7, "nuevo1_7"},
};

double half_dist_decay(const MoreauBoundParams& p, double modulus) {
  if (!(modulus > 0.0)) throw InvalidParameter("bound_moreau: strong-convexity modulus must be > 0");
  return p.dist0_sq / 2.0 * std::exp(-modulus * p.t) + p.sigma_star_sq / (2.0 * modulus);
}

}  // namespace

double bound_ergodic_convex(double dist0_sq, double sigma_star_sq, double t) {
  require_positive_time(t, "bound_ergodic_convex");
  return dist0_sq / (2.0 * t) + sigma_star_sq / 2.0;
}

double bound_strongly_convex(double dist0_sq, double mu, double sigma_star_sq, double t,
                             const std::optional<NoiseSplit>& split) {
  if (!(mu > 0.0)) throw InvalidParameter("bound_strongly_convex: mu must be > 0");
  if (t < 0.0) throw InvalidParameter("bound_strongly_convex: t must be >= 0");
  const double transient = dist0_sq * std::exp(-2.0 * mu * t);
  if (!split) return transient + sigma_star_sq / (2.0 * mu);
  const double lambda = split->lambda;
  if (!(lambda > 0.0 && lambda < 1.0)) throw InvalidParameter("bound_strongly_convex: lambda must be in (0, 1)");
  if (!split->sigma_inf) throw InvalidParameter("bound_strongly_convex: split requires sigma_inf");
  const double s = split->sigma_inf(lambda * t);
  return transient + sigma_star_sq / (2.0 * mu) * std::exp(-2.0 * mu * (1.0 - lambda) * t) + s * s;
}

double bound_pointwise_beta(double dist0_sq, double K, double beta, double L, double t) {
  require_positive_time(t, "bound_pointwise_beta");
  if (!(beta >= 0.0 && beta < 1.0)) throw InvalidParameter("bound_pointwise_beta: beta must be in [0, 1)");
  if (K < 0.0) throw InvalidParameter("bound_pointwise_beta: K must be >= 0");
  return dist0_sq / (2.0 * t) + K * std::max(1.0, L) / 2.0 * std::pow(t, beta - 1.0);
}

std::string_view moreau_variant_name(MoreauVariant v) {
  for (const auto& info : kVariants)
    if (info.v == v) return info.name;
  return "unknown";
}

MoreauVariant parse_moreau_variant(std::string_view name) {
  for (const auto& info : kVariants)
    if (info.name == name) return info.v;
  throw InvalidParameter("unknown Moreau bound variant '" + std::string(name) + "'");
}

double bound_moreau(MoreauVariant v, const MoreauBoundParams& p) {
  if (!(p.theta > 0.0)) throw InvalidParameter("bound_moreau: theta must be > 0");
  if (!std::isfinite(p.D)) throw Unsupported("bound_moreau: the smoothed term has no finite subgradient bound");
  const double gap = p.theta * p.D * p.D / 2.0;
  const auto env_mu = [&] {
    if (!(p.c > 0.0)) throw InvalidParameter("bound_moreau: variant needs c > 0");
    return p.c / (1.0 + p.theta * p.c);
  };
  const double smooth_L = p.L + 1.0 / p.theta;
  switch (v) {
    case MoreauVariant::nuevo_1:
    case MoreauVariant::nuevo1_1:
      require_positive_time(p.t, "bound_moreau");
      return p.dist0_sq / (2.0 * p.t) + p.sigma_star_sq / 2.0 + gap;
    case MoreauVariant::nuevo_2: return half_dist_decay(p, env_mu());
    case MoreauVariant::nuevo_3: return half_dist_decay(p, env_mu()) / p.theta + gap;
    case MoreauVariant::nuevo1_2: return half_dist_decay(p, p.mu_f);
    case MoreauVariant::nuevo1_3: return smooth_L * half_dist_decay(p, p.mu_f) + gap;
    case MoreauVariant::nuevo1_4: return half_dist_decay(p, env_mu());
    case MoreauVariant::nuevo1_5: return smooth_L * half_dist_decay(p, env_mu()) + gap;
    case MoreauVariant::nuevo1_6: return half_dist_decay(p, env_mu() + p.mu_f);
    case MoreauVariant::nuevo1_7: return smooth_L * half_dist_decay(p, env_mu() + p.mu_f) + gap;
  }
  throw InvalidParameter("bound_moreau: unknown variant");
}

double bound_cocoercive(double dist0_sq, double rho, double sigma_star_sq, double t, bool ergodic,
                        std::optional<double> gamma_strong) {
  if (!(rho > 0.0)) throw InvalidParameter("bound_cocoercive: rho must be > 0");
  if (ergodic) {
    require_positive_time(t, "bound_cocoercive");
    return dist0_sq / (2.0 * rho * t) + sigma_star_sq / (2.0 * rho);
  }
  if (!gamma_strong || !(*gamma_strong > 0.0))
    throw InvalidParameter("bound_cocoercive: strong branch requires gamma > 0");
  const double g = *gamma_strong;
  return dist0_sq / 2.0 * std::exp(-2.0 * g * t) + sigma_star_sq / (4.0 * g);
}

double bound_ergodic_distance_eb(double dist0_sq, double gamma_eb, double p, double sigma_star_sq, double t) {
  require_positive_time(t, "bound_ergodic_distance_eb");
  if (!(p >= 1.0)) throw InvalidParameter("bound_ergodic_distance_eb: p must be >= 1");
  if (!(gamma_eb > 0.0)) throw InvalidParameter("bound_ergodic_distance_eb: gamma must be > 0");
  const double inv_p = 1.0 / p;
  return std::pow(dist0_sq / (2.0 * gamma_eb), inv_p) * std::pow(t, -inv_p) +
         std::pow(sigma_star_sq / (2.0 * gamma_eb), inv_p);
}

BoundReport check_bound(const GapSeries& series, std::string name, std::map<std::string, double> parameters,
                        const std::function<double(double)>& bound) {
  BoundReport r;
  r.bound_name = std::move(name);
  r.parameters = std::move(parameters);
  r.values.resize(series.times.size());
  r.worst_margin = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    const double t = series.times[i];
    double b;
    try {
      b = bound(t);
    } catch (const InvalidParameter&) {
      if (t > 0.0) throw;
      b = std::numeric_limits<double>::infinity();
    }
    r.values[i] = b;
    const double margin = (series.mean[i] - series.ci_halfwidth[i]) - b;
    if (margin > r.worst_margin) r.worst_margin = margin;
    if (margin > 0.0) {
      ++r.violations;
      r.violation_indices.push_back(i);
    }
  }
  return r;
}

}  // namespace sgflab
