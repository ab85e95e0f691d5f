#include "sgflab/volatility.hpp"

#include <algorithm>
#include <cmath>

#include "sgflab/errors.hpp"

namespace sgflab {

double VolatilitySchedule::scale(double t, std::span<const double> x) const {
  double s = sigma0;
  if (alpha != 0.0) s *= std::pow(1.0 + t, -alpha);
  if (state_factor) s *= state_factor(x);
  return s;
}

void VolatilitySchedule::apply(double t, std::span<const double> x, std::span<const double> dW,
                               std::span<double> out) const {
  const double s = scale(t, x);
  const std::size_t a = active();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = i < a ? s * dW[i] : 0.0;
}

double VolatilitySchedule::frobenius_sq(double t, std::span<const double> x) const {
  const double s = scale(t, x);
  return s * s * static_cast<double>(active());
}

double VolatilitySchedule::sigma_inf(double t) const {
  double s = sigma0;
  if (alpha != 0.0) s *= std::pow(1.0 + t, -alpha);
  return s * std::sqrt(static_cast<double>(active()));
}

double VolatilitySchedule::sigma_star_sq() const { return sigma0 * sigma0 * static_cast<double>(active()); }

std::optional<BetaCertificate> VolatilitySchedule::beta_certificate() const {
  const double S = sigma_star_sq();
  if (S == 0.0) return BetaCertificate{0.0, 0.0};
  if (!(alpha > 0.5)) return std::nullopt;
  // ∫₀ᵗ S(1+s)^{1−2α} ds in closed form, bounded by K t^β.
  if (alpha > 1.0) {
    // ≤ S·min(t, 1/(2α−2)) ≤ K with β = 0.
    return BetaCertificate{S / (2.0 * alpha - 2.0), 0.0};
  }
  if (alpha == 1.0) {
    // S·ln(1+t) ≤ (S/β) t^β for β ∈ (0, 1]; β = ½.
    return BetaCertificate{2.0 * S, 0.5};
  }
  // ((1+t)^{2−2α} − 1)/(2−2α) ≤ t^{2−2α}/(2−2α) by subadditivity of s ↦ s^{2−2α}.
  const double beta = 2.0 - 2.0 * alpha;
  return BetaCertificate{S / beta, beta};
}

namespace {

VolatilitySchedule base_schedule(std::size_t dim, double sigma0, double alpha, std::size_t m) {
  if (dim == 0) throw InvalidProblem("volatility: dimension must be positive");
  if (!(sigma0 >= 0.0) || !std::isfinite(sigma0)) throw InvalidProblem("volatility: sigma0 must be >= 0");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw InvalidProblem("volatility: alpha must be >= 0");
  VolatilitySchedule v;
  v.sigma0 = sigma0;
  v.alpha = alpha;
  v.dim = dim;
  v.m = m == 0 ? dim : m;
  v.kind = alpha > 0.0 ? VolatilityKind::decreasing_power : VolatilityKind::constant_diagonal;
  return v;
}

}  // namespace

VolatilitySchedule constant_volatility(std::size_t dim, double sigma0, std::size_t m) {
  return base_schedule(dim, sigma0, 0.0, m);
}

VolatilitySchedule decreasing_volatility(std::size_t dim, double sigma0, double alpha, std::size_t m) {
  return base_schedule(dim, sigma0, alpha, m);
}

VolatilitySchedule multiplicative_volatility(std::size_t dim, double sigma0, double alpha, Vector anchor,
                                             std::size_t m) {
  if (anchor.size() != dim) throw InvalidProblem("volatility: anchor must have length dim");
  VolatilitySchedule v = base_schedule(dim, sigma0, alpha, m);
  v.kind = VolatilityKind::custom_multiplicative;
  v.state_factor = [anchor = std::move(anchor)](std::span<const double> x) {
    return std::min(1.0, distance(x, anchor));
  };
  v.state_factor_lipschitz = 1.0;
  v.state_factor_name = "clip_norm";
  return v;
}

}  // namespace sgflab
