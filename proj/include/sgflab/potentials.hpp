#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sgflab/linalg.hpp"
#include "sgflab/rng.hpp"

namespace sgflab {

using ScalarField = std::function<double(std::span<const double>)>;
using VectorField = std::function<Vector(std::span<const double>)>;
using ProxMap = std::function<Vector(std::span<const double>, double)>;

/// Convex f with Lipschitz gradient and closed-form ground truth.
///
/// Objects are immutable once built by one of the make_* functions and can be
/// shared freely between Monte-Carlo workers.
struct SmoothPotential {
  std::string name;
  std::size_t dim = 0;
  ScalarField value;
  VectorField gradient;
  double lipschitz_L = 0.0;
  std::optional<double> strong_mu;
  double min_value = 0.0;
  ScalarField dist_to_argmin;
  std::optional<Vector> minimizer;  // one point of argmin f

  // Error-bound / Lojasiewicz data; valid on the ball of eb_radius around
  // argmin when eb_radius is set, globally otherwise.
  std::optional<double> eb_exponent_p;
  std::optional<double> eb_gamma;
  std::optional<double> loja_q;
  std::optional<double> loja_mu;
  std::optional<double> eb_radius;

  // Populated for separable quadratics ½Σλᵢ(xᵢ−cᵢ)²; used by closed-form
  // composite minimizers.
  std::optional<Vector> quadratic_eigenvalues;
  std::optional<Vector> quadratic_center;
};

enum class TermKind { zero, weighted_l1, box_indicator, quadratic };

/// Convex g ∈ Γ₀ with exact proximal map and optional global constants.
struct NonsmoothTerm {
  std::string name;
  TermKind kind = TermKind::zero;
  std::size_t dim = 0;
  ScalarField value;  // +inf outside the domain
  ProxMap prox;       // prox(x, θ) = argmin_y g(y) + ‖x−y‖²/(2θ)
  VectorField min_norm_subgradient;
  std::optional<double> lipschitz_L0;     // nullopt: not finite
  std::optional<double> subgrad_bound_D;  // nullopt: not finite
  std::optional<double> strong_c;         // strong-convexity modulus of g
  double min_value = 0.0;
  std::vector<Vector> argmin_known;

  // Catalog parameters (meaning depends on kind).
  double weight = 0.0;
  Vector lo, hi;

  bool has_finite_constants() const { return lipschitz_L0.has_value() && subgrad_bound_D.has_value(); }
};

/// f(x) = ½ Σ λᵢ (xᵢ − cᵢ)².
SmoothPotential make_quadratic(std::size_t dim, const Vector& eigenvalues, const Vector& center);

/// f(x) = ‖x‖^r, r ≥ 2. lipschitz_L is the local constant on the ball of `radius`.
SmoothPotential make_power_norm(std::size_t dim, double r, double radius = 1.0);

/// f ≡ 0 (argmin is the whole space).
SmoothPotential make_zero_potential(std::size_t dim);

/// g(x) = w Σ |xᵢ|.
NonsmoothTerm make_abs_l1(std::size_t dim, double weight = 1.0);

/// Indicator of the box [lo, hi]; no finite L₀ or D.
NonsmoothTerm make_indicator_box(const Vector& lo, const Vector& hi);

/// g ≡ 0.
NonsmoothTerm make_zero_term(std::size_t dim);

/// g(x) = (c/2)‖x‖², c-strongly convex, not globally Lipschitz.
NonsmoothTerm make_quadratic_term(std::size_t dim, double c);

/// F = f + g with its minimizer when it is available in closed form.
struct CompositeProblem {
  SmoothPotential f;
  NonsmoothTerm g;
  std::optional<Vector> minimizer;
  std::optional<double> min_value;

  double value(std::span<const double> x) const { return f.value(x) + g.value(x); }
};

/// Builds F = f + g. For a separable quadratic f and any catalog g the
/// minimizer is the coordinatewise prox of the center with step 1/λᵢ.
CompositeProblem make_composite(SmoothPotential f, NonsmoothTerm g);

/// Outcome of a sampled inequality check.
struct BooleanReport {
  std::string name;
  std::size_t checked = 0;
  std::size_t passed = 0;
  std::size_t skipped = 0;
  double worst_margin = 0.0;  // most negative (rhs-side slack) seen; ≥ 0 when all pass

  bool ok() const { return passed == checked; }
  double pass_fraction() const { return checked == 0 ? 1.0 : static_cast<double>(passed) / checked; }
};

/// Uniform sample in the ball of `radius` around `center`.
Vector sample_ball(std::span<const double> center, double radius, CounterStream& rng);

/// f(x) − min f ≥ γ dist(x,S)^p on samples within `radius` of argmin.
BooleanReport check_error_bound(const SmoothPotential& p, double radius, std::size_t samples,
                                double gamma_candidate, std::uint64_t seed = 0xC0FFEE);

/// μ (f(x) − min f)^q ≤ ‖∇f(x)‖ on samples within `radius` of argmin with
/// f(x) > min f, plus the implied error bound with p = 1/(1−q) and
/// γ = (μ(1−q))^p on the same samples.
BooleanReport check_lojasiewicz(const SmoothPotential& p, double radius, std::size_t samples,
                                std::uint64_t seed = 0xC0FFEE);

}  // namespace sgflab
