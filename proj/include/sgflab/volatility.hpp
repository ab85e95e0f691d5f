#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>

#include "sgflab/linalg.hpp"

namespace sgflab {

enum class VolatilityKind { constant_diagonal, decreasing_power, custom_multiplicative };

/// Certificate for ∫₀ᵗ (s+1) σ∞²(s) ds ≤ K t^β.
struct BetaCertificate {
  double K;
  double beta;
};

/// σ(t, x) = σ₀ (1+t)^{-α} s(x) E, with E the d×m matrix with ones on the
/// leading diagonal and s a Lipschitz state factor with values in [0, 1]
/// (s ≡ 1 for additive noise).
struct VolatilitySchedule {
  VolatilityKind kind = VolatilityKind::constant_diagonal;
  double sigma0 = 0.0;
  double alpha = 0.0;
  std::size_t dim = 1;
  std::size_t m = 1;
  std::function<double(std::span<const double>)> state_factor;  // empty: s ≡ 1
  double state_factor_lipschitz = 0.0;
  std::string state_factor_name = "none";

  std::size_t active() const noexcept { return dim < m ? dim : m; }

  /// Scalar multiplying the diagonal at (t, x).
  double scale(double t, std::span<const double> x) const;
  /// out = σ(t, x) dW, with dW an m-vector and out a d-vector.
  void apply(double t, std::span<const double> x, std::span<const double> dW, std::span<double> out) const;
  double frobenius_sq(double t, std::span<const double> x) const;

  /// σ∞(t) = sup_x ‖σ(t, x)‖_F.
  double sigma_inf(double t) const;
  /// σ*² = sup_{t,x} ‖σ(t, x)‖_F².
  double sigma_star_sq() const;
  /// l₀ in |σ_ik(t,x') − σ_ik(t,x)| ≤ l₀‖x' − x‖.
  double entry_lipschitz() const { return sigma0 * state_factor_lipschitz; }
  bool square_integrable() const { return sigma0 == 0.0 || alpha > 0.5; }
  bool decreasing() const { return alpha > 0.0 || sigma0 == 0.0; }
  /// Closed-form (K, β) with β ∈ [0, 1) when one exists (α > ½).
  std::optional<BetaCertificate> beta_certificate() const;
};

VolatilitySchedule constant_volatility(std::size_t dim, double sigma0, std::size_t m = 0);
VolatilitySchedule decreasing_volatility(std::size_t dim, double sigma0, double alpha, std::size_t m = 0);
/// s(x) = min(1, ‖x − anchor‖), Lipschitz with constant 1.
VolatilitySchedule multiplicative_volatility(std::size_t dim, double sigma0, double alpha, Vector anchor,
                                             std::size_t m = 0);

}  // namespace sgflab
