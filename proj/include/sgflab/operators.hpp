#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "sgflab/potentials.hpp"

namespace sgflab {

/// Single-valued ρ-cocoercive operator with optional zero-set metadata.
struct CocoerciveOperator {
  std::string name;
  std::size_t dim = 0;
  VectorField apply;
  double rho = 0.0;
  std::optional<double> gamma_strong;
  std::optional<Vector> zero;  // a point of M⁻¹(0)
  std::optional<ScalarField> zero_set_dist;
  std::optional<double> hms_p;
  std::optional<double> hms_gamma;
};

/// J_{μ∂g}(x) = prox_{μg}(x).
Vector resolvent(const NonsmoothTerm& term, double mu, std::span<const double> x);

/// M_{∂g,∇f,μ}(x) = (x − J_{μ∂g}(x − μ∇f(x)))/μ, for 0 < μ < 2/L.
Vector forward_backward(const SmoothPotential& f, const NonsmoothTerm& g, double mu, std::span<const double> x);

/// ρ = μ(1 − μ/(4λ)) for a λ-cocoercive forward part, 0 < μ < 2λ.
double cocoercivity_constant(double lambda, double mu);

/// Packages forward_backward(f, g, μ) as a cocoercive operator; λ is taken as
/// 1/L and the zero set as argmin(f + g) when known.
CocoerciveOperator make_forward_backward_operator(const CompositeProblem& problem, double mu);

/// M(x) = x·min(1, ‖x‖): ½-cocoercive, HMS with p = 4, γ = 1 on the unit ball.
CocoerciveOperator make_saturated_square_operator(std::size_t dim);

/// ‖M(x)‖² ≥ γ dist(x, M⁻¹(0))^p on samples within `radius` of the zero set.
BooleanReport check_hms(const CocoerciveOperator& op, double radius = 1.0, std::size_t samples = 10000,
                        std::uint64_t seed = 0xC0FFEE);

/// ⟨Mx − My, x − y⟩ ≥ ρ‖Mx − My‖² − slack on random pairs in the ball of
/// `radius` around `center`.
BooleanReport check_cocoercivity(const CocoerciveOperator& op, std::span<const double> center, double radius,
                                 std::size_t pairs, double slack = 1e-12, std::uint64_t seed = 0xC0FFEE);

/// ‖Mx − My‖ ≤ (1/ρ)‖x − y‖ on random pairs.
BooleanReport check_operator_lipschitz(const CocoerciveOperator& op, double lipschitz, std::span<const double> center,
                                       double radius, std::size_t pairs, std::uint64_t seed = 0xC0FFEE);

}  // namespace sgflab
