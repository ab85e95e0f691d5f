#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sgflab/estimate.hpp"
#include "sgflab/operators.hpp"
#include "sgflab/smoothing.hpp"
#include "sgflab/volatility.hpp"

namespace sgflab {

/// One sampled invariant with the module it belongs to.
struct CheckRow {
  std::string suite;
  BooleanReport report;
};

/// Centered finite differences, gradient Lipschitz bound, strong convexity,
/// ‖∇f‖² ≤ 2L(f − min f), plus error-bound/Łojasiewicz data when present.
std::vector<CheckRow> potential_invariants(const SmoothPotential& f, std::size_t samples,
                                           std::uint64_t seed = kDefaultSeed);

/// Prox variational inequality and L₀-Lipschitz continuity when finite.
std::vector<CheckRow> term_invariants(const NonsmoothTerm& g, std::size_t samples, std::uint64_t seed = kDefaultSeed);

/// Envelope sandwich, gradient identity, (1/θ)-Lipschitz gradient,
/// monotonicity in θ, argmin preservation and, for quadratic terms, the exact
/// strong-convexity transfer.
std::vector<CheckRow> envelope_invariants(const NonsmoothTerm& g, std::size_t samples,
                                          std::uint64_t seed = kDefaultSeed);

/// Cocoercivity of the forward-backward operator for μ ∈ {λ/2, λ, 3λ/2},
/// zero consistency at the composite minimizer and the Yosida Lipschitz bound.
std::vector<CheckRow> operator_invariants(const CompositeProblem& problem, std::size_t samples,
                                          std::uint64_t seed = kDefaultSeed);

/// Frobenius envelope, entrywise Lipschitz bound, square-integrability tag.
std::vector<CheckRow> volatility_invariants(const VolatilitySchedule& vol, std::size_t samples,
                                            std::uint64_t seed = kDefaultSeed);

/// Everything above for one problem and schedule.
std::vector<CheckRow> run_check_suite(const CompositeProblem& problem, const VolatilitySchedule& vol,
                                      std::size_t samples, std::uint64_t seed = kDefaultSeed);

/// Log-spaced θ grid 10⁻³ … 10¹ with 17 points.
std::vector<double> theta_grid();

}  // namespace sgflab
