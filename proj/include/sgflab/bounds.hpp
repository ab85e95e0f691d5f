#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sgflab/estimate.hpp"

namespace sgflab {

/// dist0²/(2t) + σ*²/2.
double bound_ergodic_convex(double dist0_sq, double sigma_star_sq, double t);

/// Optional split of the noise term for decreasing σ∞.
struct NoiseSplit {
  double lambda;
  std::function<double(double)> sigma_inf;
};

/// dist0² e^{−2μt} + σ*²/(2μ), or with a split
/// dist0² e^{−2μt} + σ*²/(2μ) e^{−2μ(1−λ)t} + σ∞²(λt).
double bound_strongly_convex(double dist0_sq, double mu, double sigma_star_sq, double t,
                             const std::optional<NoiseSplit>& split = std::nullopt);

/// dist0²/(2t) + (K max(1,L)/2) t^{β−1}.
double bound_pointwise_beta(double dist0_sq, double K, double beta, double L, double t);

enum class MoreauVariant {
  nuevo_1,
  nuevo_2,
  nuevo_3,
  nuevo1_1,
  nuevo1_2,
  nuevo1_3,
  nuevo1_4,
  nuevo1_5,
  nuevo1_6,
  nuevo1_7,
};

std::string_view moreau_variant_name(MoreauVariant v);
MoreauVariant parse_moreau_variant(std::string_view name);

/// Inputs of the smoothed-problem bounds. `D` is the subgradient bound of the
/// smoothed term for nuevo_*, its Lipschitz constant L₀ for nuevo1_*. `c` is
/// the strong-convexity modulus of g and `mu_f` that of f (μ′); `L` is the
/// gradient Lipschitz constant of f.
struct MoreauBoundParams {
  double dist0_sq = 0.0;
  double sigma_star_sq = 0.0;
  double theta = 0.0;
  double D = 0.0;
  double c = 0.0;
  double mu_f = 0.0;
  double L = 0.0;
  double t = 0.0;
};

/// Right-hand side of the selected variant. The ½θD² gap constant is used for
/// every variant. Distance variants bound E‖X − x*‖²/2.
double bound_moreau(MoreauVariant v, const MoreauBoundParams& p);

/// Ergodic: dist0²/(2ρt) + σ*²/(2ρ). Strong: dist0²/2 e^{−2γt} + σ*²/(4γ),
/// bounding E‖X − x*‖²/2.
double bound_cocoercive(double dist0_sq, double rho, double sigma_star_sq, double t, bool ergodic,
                        std::optional<double> gamma_strong = std::nullopt);

/// (dist0²/(2γ))^{1/p} t^{−1/p} + (σ*²/(2γ))^{1/p}.
double bound_ergodic_distance_eb(double dist0_sq, double gamma_eb, double p, double sigma_star_sq, double t);

/// Bound values aligned with a GapSeries and the count of times where the
/// lower CI edge exceeds the bound.
struct BoundReport {
  std::string bound_name;
  std::map<std::string, double> parameters;
  std::vector<double> values;
  std::size_t violations = 0;
  std::vector<std::size_t> violation_indices;
  double worst_margin = 0.0;  // max over t of (mean − ci) − bound
};

/// Evaluates `bound` at each series time; t = 0 is reported as +inf for
/// bounds that are singular there.
BoundReport check_bound(const GapSeries& series, std::string name, std::map<std::string, double> parameters,
                        const std::function<double(double)>& bound);

}  // namespace sgflab
