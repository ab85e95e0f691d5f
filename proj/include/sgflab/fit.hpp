#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "sgflab/estimate.hpp"

namespace sgflab {

enum class FitModel { power, exponential };

std::string_view fit_model_name(FitModel m);
FitModel parse_fit_model(std::string_view name);

struct FitWindow {
  double t_lo;
  double t_hi;
};

/// Power: mean ≈ constant·t^exponent. Exponential: mean ≈ constant·e^{−exponent·t},
/// so `exponent` is the decay rate.
struct RateFit {
  FitModel model = FitModel::power;
  double exponent = 0.0;
  double constant = 0.0;
  double r2 = 0.0;
  FitWindow window{0.0, 0.0};
  std::size_t n_points = 0;
};

inline constexpr std::size_t kMinFitPoints = 5;

/// Least squares on log(y) against log(t) or t, restricted to the window.
/// Throws FitError when fewer than five points remain or a mean is not positive.
RateFit fit_rate(std::span<const double> t, std::span<const double> y, FitModel model, FitWindow window);
RateFit fit_rate(const GapSeries& series, FitModel model, FitWindow window);

/// Window starting after the first 10% of the horizon and ending before the
/// mean first drops below 3 × floor (floor ≤ 0 disables the second cut).
FitWindow default_window(const GapSeries& series, double floor = 0.0);

struct LineFit {
  double slope;
  double intercept;
  double r2;
};

/// Ordinary least squares y ≈ slope·x + intercept.
LineFit least_squares(std::span<const double> x, std::span<const double> y);

}  // namespace sgflab
