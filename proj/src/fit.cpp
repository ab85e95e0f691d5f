#include "sgflab/fit.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "sgflab/errors.hpp"

namespace sgflab {

std::string_view fit_model_name(FitModel m) { return m == FitModel::power ? "power" : "exponential"; }

FitModel parse_fit_model(std::string_view name) {
  if (name == "power") return FitModel::power;
  if (name == "exponential") return FitModel::exponential;
  throw InvalidParameter("unknown fit model '" + std::string(name) + "' (valid: power, exponential)");
}

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw FitError("least_squares: need at least two paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw FitError("least_squares: abscissae are all equal");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double r2 = 1.0;
  if (syy > 0.0) {
    double sse = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double e = y[i] - (slope * x[i] + intercept);
      sse += e * e;
    }
    r2 = std::max(0.0, 1.0 - sse / syy);
  }
  return {slope, intercept, r2};
}

RateFit fit_rate(std::span<const double> t, std::span<const double> y, FitModel model, FitWindow window) {
  if (t.size() != y.size()) throw FitError("fit_rate: times and values differ in length");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < window.t_lo || t[i] > window.t_hi) continue;
    if (!(y[i] > 0.0)) throw FitError("fit_rate: nonpositive mean at t = " + std::to_string(t[i]));
    if (model == FitModel::power && !(t[i] > 0.0)) continue;
    xs.push_back(model == FitModel::power ? std::log(t[i]) : t[i]);
    ys.push_back(std::log(y[i]));
  }
  if (xs.size() < kMinFitPoints)
    throw FitError("fit_rate: " + std::to_string(xs.size()) + " points in window, need " +
                   std::to_string(kMinFitPoints));
  const LineFit lf = least_squares(xs, ys);
  RateFit r;
  r.model = model;
  r.exponent = model == FitModel::power ? lf.slope : -lf.slope;
  r.constant = std::exp(lf.intercept);
  r.r2 = lf.r2;
  r.window = window;
  r.n_points = xs.size();
  return r;
}

RateFit fit_rate(const GapSeries& series, FitModel model, FitWindow window) {
  return fit_rate(series.times, series.mean, model, window);
}

FitWindow default_window(const GapSeries& series, double floor) {
  if (series.times.empty()) throw FitError("default_window: empty series");
  const double T = series.times.back();
  FitWindow w{0.1 * T, T};
  if (floor > 0.0) {
    for (std::size_t i = 0; i < series.times.size(); ++i) {
      if (series.times[i] < w.t_lo) continue;
      if (series.mean[i] < 3.0 * floor) {
        w.t_hi = i > 0 ? series.times[i - 1] : series.times[i];
        break;
      }
    }
  }
  return w;
}

}  // namespace sgflab
