#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "sgflab/checks.hpp"
#include "sgflab/errors.hpp"
#include "sgflab/smoothing.hpp"

using namespace sgflab;

namespace {

// inf over a uniform y-grid of g(y) + (x − y)²/(2θ), dim 1.
template <class G>
double grid_envelope(G g, double x, double theta) {
  double best = INFINITY;
  for (long i = -100000; i <= 100000; ++i) {
    const double y = 5e-5 * static_cast<double>(i);
    best = std::min(best, g(y) + (x - y) * (x - y) / (2.0 * theta));
  }
  return best;
}

// Root of (x − 1) + clamp(x/θ, −1, 1) by bisection: argmin of ½(x−1)² + |·|_θ.
double bisect_smoothed_minimizer(double theta) {
  double lo = -10.0, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double d = (mid - 1.0) + std::clamp(mid / theta, -1.0, 1.0);
    (d < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_SUITE("smoothing") {
  TEST_CASE("envelope values against the grid oracle") {
    const MoreauEnvelope e(make_abs_l1(1), 0.5);
    const auto absf = [](double y) { return std::abs(y); };
    CHECK(envelope_value(e, Vector{2.0}) == doctest::Approx(1.75).epsilon(1e-14));
    CHECK(grid_envelope(absf, 2.0, 0.5) == doctest::Approx(1.75).epsilon(1e-8));
    CHECK(envelope_value(e, Vector{0.25}) == doctest::Approx(0.0625).epsilon(1e-14));
    CHECK(grid_envelope(absf, 0.25, 0.5) == doctest::Approx(0.0625).epsilon(1e-8));
    CHECK(envelope_value(e, Vector{0.0}) == 0.0);
    CHECK_THROWS_AS(MoreauEnvelope(make_abs_l1(1), 0.0), InvalidParameter);
    CHECK_THROWS_AS(MoreauEnvelope(make_abs_l1(1), -1.0), InvalidParameter);
  }

  TEST_CASE("envelope gradient") {
    const MoreauEnvelope e(make_abs_l1(1), 0.5);
    CHECK(envelope_gradient(e, Vector{2.0})[0] == 1.0);
    CHECK(envelope_gradient(e, Vector{0.25})[0] == 0.5);
    CHECK(envelope_gradient(e, Vector{0.0})[0] == 0.0);
    const double h = 1e-6;
    const double fd = (envelope_value(e, Vector{2.0 + h}) - envelope_value(e, Vector{2.0 - h})) / (2 * h);
    CHECK(fd == doctest::Approx(1.0).epsilon(1e-6));
  }

  TEST_CASE("strong convexity transfer") {
    CHECK(envelope_strong_convexity(1.0, 1.0) == 0.5);
    CHECK(std::abs(envelope_strong_convexity(2.0, 1e-9) - 2.0) < 1e-8);
    double prev = INFINITY;
    for (double th = 1.0; th < 1e6; th *= 10.0) {
      const double v = envelope_strong_convexity(1.0, th);
      CHECK(v < prev);
      prev = v;
    }
    CHECK(prev < 1e-5);
    const auto q = make_quadratic_term(2, 3.0);
    for (double th : {0.01, 0.3, 2.0}) {
      const MoreauEnvelope e(q, th);
      const Vector x{1.2, -0.7};
      const double exact = 0.5 * (3.0 / (1.0 + th * 3.0)) * (1.2 * 1.2 + 0.7 * 0.7);
      CHECK(std::abs(envelope_value(e, x) - exact) <= 1e-12 * exact);
    }
  }

  TEST_CASE("envelope gap bound") {
    const auto g = make_abs_l1(1);
    CHECK(envelope_gap_bound(g, 0.5) == 0.25);
    const MoreauEnvelope e(g, 0.5);
    const double gap = 0.25 - envelope_value(e, Vector{0.25});
    CHECK(gap == doctest::Approx(0.1875));
    CHECK(gap <= 0.25);
    CHECK(envelope_gap_bound(make_abs_l1(1, 2.0), 1.0) == 2.0);
    CHECK(envelope_gap_bound(g, 1e-12) < 1e-11);
    CHECK_THROWS_AS(envelope_gap_bound(make_indicator_box({-1.0}, {1.0}), 0.5), Unsupported);
  }

  TEST_CASE("minimizer drift bound against bisection") {
    CHECK(minimizer_drift_bound(1.0, 1.0, 0.04) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(minimizer_drift_bound(1.0, 1.0, 0.0) == 0.0);
    const auto f = make_quadratic(1, {1.0}, {1.0});
    const auto g = make_abs_l1(1);
    const auto F = make_composite(f, g);
    CHECK((*F.minimizer)[0] == 0.0);
    for (double th : {0.01, 0.04, 0.3, 1.0, 3.0}) {
      const double xt = bisect_smoothed_minimizer(th);
      const auto cs = make_composite_smoothed(f, g, th);
      CHECK((*cs.combined.minimizer)[0] == doctest::Approx(xt).epsilon(1e-12));
      CHECK(std::abs(xt - 0.0) <= minimizer_drift_bound(1.0, 1.0, th));
    }
  }

  TEST_CASE("sup argmin bound") {
    const auto r = sup_argmin_bound({1.0, 0.0, 0.0, 1.0, 1.0});
    CHECK(r.C == 0.5);
    CHECK(r.dist_bound(3.0) == 3.5);
    CHECK(sup_argmin_bound({2.0, 0.5, 1.5, 1.0, 0.0}).C == 0.5);
    CHECK_THROWS_AS(sup_argmin_bound({0.0, 0.0, 0.0, 1.0, 1.0}), InvalidParameter);
  }

  TEST_CASE("theta schedule") {
    CHECK(theta_schedule(0.01, 0.01, 1.0, ScheduleRegime::convex, 2.0).theta == doctest::Approx(0.01));
    const auto s = theta_schedule(1.0, 0.25, 2.0, ScheduleRegime::convex, 2.0);
    CHECK(s.theta == 0.0625);
    CHECK(s.t_min == 8.0);
    double prev_t = 0.0, prev_th = INFINITY;
    for (double eps = 1e-1; eps > 1e-8; eps /= 10.0) {
      const auto k = theta_schedule(1.0, eps, 1.0, ScheduleRegime::convex, 1.0);
      CHECK(k.theta <= prev_th);
      CHECK(k.t_min > prev_t);
      prev_th = k.theta;
      prev_t = k.t_min;
    }
    const auto sd = theta_schedule(0.04, 0.01, 0.0, ScheduleRegime::strongly_convex_dist, 2.0, 1.0);
    CHECK(sd.theta == 0.01);
    CHECK(sd.t_min == doctest::Approx(1.01 * std::log(4.0 / 0.02)));
    const auto sv = theta_schedule(0.04, 0.01, 2.0, ScheduleRegime::strongly_convex_value, 2.0, 1.0);
    CHECK(sv.theta == doctest::Approx(0.05));
    CHECK_THROWS_AS(theta_schedule(1.0, 0.0, 1.0, ScheduleRegime::convex, 1.0), InvalidParameter);
  }

  TEST_CASE("composite smoothed potential") {
    const auto f = make_quadratic(2, {1.0, 0.5}, {2.0, -0.3});
    const auto g = make_abs_l1(2);
    const auto F = make_composite(f, g);
    for (double th : {0.02, 0.1, 0.5}) {
      const auto cs = make_composite_smoothed(f, g, th);
      CHECK(cs.combined.lipschitz_L == doctest::Approx(1.0 + 1.0 / th));
      CHECK(cs.combined.value(*cs.combined.minimizer) <= *F.min_value + 1e-15);
      const Vector gz = cs.combined.gradient(*cs.combined.minimizer);
      CHECK(std::hypot(gz[0], gz[1]) < 1e-12);
      for (const auto& row : potential_invariants(cs.combined, 300, 3)) {
        INFO(row.report.name);
        CHECK(row.report.ok());
      }
    }
  }

  TEST_CASE("envelope invariant suites") {
    for (const auto& g : {make_abs_l1(1), make_abs_l1(3, 0.5), make_quadratic_term(2, 1.5),
                          make_indicator_box({-1.0, -1.0}, {1.0, 2.0}), make_zero_term(1)}) {
      for (const auto& row : envelope_invariants(g, 500, 9)) {
        INFO(row.report.name);
        CHECK(row.report.ok());
      }
    }
  }

  TEST_CASE("envelope tends to g as theta decreases") {
    const auto g = make_abs_l1(1);
    const Vector x{0.7};
    double prev = -INFINITY;
    auto grid = theta_grid();
    std::reverse(grid.begin(), grid.end());
    for (double th : grid) {
      const double v = envelope_value(MoreauEnvelope(g, th), x);
      CHECK(v >= prev);
      CHECK(0.7 - v <= th / 2.0 + 1e-15);
      prev = v;
    }
    CHECK(grid.size() == 17);
    CHECK(grid.back() == doctest::Approx(1e-3));
    CHECK(grid.front() == doctest::Approx(10.0));
  }
}
