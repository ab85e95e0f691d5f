#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sgflab/errors.hpp"
#include "sgflab/estimate.hpp"
#include "sgflab/fit.hpp"
#include "sgflab/simulate.hpp"

using namespace sgflab;

namespace {

Dynamics half_square() { return gradient_dynamics(make_quadratic(1, {1.0}, {0.0})); }

}  // namespace

TEST_SUITE("simulate") {
  TEST_CASE("single step examples") {
    const Vector x{1.0}, g{1.0};
    CHECK(em_step(x, g, 0.1, 0.0, Vector{0.0})[0] == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(em_step(x, g, 0.1, 0.5, Vector{0.2})[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(em_step(x, g, 1e-300, 0.0, Vector{0.0})[0] == 1.0);
    CHECK_THROWS_AS(em_step(Vector{NAN}, g, 0.1, 0.0, Vector{0.0}, 7), NumericFailure);
    try {
      em_step(x, Vector{INFINITY}, 0.1, 0.0, Vector{0.0}, 7);
      FAIL("expected NumericFailure");
    } catch (const NumericFailure& e) {
      CHECK(e.step() == 7);
    }
  }

  TEST_CASE("noiseless run follows the gradient flow") {
    const auto dyn = half_square();
    const auto vol = constant_volatility(1, 0.0);
    double prev_err = INFINITY;
    for (int level : {6, 8, 10}) {
      const auto tr = simulate(dyn, vol, Vector{1.0}, 2.0, level, sample_brownian(1, 0, 2.0, level));
      double err = 0.0;
      for (std::size_t k = 0; k < tr.size(); ++k)
        err = std::max(err, std::abs(tr.states[k][0] - std::exp(-tr.times[k])));
      const double h = 2.0 / std::ldexp(1.0, level);
      CHECK(err <= h);
      CHECK(err < prev_err / 3.0);
      prev_err = err;
    }
  }

  TEST_CASE("operator drift with zero g equals the gradient drift") {
    const auto f = make_quadratic(1, {1.0}, {0.0});
    const auto F = make_composite(f, make_zero_term(1));
    const auto opdyn = operator_dynamics(make_forward_backward_operator(F, 1.0), F);
    const auto gdyn = gradient_dynamics(f);
    const auto vol = constant_volatility(1, 0.7);
    const auto path = sample_brownian(9, 3, 4.0, 9);
    const auto a = simulate(gdyn, vol, Vector{2.0}, 4.0, 9, path);
    const auto b = simulate(opdyn, vol, Vector{2.0}, 4.0, 9, path);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a.states[k][0] == b.states[k][0]);
  }

  TEST_CASE("recording stride") {
    const auto dyn = half_square();
    const auto vol = constant_volatility(1, 0.3);
    const auto path = sample_brownian(2, 0, 1.0, 6);
    const auto full = simulate(dyn, vol, Vector{1.0}, 1.0, 6, path);
    const auto sparse = simulate(dyn, vol, Vector{1.0}, 1.0, 6, path, 5);
    CHECK(full.size() == 65);
    CHECK(sparse.size() == 14);
    CHECK(sparse.times.back() == 1.0);
    for (std::size_t r = 0; r + 1 < sparse.size(); ++r) {
      CHECK(sparse.states[r] == full.states[5 * r]);
      CHECK(sparse.running_average[r] == full.running_average[5 * r]);
    }
    CHECK(sparse.running_objective_average.back() == full.running_objective_average.back());
    CHECK_THROWS_AS(simulate(dyn, vol, Vector{1.0}, 1.0, 6, path, 0), InvalidParameter);
    CHECK_THROWS_AS(simulate(dyn, vol, Vector{1.0}, 2.0, 6, path), InvalidParameter);
    CHECK_THROWS_AS(simulate(dyn, vol, Vector{1.0, 0.0}, 1.0, 6, path), InvalidParameter);
  }

  TEST_CASE("running averages are left Riemann sums") {
    const auto dyn = half_square();
    const auto tr = simulate(dyn, constant_volatility(1, 0.5), Vector{1.5}, 1.0, 4, sample_brownian(4, 0, 1.0, 4));
    double sx = 0.0, sf = 0.0;
    CHECK(tr.running_average[0][0] == 1.5);
    for (std::size_t k = 1; k < tr.size(); ++k) {
      sx += tr.states[k - 1][0];
      sf += 0.5 * tr.states[k - 1][0] * tr.states[k - 1][0];
      CHECK(tr.running_average[k][0] == doctest::Approx(sx / k).epsilon(1e-14));
      CHECK(tr.running_objective_average[k] == doctest::Approx(sf / k).epsilon(1e-14));
    }
  }

  TEST_CASE("time average inequality chain") {
    const auto f = make_quadratic(2, {1.0, 0.3}, {0.5, -1.0});
    const auto dyn = gradient_dynamics(f);
    const auto vol = constant_volatility(2, 0.8);
    for (std::uint64_t p = 0; p < 20; ++p) {
      const auto tr = simulate(dyn, vol, Vector{3.0, 3.0}, 5.0, 8, sample_brownian(7, p, 5.0, 8, 2));
      for (std::size_t k = 0; k < tr.size(); ++k) {
        const double tol = 1e-12 * (1.0 + tr.running_sqnorm_average[k]);
        CHECK(f.value(tr.running_average[k]) <= tr.running_objective_average[k] + tol);
        CHECK(norm(tr.running_average[k]) <= tr.running_norm_average[k] + tol);
        CHECK(tr.running_norm_average[k] * tr.running_norm_average[k] <= tr.running_sqnorm_average[k] + tol);
      }
    }
  }

  TEST_CASE("interpolants") {
    const auto dyn = half_square();
    const auto quiet = constant_volatility(1, 0.0);
    const auto tr = simulate(dyn, quiet, Vector{1.0}, 1.0, 3, sample_brownian(1, 0, 1.0, 3));
    const auto [h0, l0] = interpolants(tr, dyn, quiet, nullptr, 0.25);
    CHECK(h0 == tr.states[2]);
    CHECK(l0 == tr.states[2]);
    const auto [h1, l1] = interpolants(tr, dyn, quiet, nullptr, 0.3);
    CHECK(h1 == tr.states[2]);
    CHECK(l1[0] == doctest::Approx(tr.states[2][0] - 0.05 * tr.states[2][0]).epsilon(1e-14));
    CHECK_THROWS_AS(interpolants(tr, dyn, quiet, nullptr, 1.5), RangeError);
    CHECK_THROWS_AS(interpolants(tr, dyn, quiet, nullptr, -0.1), RangeError);

    const auto noisy = constant_volatility(1, 1.0);
    const auto coarse = sample_brownian(1, 0, 1.0, 3);
    const auto fine = coarse.at_level(6);
    const auto trn = simulate(dyn, noisy, Vector{1.0}, 1.0, 3, coarse);
    const auto [hn, ln] = interpolants(trn, dyn, noisy, &fine, 0.25);
    CHECK(hn == trn.states[2]);
    CHECK(ln[0] == doctest::Approx(trn.states[2][0]).epsilon(1e-14));
    const auto [hn1, ln1] = interpolants(trn, dyn, noisy, &fine, 0.375);
    CHECK(ln1[0] == doctest::Approx(trn.states[3][0]).epsilon(1e-13));
    const double tm = 0.25 + 1.0 / 64.0;
    const auto w = fine.values();
    const auto [hm, lm] = interpolants(trn, dyn, noisy, &fine, tm);
    CHECK(hm == trn.states[2]);
    CHECK(lm[0] == doctest::Approx(trn.states[2][0] * (1.0 - 1.0 / 64.0) + (w[17] - w[16])).epsilon(1e-13));
    CHECK_THROWS_AS(interpolants(trn, dyn, noisy, nullptr, 0.25), InvalidParameter);
    CHECK_THROWS_AS(interpolants(trn, dyn, noisy, &fine, 0.3), RangeError);
  }

  TEST_CASE("interpolant gap shrinks with the step") {
    const auto dyn = half_square();
    const auto vol = constant_volatility(1, 1.0);
    const int fine_level = 11;
    std::vector<double> hs, gaps;
    for (int level : {4, 5, 6, 7}) {
      MomentAccumulator acc;
      for (std::uint64_t p = 0; p < 300; ++p) {
        const auto coarse = sample_brownian(21, p, 1.0, level);
        const auto fine = coarse.at_level(fine_level);
        const auto tr = simulate(dyn, vol, Vector{1.0}, 1.0, level, coarse);
        double sup = 0.0;
        for (std::size_t j = 0; j <= fine.steps(); j += 2) {
          const auto [a, b] = interpolants(tr, dyn, vol, &fine, static_cast<double>(j) * fine.step_size());
          sup = std::max(sup, (a[0] - b[0]) * (a[0] - b[0]));
        }
        acc.add(sup);
      }
      hs.push_back(1.0 / std::ldexp(1.0, level));
      gaps.push_back(acc.mean);
    }
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < hs.size(); ++i) {
      lx.push_back(std::log(hs[i]));
      ly.push_back(std::log(gaps[i]));
    }
    const auto lf = least_squares(lx, ly);
    // h·log(1/h) scaling of a Brownian sup over cells reads as a slope a bit under 1
    CHECK(lf.slope > 0.7);
    CHECK(lf.slope < 1.2);
  }

  TEST_CASE("OU second moment") {
    const double s = 0.5, T = 2.0;
    PathSetup setup{half_square(), constant_volatility(1, s), Vector{1.0}, T, 10, 1024, 17};
    MomentAccumulator acc;
    for (std::uint64_t p = 0; p < 20000; ++p) {
      const auto tr = setup.run(p);
      acc.add(tr.states.back()[0] * tr.states.back()[0]);
    }
    const double oracle = std::exp(-2.0 * T) + s * s * (1.0 - std::exp(-2.0 * T)) / 2.0;
    const double h = T / 1024.0;
    // Euler bias of the stationary variance is O(h)
    CHECK(std::abs(acc.mean - oracle) <= acc.ci95() + h);
  }

  TEST_CASE("divergence is reported with its step") {
    const auto dyn = half_square();
    const auto vol = constant_volatility(1, 0.0);
    try {
      simulate(dyn, vol, Vector{1e5}, 100.0, 3, sample_brownian(1, 0, 100.0, 3));
      FAIL("expected Divergence");
    } catch (const Divergence& e) {
      CHECK(e.step() >= 1);
      CHECK(e.step() <= 8);
    }
    CHECK_THROWS_AS(simulate(dyn, vol, Vector{NAN}, 1.0, 3, sample_brownian(1, 0, 1.0, 3)), NumericFailure);
  }

  TEST_CASE("trajectory csv") {
    const auto f = make_quadratic(2, {1.0, 1.0}, {0.0, 0.0});
    const auto tr = simulate(gradient_dynamics(f), constant_volatility(2, 0.0), Vector{1.0, 0.0}, 1.0, 1,
                             sample_brownian(1, 0, 1.0, 1, 2));
    std::ostringstream os;
    write_trajectory_csv(tr, os);
    CHECK(os.str() == "t,x_0,x_1,favg,gap\n0,1,0,0.5,0.5\n0.5,0.5,0,0.5,0.125\n1,0.25,0,0.3125,0.03125\n");
  }

  TEST_CASE("trajectories are reproducible") {
    PathSetup setup{half_square(), constant_volatility(1, 0.4), Vector{1.0}, 1.0, 8, 1, 99};
    const auto a = setup.run(12), b = setup.run(12);
    CHECK(a.states == b.states);
    CHECK(a.running_objective_average == b.running_objective_average);
  }
}
