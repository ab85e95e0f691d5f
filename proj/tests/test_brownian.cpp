#include <doctest.h>

#include <cmath>

#include "sgflab/brownian.hpp"
#include "sgflab/estimate.hpp"

using namespace sgflab;

TEST_SUITE("brownian") {
  TEST_CASE("grid shape") {
    const auto p = sample_brownian(1, 0, 2.0, 5, 3);
    CHECK(p.steps() == 32);
    CHECK(p.dim() == 3);
    CHECK(p.step_size() == 2.0 / 32.0);
    CHECK(p.values(1).size() == 33);
    CHECK(p.values(1).front() == 0.0);
  }

  TEST_CASE("refine preserves sums exactly") {
    const auto coarse = sample_brownian(11, 4, 1.0, 3, 2);
    const auto fine = coarse.refine();
    REQUIRE(fine.level() == 4);
    for (std::size_t k = 0; k < coarse.steps(); ++k)
      for (std::size_t j = 0; j < 2; ++j) {
        CHECK(fine.increment_quanta(2 * k)[j] + fine.increment_quanta(2 * k + 1)[j] == coarse.increment_quanta(k)[j]);
        CHECK(fine.increment(2 * k)[j] + fine.increment(2 * k + 1)[j] == coarse.increment(k)[j]);
      }
    const auto back = fine.coarsen();
    for (std::size_t k = 0; k < coarse.steps(); ++k) CHECK(back.increment_quanta(k)[0] == coarse.increment_quanta(k)[0]);
    const auto deep = coarse.at_level(9);
    CHECK(deep.values(0).back() == coarse.values(0).back());
    CHECK(deep.at_level(3).values(1) == coarse.values(1));
  }

  TEST_CASE("paths are pure functions of their key") {
    const auto a = sample_brownian(5, 17, 3.0, 8);
    const auto b = sample_brownian(5, 17, 3.0, 8);
    CHECK(a.values() == b.values());
    const auto c = sample_brownian(5, 18, 3.0, 8);
    CHECK(a.values() != c.values());
    const auto d = sample_brownian(6, 17, 3.0, 8);
    CHECK(a.values() != d.values());
    // sampling directly at a level agrees with refining a coarser sample
    CHECK(sample_brownian(5, 17, 3.0, 4).at_level(8).values() == a.values());
    CHECK(keyed_normal(1, 2, 3, 4, 0) == keyed_normal(1, 2, 3, 4, 0));
    CHECK(keyed_normal(1, 2, 3, 4, 0) != keyed_normal(1, 2, 3, 4, 1));
  }

  TEST_CASE("terminal variance and increment moments") {
    const double T = 2.0;
    const int level = 6;
    MomentAccumulator wT, inc, inc_sq;
    for (std::uint64_t i = 0; i < 100000; ++i) {
      const auto p = sample_brownian(kDefaultSeed, i, T, level);
      wT.add(p.values().back());
      if (i < 5000)
        for (std::size_t k = 0; k < p.steps(); ++k) {
          inc.add(p.increment(k)[0]);
          inc_sq.add(p.increment(k)[0] * p.increment(k)[0]);
        }
    }
    const double h = T / 64.0;
    CHECK(std::abs(wT.mean) < 4.0 * std::sqrt(T / 1e5));
    // Var of a sample variance of Gaussians: 2σ⁴/(n−1)
    CHECK(std::abs(wT.variance() - T) < 4.0 * T * std::sqrt(2.0 / 1e5));
    CHECK(std::abs(inc.mean) < 4.0 * std::sqrt(h / inc.n));
    CHECK(std::abs(inc_sq.mean - h) < 4.0 * h * std::sqrt(2.0 / inc_sq.n));
  }

  TEST_CASE("increments at distinct steps are uncorrelated") {
    MomentAccumulator prod;
    for (std::uint64_t i = 0; i < 20000; ++i) {
      const auto p = sample_brownian(3, i, 1.0, 4);
      prod.add(p.increment(3)[0] * p.increment(4)[0]);
    }
    const double h = 1.0 / 16.0;
    CHECK(std::abs(prod.mean) < 4.0 * h / std::sqrt(2e4));
  }
}
