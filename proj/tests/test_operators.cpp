#include <doctest.h>

#include <cmath>

#include "sgflab/checks.hpp"
#include "sgflab/errors.hpp"
#include "sgflab/operators.hpp"
#include "sgflab/rng.hpp"

using namespace sgflab;

namespace {

double soft(double v, double t) { return v > t ? v - t : (v < -t ? v + t : 0.0); }

// M for f = ½Σλᵢ(xᵢ−cᵢ)², g = w‖·‖₁, written out by hand.
Vector fb_oracle(const Vector& lam, const Vector& c, double w, double mu, const Vector& x) {
  Vector m(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double y = x[i] - mu * lam[i] * (x[i] - c[i]);
    m[i] = (x[i] - soft(y, mu * w)) / mu;
  }
  return m;
}

}  // namespace

TEST_SUITE("operators") {
  TEST_CASE("resolvent examples") {
    CHECK(resolvent(make_abs_l1(1), 1.0, Vector{2.0})[0] == 1.0);
    CHECK(resolvent(make_zero_term(1), 0.3, Vector{2.5})[0] == 2.5);
    CHECK(resolvent(make_indicator_box({-1.0}, {1.0}), 1.0, Vector{3.0})[0] == 1.0);
    CHECK_THROWS_AS(resolvent(make_abs_l1(1), 0.0, Vector{2.0}), InvalidParameter);
    const auto box = make_indicator_box({-1.0}, {1.0});
    CHECK(forward_backward(make_quadratic(1, {1.0}, {0.0}), box, 1.0, Vector{3.0})[0] == 3.0);
    CHECK(forward_backward(make_zero_potential(1), make_abs_l1(1), 1.0, Vector{2.0})[0] == 1.0);
    CHECK(cocoercivity_constant(1.0, 1e-9) < 1e-8);
  }

  TEST_CASE("cocoercivity constant") {
    CHECK(cocoercivity_constant(1.0, 1.0) == 0.75);
    CHECK(cocoercivity_constant(1.0, 0.5) == 0.4375);
    CHECK(cocoercivity_constant(1.0, 1.5) == 0.9375);
    CHECK(cocoercivity_constant(2.0, 2.0) == 1.5);
    CHECK_THROWS_AS(cocoercivity_constant(1.0, 2.0), InvalidParameter);
    CHECK_THROWS_AS(cocoercivity_constant(1.0, 0.0), InvalidParameter);
    CHECK_THROWS_AS(cocoercivity_constant(0.0, 0.5), InvalidParameter);
  }

  TEST_CASE("forward backward matches hand oracle") {
    const Vector lam{1.0, 0.5}, c{2.0, -0.3};
    const auto f = make_quadratic(2, lam, c);
    const auto g = make_abs_l1(2, 0.7);
    CounterStream rng(3, 0);
    for (int k = 0; k < 500; ++k) {
      const Vector x{4.0 * rng.normal(), 4.0 * rng.normal()};
      for (double mu : {0.3, 1.0, 1.9}) {
        const Vector got = forward_backward(f, g, mu, x);
        const Vector want = fb_oracle(lam, c, 0.7, mu, x);
        CHECK(got[0] == doctest::Approx(want[0]).epsilon(1e-13).scale(1.0));
        CHECK(got[1] == doctest::Approx(want[1]).epsilon(1e-13).scale(1.0));
      }
    }
    CHECK_THROWS_AS(forward_backward(f, g, 2.0, Vector{0.0, 0.0}), InvalidParameter);
    CHECK_THROWS_AS(forward_backward(f, g, -1.0, Vector{0.0, 0.0}), InvalidParameter);
  }

  TEST_CASE("zero of M is the composite minimizer") {
    const auto F = make_composite(make_quadratic(2, {1.0, 0.5}, {2.0, -0.3}), make_abs_l1(2));
    REQUIRE(F.minimizer);
    CHECK((*F.minimizer)[0] == 1.0);
    CHECK((*F.minimizer)[1] == 0.0);
    for (double mu : {0.5, 1.0, 1.5}) {
      const auto op = make_forward_backward_operator(F, mu);
      const Vector m = op.apply(*F.minimizer);
      CHECK(norm(m) <= 1e-12);
      CHECK(op.rho == cocoercivity_constant(1.0, mu));
    }
  }

  TEST_CASE("zero g reduces to the gradient") {
    const auto f = make_quadratic(3, {2.0, 1.0, 0.25}, {0.1, -1.0, 3.0});
    const auto F = make_composite(f, make_zero_term(3));
    const auto op = make_forward_backward_operator(F, 0.7);
    const Vector x{0.3, 0.9, -2.0};
    const Vector a = op.apply(x), b = f.gradient(x);
    for (std::size_t i = 0; i < 3; ++i) CHECK(a[i] == b[i]);
    CHECK(op.rho == 0.5);
  }

  TEST_CASE("cocoercivity on random pairs") {
    const auto F = make_composite(make_quadratic(2, {1.0, 0.5}, {2.0, -0.3}), make_abs_l1(2));
    for (double mu : {0.5, 1.0, 1.5}) {
      const auto op = make_forward_backward_operator(F, mu);
      const auto r = check_cocoercivity(op, *F.minimizer, 5.0, 10000);
      CHECK(r.checked == 10000);
      CHECK(r.ok());
      const auto l = check_operator_lipschitz(op, 1.0 / op.rho, *F.minimizer, 5.0, 2000);
      CHECK(l.ok());
    }
    const auto box = make_composite(make_quadratic(2, {1.0, 1.0}, {3.0, 0.0}), make_indicator_box({-1.0, -1.0}, {1.0, 1.0}));
    CHECK(check_cocoercivity(make_forward_backward_operator(box, 1.0), Vector{0.0, 0.0}, 4.0, 5000).ok());
  }

  TEST_CASE("cocoercivity fails for an overstated rho") {
    const auto F = make_composite(make_quadratic(1, {1.0}, {0.0}), make_zero_term(1));
    auto op = make_forward_backward_operator(F, 1.0);
    op.rho = 2.0;
    const auto r = check_cocoercivity(op, Vector{0.0}, 3.0, 1000);
    CHECK_FALSE(r.ok());
    CHECK(r.worst_margin < 0.0);
  }

  TEST_CASE("saturated square operator") {
    const auto op = make_saturated_square_operator(2);
    const Vector x{0.3, -0.4};
    const Vector m = op.apply(x);
    CHECK(m[0] == doctest::Approx(0.15));
    CHECK(m[1] == doctest::Approx(-0.2));
    CHECK(op.apply(Vector{3.0, 4.0})[0] == 3.0);
    CHECK(check_cocoercivity(op, *op.zero, 3.0, 10000).ok());
    const auto h = check_hms(op, 1.0, 5000);
    CHECK(h.ok());
    CHECK(h.worst_margin >= -1e-15);
    CHECK_THROWS_AS(check_hms(make_forward_backward_operator(
                                  make_composite(make_quadratic(1, {1.0}, {0.0}), make_abs_l1(1)), 1.0)),
                    Unsupported);
  }

  TEST_CASE("yosida approximation") {
    const auto F = make_composite(make_zero_potential(2), make_abs_l1(2));
    for (double mu : {0.25, 1.0}) {
      const auto op = make_forward_backward_operator(F, mu);
      CHECK(op.rho == mu);
      const Vector m = op.apply(Vector{3.0, 0.1});
      CHECK(m[0] == doctest::Approx(1.0));
      CHECK(m[1] == doctest::Approx(0.1 / mu > 1.0 ? 1.0 : 0.1 / mu));
      CHECK(check_operator_lipschitz(op, 1.0 / mu, Vector{0.0, 0.0}, 5.0, 3000).ok());
    }
  }

  TEST_CASE("operator invariant suite") {
    for (const auto& F : {make_composite(make_quadratic(2, {1.0, 0.5}, {2.0, -0.3}), make_abs_l1(2)),
                          make_composite(make_quadratic(1, {2.0}, {0.5}), make_quadratic_term(1, 1.0)),
                          make_composite(make_quadratic(2, {1.0, 1.0}, {3.0, 0.0}),
                                         make_indicator_box({-1.0, -1.0}, {1.0, 1.0}))}) {
      for (const auto& row : operator_invariants(F, 2000, 5)) {
        INFO(row.report.name);
        CHECK(row.report.ok());
      }
    }
  }
}
