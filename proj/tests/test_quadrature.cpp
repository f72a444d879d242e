#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "fracineq/quadrature.hpp"
#include "fracineq/random.hpp"

using namespace fracineq;
using Catch::Matchers::WithinAbs;

TEST_CASE("integrate: closed-form anchors", "[quadrature]") {
  QuadConfig cfg;
  CHECK_THAT(integrate([](double) { return 1.0; }, 0.0, 1.0, cfg).value, WithinAbs(1.0, 1e-14));
  CHECK_THAT(integrate([](double t) { return std::abs(t - 0.5); }, 0.0, 1.0, cfg).value, WithinAbs(0.25, 1e-12));
  CHECK_THAT(integrate([](double t) { return std::sin(t); }, 0.0, std::numbers::pi, cfg).value,
             WithinAbs(2.0, 1e-12));
  CHECK_THAT(integrate([](double t) { return std::exp(t); }, -1.0, 2.0, cfg).value,
             WithinAbs(std::exp(2.0) - std::exp(-1.0), 1e-11));
}

TEST_CASE("integrate: breakpoints do not change the value", "[quadrature]") {
  const auto sq = [](double t) { return t * t; };
  const auto r = integrate(sq, 0.0, 1.0, QuadConfig{}.with_breakpoints({0.3}));
  CHECK_THAT(r.value, WithinAbs(1.0 / 3.0, 1e-14));
  CHECK(r.converged);
  // the kink at 0.5 sits on a breakpoint, so one pass of GK21 per piece is exact
  const auto k = integrate([](double t) { return std::abs(t - 0.5); }, 0.0, 1.0, QuadConfig{}.with_breakpoints({0.5}));
  CHECK_THAT(k.value, WithinAbs(0.25, 1e-15));
  CHECK(k.subdivisions == 2);
}

TEST_CASE("integrate: tight config meets its target", "[quadrature]") {
  const auto r = integrate([](double t) { return std::sqrt(t); }, 0.0, 1.0, QuadConfig::tight());
  CHECK(r.converged);
  CHECK_THAT(r.value, WithinAbs(2.0 / 3.0, 1e-12));
  CHECK(r.err_estimate <= 1e-12);
}

TEST_CASE("integrate: budget exhaustion", "[quadrature]") {
  QuadConfig cfg;
  cfg.max_subdivisions = 3;
  const auto f = [](double t) { return 1.0 / std::sqrt(std::abs(t - 0.3)); };
  try {
    (void)integrate(f, 0.0, 1.0, cfg);
    FAIL("expected NonConvergence");
  } catch (const NonConvergence& e) {
    CHECK(e.kind() == ErrorKind::non_convergence);
    CHECK_FALSE(e.best().converged);
    CHECK(std::isfinite(e.best().value));
  }
  const auto best = integrate(f, 0.0, 1.0, cfg, OnBudgetExhausted::return_best);
  CHECK_FALSE(best.converged);
  CHECK(best.subdivisions == 3);
}

TEST_CASE("integrate: argument validation", "[quadrature]") {
  const auto one = [](double) { return 1.0; };
  CHECK_THROWS_MATCHES(integrate(one, 1.0, 1.0, QuadConfig{}), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) { return e.kind() == ErrorKind::domain_error; }));
  QuadConfig bad;
  bad.abs_tol = 0.0;
  CHECK_THROWS_AS(integrate(one, 0.0, 1.0, bad), Error);
  CHECK_THROWS_AS(integrate(one, 0.0, 1.0, QuadConfig{}.with_breakpoints({1.5})), Error);
  CHECK_THROWS_AS(integrate(one, 0.0, 1.0, QuadConfig{}.with_breakpoints({0.6, 0.4})), Error);
  try {
    (void)integrate_endpoint_singular(one, 0.0, 1.0, 0.0, SingularEnd::lower, QuadConfig{});
    FAIL("expected InvalidAlpha");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_alpha);
  }
}

TEST_CASE("interior_points filters, sorts and deduplicates", "[quadrature]") {
  const auto p = interior_points(0.0, 1.0, {0.7, 0.2, 1.0, 0.0, -3.0, 0.2, NAN, 0.7 + 1e-16});
  REQUIRE(p.size() == 2);
  CHECK(p[0] == 0.2);
  CHECK(p[1] == 0.7);
}

TEST_CASE("integrate_endpoint_singular: kernel anchors", "[quadrature]") {
  const auto one = [](double) { return 1.0; };
  QuadConfig cfg = QuadConfig::tight();
  CHECK_THAT(integrate_endpoint_singular(one, 0.0, 1.0, 0.5, SingularEnd::lower, cfg).value, WithinAbs(2.0, 1e-13));
  for (double al : {0.05, 0.3, 0.5, 0.9, 1.0, 1.7, 3.0}) {
    for (auto end : {SingularEnd::lower, SingularEnd::upper}) {
      const double a = 0.4, x = 2.9;
      const double want = std::pow(x - a, al) / al;
      CHECK_THAT(integrate_endpoint_singular(one, a, x, al, end, cfg).value, WithinAbs(want, 1e-11 * want));
    }
  }
  for (auto end : {SingularEnd::lower, SingularEnd::upper}) {
    CHECK_THAT(integrate_endpoint_singular(one, -1.0, 2.5, 1.0, end, cfg).value, WithinAbs(3.5, 1e-14));
  }
}

TEST_CASE("integrate_endpoint_singular: breakpoints map through the substitution", "[quadrature]") {
  // int_0^1 |t - c| t^(-1/2) dt by pieces
  const auto f = [](double t) { return std::abs(t - 0.6); };
  const double c = 0.6;
  const double want = (2.0 * c * std::sqrt(c) - (2.0 / 3.0) * c * std::sqrt(c)) +
                      ((2.0 / 3.0) * (1.0 - c * std::sqrt(c)) - 2.0 * c * (1.0 - std::sqrt(c)));
  const auto r = integrate_endpoint_singular(f, 0.0, 1.0, 0.5, SingularEnd::lower,
                                             QuadConfig::tight().with_breakpoints({c}));
  CHECK_THAT(r.value, WithinAbs(want, 1e-13));
}

TEST_CASE("property: splitting at an interior point is additive", "[quadrature][property]") {
  Rng rng(derive_seed(11, 1));
  QuadConfig cfg = QuadConfig::tight();
  for (int i = 0; i < 200; ++i) {
    const double lo = rng.uniform(-3.0, 1.0);
    const double hi = lo + rng.uniform(0.1, 4.0);
    const double split = rng.uniform(lo, hi);
    const double k = rng.uniform(-2.0, 2.0);
    const auto f = [k](double t) { return std::exp(k * t) * std::cos(3.0 * t) + t * t; };
    const auto whole = integrate(f, lo, hi, cfg);
    const auto left = integrate(f, lo, split, cfg);
    const auto right = integrate(f, split, hi, cfg);
    const double budget = whole.err_estimate + left.err_estimate + right.err_estimate + 1e-14;
    CHECK(std::abs(whole.value - left.value - right.value) <= budget);
  }
}

TEST_CASE("property: alpha >= 1 singular path equals weighted plain quadrature", "[quadrature][property]") {
  Rng rng(derive_seed(11, 2));
  QuadConfig cfg = QuadConfig::tight();
  for (int i = 0; i < 100; ++i) {
    const double lo = rng.uniform(0.0, 2.0);
    const double hi = lo + rng.uniform(0.1, 3.0);
    const double al = rng.uniform(1.0, 5.0);
    const auto f = [](double t) { return std::log1p(t); };
    const double s1 = integrate_endpoint_singular(f, lo, hi, al, SingularEnd::lower, cfg).value;
    const double p1 = integrate([&](double t) { return f(t) * std::pow(t - lo, al - 1.0); }, lo, hi, cfg).value;
    const double s2 = integrate_endpoint_singular(f, lo, hi, al, SingularEnd::upper, cfg).value;
    const double p2 = integrate([&](double t) { return f(t) * std::pow(hi - t, al - 1.0); }, lo, hi, cfg).value;
    CHECK_THAT(s1, WithinAbs(p1, 1e-11 * (1.0 + std::abs(p1))));
    CHECK_THAT(s2, WithinAbs(p2, 1e-11 * (1.0 + std::abs(p2))));
  }
}

TEST_CASE("property: linearity in the integrand", "[quadrature][property]") {
  Rng rng(derive_seed(11, 3));
  QuadConfig cfg;
  for (int i = 0; i < 200; ++i) {
    const double c = rng.uniform(-1e6, 1e6);
    const double lo = rng.uniform(0.0, 1.0), hi = lo + rng.uniform(0.5, 3.0);
    const auto f = [](double t) { return std::sin(t) + std::sqrt(t); };
    const auto base = integrate(f, lo, hi, cfg);
    const auto scaled = integrate([&](double t) { return c * f(t); }, lo, hi, cfg);
    CHECK(std::abs(scaled.value - c * base.value) <= scaled.err_estimate + std::abs(c) * base.err_estimate + 1e-12);
  }
}
