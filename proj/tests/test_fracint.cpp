#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "fracineq/fracint.hpp"
#include "fracineq/funcspace.hpp"
#include "fracineq/random.hpp"

using namespace fracineq;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const QuadConfig kTight = QuadConfig::tight();

}  // namespace

TEST_CASE("rl_left: kernel anchors", "[fracint]") {
  const auto one = lookup("const-1");
  for (double al : {0.3, 0.5, 1.0, 2.2}) {
    for (double x : {0.5, 1.0, 3.0}) {
      CHECK_THAT(rl_left(one, 0.0, FracOrder(al), x, kTight).value,
                 WithinRel(std::pow(x, al) / fracineq::gamma(al + 1.0), 1e-12));
    }
  }
  const auto id = lookup("identity");
  CHECK_THAT(rl_left(id, 0.0, FracOrder(1.0), 2.0, kTight).value, WithinAbs(2.0, 1e-13));
  CHECK_THAT(rl_left(id, 0.0, FracOrder(0.5), 1.0, kTight).value, WithinAbs(0.7522527781, 1e-10));
  CHECK_THAT(rl_left(id, 0.0, FracOrder(0.5), 1.0, kTight).value, WithinRel(1.0 / fracineq::gamma(2.5), 1e-13));
}

TEST_CASE("rl_left/rl_right: frozen mpmath values", "[fracint]") {
  CHECK_THAT(rl_left(lookup("exp"), 0.5, FracOrder(0.3), 2.0, kTight).value,
             WithinRel(7.0779069123414623384, 1e-11));
  CHECK_THAT(rl_right(lookup("exp"), 3.0, FracOrder(0.7), 1.0, kTight).value,
             WithinRel(13.309081135399794636, 1e-11));
  CHECK_THAT(rl_left(lookup("sqrt"), 1.0, FracOrder(0.5), 4.0, kTight).value,
             WithinRel(3.3404768250131945186, 1e-11));
  CHECK_THAT(rl_left(lookup("log"), 1.0, FracOrder(2.5), 2.0, kTight).value,
             WithinRel(0.071695860903384039428, 1e-11));
}

TEST_CASE("rl_right: kernel anchors and mirror", "[fracint]") {
  const auto one = lookup("const-1");
  for (double al : {0.3, 0.5, 1.0, 2.2}) {
    CHECK_THAT(rl_right(one, 3.0, FracOrder(al), 1.0, kTight).value,
               WithinRel(std::pow(2.0, al) / fracineq::gamma(al + 1.0), 1e-12));
  }
  CHECK_THAT(rl_right(one, 3.0, FracOrder(1.0), 0.0, kTight).value, WithinAbs(3.0, 1e-13));

  // J_{1-}^a t at 0 equals J_{0+}^a (1 - t) at 1 = 1/G(a+1) - 1/G(a+2).
  for (double al : {0.5, 0.8, 1.5}) {
    const double right = rl_right(lookup("identity"), 1.0, FracOrder(al), 0.0, kTight).value;
    const double mirrored = rl_left([](double t) { return 1.0 - t; }, 0.0, FracOrder(al), 1.0, kTight).value;
    const double closed = 1.0 / fracineq::gamma(al + 1.0) - 1.0 / fracineq::gamma(al + 2.0);
    CHECK_THAT(right, WithinAbs(mirrored, 1e-12));
    CHECK_THAT(right, WithinAbs(closed, 1e-12));
  }
}

TEST_CASE("rl: domain and order errors", "[fracint]") {
  const auto one = lookup("const-1");
  auto kind_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::parse_error;
  };
  CHECK(kind_of([&] { (void)rl_left(one, 2.0, FracOrder(0.5), 2.0); }) == ErrorKind::domain_error);
  CHECK(kind_of([&] { (void)rl_left(one, 2.0, FracOrder(0.5), 1.0); }) == ErrorKind::domain_error);
  CHECK(kind_of([&] { (void)rl_right(one, 1.0, FracOrder(0.5), 1.0); }) == ErrorKind::domain_error);
  CHECK(kind_of([&] { (void)FracOrder(0.0); }) == ErrorKind::invalid_alpha);
  CHECK(kind_of([&] { (void)FracOrder(-1.0); }) == ErrorKind::invalid_alpha);
  CHECK(kind_of([&] { (void)rl_log_pair(one, Interval(1.0, 2.0), FracOrder(1.0), 2.5); }) == ErrorKind::domain_error);
}

TEST_CASE("rl_order_zero is the identity", "[fracint]") {
  CHECK(rl_order_zero(lookup("square"), 3.0) == 9.0);
  CHECK(rl_order_zero(lookup("const-5"), 1.0) == 5.0);
  CHECK_THAT(rl_order_zero(lookup("log"), std::numbers::e), WithinAbs(1.0, 1e-15));
}

TEST_CASE("rl_log_pair: constants", "[fracint]") {
  const Interval iv(0.5, 3.0);
  for (double al : {0.4, 1.0, 2.5}) {
    for (double x : {0.5, 1.1, 3.0}) {
      const auto p = rl_log_pair(lookup("const-5"), iv, FracOrder(al), x, kTight);
      const double l1 = std::log(x / 0.5), l2 = std::log(3.0 / x);
      CHECK_THAT(p.lower_member, WithinAbs(5.0 * std::pow(l1, al) / fracineq::gamma(al + 1.0), 1e-12));
      CHECK_THAT(p.upper_member, WithinAbs(5.0 * std::pow(l2, al) / fracineq::gamma(al + 1.0), 1e-12));
    }
  }
}

TEST_CASE("rl_log_pair: logarithm at x = b", "[fracint]") {
  const double a = 0.7, b = 4.0, L = std::log(b / a);
  for (double al : {0.3, 1.0, 2.0}) {
    const auto p = rl_log_pair(lookup("log"), Interval(a, b), FracOrder(al), b, kTight);
    const double want = std::log(a) * std::pow(L, al) / fracineq::gamma(al + 1.0) +
                        al * std::pow(L, al + 1.0) / ((al + 1.0) * fracineq::gamma(al + 1.0));
    CHECK_THAT(p.lower_member, WithinAbs(want, 1e-12));
    CHECK(p.upper_member == 0.0);
  }
}

TEST_CASE("rl_log_pair: alpha = 1 is the integral of f(u)/u", "[fracint]") {
  const Interval iv(0.5, 3.5);
  const double x = 1.7;
  for (const auto& f : registry()) {
    const auto p = rl_log_pair(f, iv, FracOrder(1.0), x, kTight);
    const auto g = [&](double u) { return f(u) / u; };
    const double lo = integrate(g, 0.5, x, kTight.with_breakpoints(f.kinks_in(0.5, x))).value;
    const double hi = integrate(g, x, 3.5, kTight.with_breakpoints(f.kinks_in(x, 3.5))).value;
    CHECK_THAT(p.lower_member, WithinAbs(lo, 1e-11));
    CHECK_THAT(p.upper_member, WithinAbs(hi, 1e-11));
  }
}

TEST_CASE("property: alpha = 1 reduction over the registry", "[fracint][property]") {
  Rng rng(derive_seed(5, 1));
  for (const auto& f : registry()) {
    for (int i = 0; i < 10; ++i) {
      const double a = rng.uniform(0.2, 2.0);
      const double x = std::min(a + rng.uniform(0.1, 2.0), 3.9);
      const double j = rl_left(f, a, FracOrder(1.0), x, kTight).value;
      const double c = integrate(f.value, a, x, kTight.with_breakpoints(f.kinks_in(a, x))).value;
      CHECK_THAT(j, WithinAbs(c, 1e-9));
    }
  }
}

TEST_CASE("property: semigroup spot check", "[fracint][property]") {
  const auto id = lookup("identity");
  for (auto [al, be] : {std::pair{0.5, 0.5}, std::pair{1.0, 0.5}}) {
    for (double x : {0.5, 1.0}) {
      const auto inner = [&](double t) { return t > 0.0 ? rl_left(id, 0.0, FracOrder(be), t, kTight).value : 0.0; };
      const double nested = rl_left(inner, 0.0, FracOrder(al), x).value;
      const double direct = rl_left(id, 0.0, FracOrder(al + be), x, kTight).value;
      CHECK_THAT(nested, WithinAbs(direct, 1e-6));
      CHECK_THAT(direct, WithinRel(std::pow(x, al + be + 1.0) / fracineq::gamma(al + be + 2.0), 1e-12));
    }
  }
}

TEST_CASE("property: linearity", "[fracint][property]") {
  Rng rng(derive_seed(5, 2));
  const auto f = lookup("sqrt"), g = lookup("exp");
  for (int i = 0; i < 50; ++i) {
    const double c1 = rng.uniform(-5.0, 5.0), c2 = rng.uniform(-5.0, 5.0);
    const double a = rng.uniform(0.1, 1.0), x = a + rng.uniform(0.2, 2.0);
    const FracOrder al(rng.uniform(0.1, 3.0));
    const auto h = linear_combination(c1, f, c2, g);
    const double lhs = rl_left(h, a, al, x, kTight).value;
    const double rhs = c1 * rl_left(f, a, al, x, kTight).value + c2 * rl_left(g, a, al, x, kTight).value;
    CHECK_THAT(lhs, WithinAbs(rhs, 1e-10 * (1.0 + std::abs(rhs))));
  }
}

TEST_CASE("property: kinks become breakpoints", "[fracint][property]") {
  // paper-piecewise has a kink at 1; the left integral across it stays accurate.
  const auto f = lookup("paper-piecewise");
  for (double al : {0.3, 0.7, 1.0, 2.0}) {
    const auto r = rl_left(f, 0.5, FracOrder(al), 3.0, kTight);
    const auto pieces = [&] {
      const auto w = [&](double t) { return std::pow(3.0 - t, al - 1.0); };
      const double p1 = integrate([&](double t) { return w(t); }, 0.5, 1.0, kTight).value;
      const double p2 = integrate_endpoint_singular([](double t) { return (t - 2.0) * (t - 2.0); }, 1.0, 3.0, al,
                                                    SingularEnd::upper, kTight)
                            .value;
      return (p1 + p2) / fracineq::gamma(al);
    }();
    CHECK(r.converged);
    CHECK_THAT(r.value, WithinAbs(pieces, 1e-11));
  }
}
