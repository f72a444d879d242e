#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "fracineq/funcspace.hpp"
#include "fracineq/functionals.hpp"

using namespace fracineq;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const QuadConfig kTight = QuadConfig::tight();

Params make(double a, double b, double x, double alpha, double lambda, double m = 1.0) {
  Params p;
  p.iv = Interval(a, b);
  p.x = x;
  p.alpha = alpha;
  p.lambda = lambda;
  p.cls.m = m;
  return p;
}

}  // namespace

TEST_CASE("i_f_direct: frozen mpmath values", "[functionals]") {
  CHECK_THAT(i_f_direct(lookup("log-squared"), make(0.5, 3.0, 1.1, 0.7, 1.0 / 3.0), kTight),
             WithinAbs(-0.17363544608562047268, 1e-11));
  CHECK_THAT(i_f_direct(lookup("exp"), make(0.5, 2.0, 1.3, 2.0, 0.5), kTight),
             WithinAbs(0.14893569713634063467, 1e-11));
  CHECK_THAT(i_f_direct(lookup("sqrt"), make(0.3, 5.0, 0.3, 1.5, 1.0), kTight),
             WithinAbs(5.6865605990036170356, 1e-10));
}

TEST_CASE("i_f_direct: constants vanish", "[functionals]") {
  for (const char* name : {"const-1", "const-5"}) {
    for (double al : {0.3, 1.0, 2.5}) {
      for (double la : {0.0, 0.4, 1.0}) {
        for (double x : {0.5, 1.2, 3.0}) {
          CHECK_THAT(i_f_direct(lookup(name), make(0.5, 3.0, x, al, la), kTight), WithinAbs(0.0, 1e-12));
        }
      }
    }
  }
}

TEST_CASE("i_f_direct: logarithm at lambda = 1", "[functionals]") {
  const double a = 0.4, b = 6.0;
  for (double al : {0.5, 1.0, 2.0}) {
    const auto mid = make(a, b, std::sqrt(a * b), al, 1.0);
    CHECK_THAT(i_f_direct(lookup("log"), mid, kTight), WithinAbs(0.0, 1e-12));
    for (double x : {0.4, 0.9, 2.2, 6.0}) {
      const double l1 = std::log(x / a), l2 = std::log(b / x);
      const double want = al / (al + 1.0) * (std::pow(l2, al + 1.0) - std::pow(l1, al + 1.0));
      CHECK_THAT(i_f_direct(lookup("log"), make(a, b, x, al, 1.0), kTight), WithinAbs(want, 1e-12));
    }
  }
}

TEST_CASE("i_f_lemma: constants and endpoint cases", "[functionals]") {
  CHECK(i_f_lemma(lookup("const-5"), make(0.5, 3.0, 1.0, 0.7, 0.2), kTight) == 0.0);
  // x = a drops the first member
  for (const char* name : {"log", "exp", "log-squared"}) {
    const auto pa = make(0.5, 3.0, 0.5, 1.0, 0.0);
    CHECK_THAT(i_f_lemma(lookup(name), pa, kTight), WithinAbs(i_f_direct(lookup(name), pa, kTight), 1e-10));
    const auto pb = make(0.5, 3.0, 3.0, 1.3, 0.6);
    CHECK_THAT(i_f_lemma(lookup(name), pb, kTight), WithinAbs(i_f_direct(lookup(name), pb, kTight), 1e-10));
  }
}

TEST_CASE("property: dual evaluation over registry and grid", "[functionals][property]") {
  Rng rng(derive_seed(21, 1));
  const double a = 0.5, b = 3.0;
  const double xr = std::exp(rng.uniform(std::log(a), std::log(b)));
  for (const auto& f : registry()) {
    for (double al : {0.5, 1.0, 2.0}) {
      for (double la : {0.0, 1.0 / 3.0, 0.5, 1.0}) {
        for (double x : {a, std::sqrt(a * b), b, xr}) {
          const auto p = make(a, b, x, al, la);
          const double d = i_f_direct(f, p, kTight);
          INFO(f.name << " alpha=" << al << " lambda=" << la << " x=" << x);
          CHECK_THAT(i_f_lemma(f, p, kTight), WithinAbs(d, 1e-7 * (1.0 + std::abs(d))));
        }
      }
    }
  }
}

TEST_CASE("property: dual evaluation on random generators", "[functionals][property]") {
  Rng rng(derive_seed(21, 2));
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const double a = rng.uniform(0.2, 3.0), b = a * rng.uniform(1.2, 10.0);
    const Interval iv(a, b);
    const auto f = seed % 2 ? make_deriv_quasi(seed, iv) : make_ga_convex(seed, iv);
    const auto p = make(a, b, std::exp(rng.uniform(std::log(a), std::log(b))), rng.uniform(0.2, 4.0), rng.u01(),
                        rng.uniform(0.1, 1.0));
    const double d = i_f_direct(f, p, kTight);
    CHECK_THAT(i_f_lemma(f, p, kTight), WithinAbs(d, 1e-7 * (1.0 + std::abs(d))));
    const double dm = i_f_m_direct(f, p, kTight);
    CHECK_THAT(i_f_m_lemma(f, p, LemmaSign::minus, kTight), WithinAbs(dm, 1e-7 * (1.0 + std::abs(dm))));
  }
}

TEST_CASE("m-form: reductions and cancellations", "[functionals]") {
  const auto f = lookup("log-squared");
  const auto p = make(0.5, 3.0, 1.4, 0.8, 0.3);
  CHECK(i_f_m_direct(f, p, kTight) == i_f_direct(f, p, kTight));
  CHECK_THAT(i_f_m_lemma(f, p, LemmaSign::minus, kTight), WithinAbs(i_f_lemma(f, p, kTight), 1e-9));
  for (double m : {0.2, 0.5, 0.9}) {
    auto pc = p;
    pc.cls.m = m;
    CHECK_THAT(i_f_m_direct(lookup("const-5"), pc, kTight), WithinAbs(0.0, 1e-12));
    CHECK(i_f_m_lemma(lookup("const-5"), pc, LemmaSign::plus, kTight) == 0.0);
    CHECK(i_f_m_lemma(lookup("const-5"), pc, LemmaSign::minus, kTight) == 0.0);
  }
  const auto mid = make(0.5, 3.0, std::sqrt(1.5), 1.5, 1.0, 0.5);
  CHECK_THAT(i_f_m_direct(lookup("log"), mid, kTight), WithinAbs(0.0, 1e-12));
}

TEST_CASE("lemma sign: the m = 1 reduction selects minus", "[functionals]") {
  double dev = 1.0;
  const auto s = resolve_lemma_sign(lookup("log-squared"), make(0.5, 3.0, 0.9, 0.7, 1.0 / 3.0), kTight, &dev);
  CHECK(s == LemmaSign::minus);
  CHECK(dev < 1e-10);
  // with plus the reduction fails visibly
  const auto p = make(0.5, 3.0, 0.9, 0.7, 1.0 / 3.0);
  CHECK(std::abs(i_f_m_lemma(lookup("log-squared"), p, LemmaSign::plus, kTight) - i_f_lemma(lookup("log-squared"), p, kTight)) > 1e-3);
}

TEST_CASE("property: I_f is linear in f", "[functionals][property]") {
  Rng rng(derive_seed(21, 3));
  for (int i = 0; i < 30; ++i) {
    const double c = rng.uniform(-20.0, 20.0);
    const auto p = make(0.5, 3.0, std::exp(rng.uniform(std::log(0.5), std::log(3.0))), rng.uniform(0.2, 3.0), rng.u01());
    const auto f = lookup("exp");
    const double base = i_f_direct(f, p, kTight);
    CHECK_THAT(i_f_direct(scaled(f, c), p, kTight), WithinAbs(c * base, 1e-10 * (1.0 + std::abs(c * base))));
  }
}

TEST_CASE("named forms", "[functionals]") {
  const Interval iv(1.0, std::numbers::e);
  const double g = iv.geometric_mid();
  Params tr = make(1.0, std::numbers::e, g, 1.3, 1.0);
  CHECK_THAT(named_lhs(NamedForm::trapezoid, lookup("log"), tr, kTight), WithinAbs(0.0, 1e-12));
  Params mp = make(1.0, std::numbers::e, g, 0.6, 0.0);
  CHECK_THAT(named_lhs(NamedForm::midpoint, lookup("const-5"), mp, kTight), WithinAbs(0.0, 1e-12));

  Params sp = make(1.0, std::numbers::e, g, 1.0, 1.0 / 3.0);
  const auto ln2 = lookup("log-squared");
  CHECK_THAT(named_lhs(NamedForm::simpson, ln2, sp, kTight),
             WithinAbs(named_lhs_display(NamedForm::simpson, ln2, sp, kTight), 1e-9));
  // alpha = 1 on [1, e]: (1/6)(0 + 4/4 + 1) - int_0^1 v^2 dv = 1/3 - 1/3
  CHECK_THAT(named_lhs(NamedForm::simpson, ln2, sp, kTight), WithinAbs(0.0, 1e-12));

  Params os = make(0.5, 3.0, 0.8, 1.7, 0.0);
  CHECK_THAT(named_lhs(NamedForm::ostrowski, lookup("exp"), os, kTight),
             WithinAbs(std::abs(i_f_direct(lookup("exp"), os, kTight)), 0.0));
}

TEST_CASE("named forms: parameter mismatches", "[functionals]") {
  const auto f = lookup("exp");
  auto kind = [&](NamedForm k, const Params& p) {
    try {
      (void)named_lhs(k, f, p);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::parse_error;
  };
  CHECK(kind(NamedForm::simpson, make(1.0, 4.0, 2.0, 1.0, 0.0)) == ErrorKind::kind_parameter_mismatch);
  CHECK(kind(NamedForm::midpoint, make(1.0, 4.0, 2.5, 1.0, 0.0)) == ErrorKind::kind_parameter_mismatch);
  CHECK(kind(NamedForm::ostrowski, make(1.0, 4.0, 2.5, 1.0, 0.5)) == ErrorKind::kind_parameter_mismatch);
  CHECK(kind(NamedForm::trapezoid, make(1.0, 4.0, 2.0, 1.0, 1.0)) == ErrorKind::parse_error);
  for (auto k : {NamedForm::simpson, NamedForm::midpoint, NamedForm::trapezoid, NamedForm::ostrowski,
                 NamedForm::hermite_hadamard}) {
    CHECK(parse_named_form(to_string(k)) == k);
  }
}

TEST_CASE("hh_middle: equality cases", "[functionals]") {
  const Interval iv(0.5, 3.0);
  for (double al : {0.5, 1.0, 2.0, 3.0}) {
    CHECK_THAT(hh_middle(lookup("const-5"), iv, al, kTight), WithinAbs(5.0, 1e-12));
    CHECK_THAT(hh_middle(lookup("log"), iv, al, kTight), WithinAbs(std::log(iv.geometric_mid()), 1e-12));
  }
  const double mid = hh_middle(lookup("identity"), Interval(1.0, 4.0), 1.0, kTight);
  CHECK(mid >= 2.0);
  CHECK(mid <= 2.5);
  CHECK_THAT(mid, WithinAbs(3.0 / std::log(4.0), 1e-12));
}

TEST_CASE("alpha = 1 classical form", "[functionals]") {
  for (const auto& f : registry()) {
    const auto p = make(0.5, 3.5, 1.9, 1.0, 0.4);
    CHECK_THAT(i_f_alpha1_classical(f, p, kTight), WithinAbs(i_f_direct(f, p, kTight), 1e-10));
  }
}

TEST_CASE("functionals: errors", "[functionals]") {
  auto kind = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::parse_error;
  };
  const auto f = lookup("exp");
  CHECK(kind([&] { (void)i_f_direct(f, make(1.0, 2.0, 2.5, 1.0, 0.0)); }) == ErrorKind::domain_error);
  CHECK(kind([&] { (void)i_f_direct(f, make(1.0, 2.0, 1.5, 1.0, 1.5)); }) == ErrorKind::domain_error);
  CHECK(kind([&] { (void)i_f_direct(f, make(1.0, 2.0, 1.5, -1.0, 0.0)); }) == ErrorKind::invalid_alpha);
  CHECK(kind([&] { (void)i_f_lemma(abs_derivative_pow(f, 2.0), make(1.0, 2.0, 1.5, 1.0, 0.0)); }) ==
        ErrorKind::missing_derivative);
  CHECK(kind([&] { (void)i_f_direct(lookup("paper-piecewise"), make(1.0, 5.0, 1.5, 1.0, 0.0)); }) ==
        ErrorKind::domain_error);
  Params bad = make(1.0, 2.0, 1.5, 1.0, 0.0);
  bad.q = 0.5;
  CHECK(kind([&] { (void)i_f_direct(f, bad); }) == ErrorKind::domain_error);
}
