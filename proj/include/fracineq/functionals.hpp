#pragma once

/**
 * The functional I_f(x, lambda, alpha, a, b), evaluated from its definition
 * (fractional integrals of f o exp) and from the derivative representation
 *
 *   I_f = a L1^(a+1) int_0^1 (t^a - l) (x/a)^t f'(x^t a^(1-t)) dt
 *       - b L2^(a+1) int_0^1 (t^a - l) (x/b)^t f'(x^t b^(1-t)) dt,
 *
 * L1 = ln(x/a), L2 = ln(b/x); plus the substituted form at (x^m, a^m, b^m).
 */

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "fracineq/error.hpp"
#include "fracineq/fracint.hpp"
#include "fracineq/function_handle.hpp"
#include "fracineq/quadrature.hpp"
#include "fracineq/special.hpp"
#include "fracineq/types.hpp"

namespace fracineq {

/// (a, b, x, alpha, lambda, q, s, m).
struct Params {
  Interval iv{1.0, 2.0};
  double x = 1.0;
  double lambda = 0.0;
  double alpha = 1.0;
  double q = 1.0;
  ClassParams cls;

  double a() const noexcept { return iv.a(); }
  double b() const noexcept { return iv.b(); }

  void validate() const {
    if (!std::isfinite(x) || x < iv.a() || x > iv.b()) {
      fail(ErrorKind::domain_error, "x must satisfy a <= x <= b");
    }
    if (!(lambda >= 0.0 && lambda <= 1.0)) fail(ErrorKind::domain_error, "lambda must lie in [0, 1]");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) fail(ErrorKind::invalid_alpha, "alpha must be > 0");
    if (!(q >= 1.0) || !std::isfinite(q)) fail(ErrorKind::domain_error, "q must be >= 1");
    cls.validate();
  }
};

/// L^alpha with 0^alpha = 0.
inline double pow0(double L, double alpha) { return L > 0.0 ? std::pow(L, alpha) : 0.0; }

inline void require_domain(const FunctionHandle& f, const Interval& iv) {
  if (!f.domain.contains(iv)) {
    fail(ErrorKind::domain_error, "[" + std::to_string(iv.a()) + ", " + std::to_string(iv.b()) +
                                      "] lies outside the domain of '" + f.name + "'");
  }
}

namespace detail {

/// I_f at explicit (x, a, b) from the definition.
inline double i_f_definition(const FunctionHandle& f, const Interval& iv, double x, double lambda,
                             double alpha, const QuadConfig& cfg, QuadStats* stats) {
  require_domain(f, iv);
  const double L1 = std::log(x / iv.a());
  const double L2 = std::log(iv.b() / x);
  const double p1 = pow0(L1, alpha);
  const double p2 = pow0(L2, alpha);
  const auto pair = rl_log_pair(f, iv, FracOrder(alpha), x, cfg, stats);
  return (1.0 - lambda) * (p1 + p2) * f(x) + lambda * (f(iv.a()) * p1 + f(iv.b()) * p2) -
         gamma(alpha + 1.0) * pair.sum();
}

/// int_0^1 (t^alpha - lambda) e^(c t) f'(base e^(c t)) dt, with base e^(c t)
/// clamped to [lo, hi].
inline double kernel_integral(const FunctionHandle& f, double base, double c, double lo, double hi,
                              double alpha, double lambda, const std::vector<double>& bps,
                              const QuadConfig& cfg, QuadStats* stats) {
  auto g = [&](double t) {
    const double e = std::exp(c * t);
    const double u = std::clamp(base * e, lo, hi);
    return (std::pow(t, alpha) - lambda) * e * f.deriv(u);
  };
  auto r = integrate(g, 0.0, 1.0, detail::merge_breakpoints(cfg, 0.0, 1.0, bps));
  record(stats, r);
  return r.value;
}

/// Breakpoints in t: the sign change of t^alpha - lambda and the kinks of f
/// mapped through u = base e^(c t).
inline std::vector<double> lemma_breakpoints(const FunctionHandle& f, double base, double c,
                                             double lo, double hi, double alpha, double lambda) {
  std::vector<double> bps;
  if (lambda > 0.0 && lambda < 1.0) bps.push_back(std::pow(lambda, 1.0 / alpha));
  for (double k : f.kinks_in(lo, hi)) bps.push_back(std::log(k / base) / c);
  return bps;
}

}  // namespace detail

/// I_f(x, lambda, alpha, a, b) from its definition.
inline double i_f_direct(const FunctionHandle& f, const Params& p, const QuadConfig& cfg = {},
                         QuadStats* stats = nullptr) {
  p.validate();
  return detail::i_f_definition(f, p.iv, p.x, p.lambda, p.alpha, cfg, stats);
}

/// I_f from the derivative representation. At x = a or x = b the vanishing
/// member is dropped.
inline double i_f_lemma(const FunctionHandle& f, const Params& p, const QuadConfig& cfg = {},
                        QuadStats* stats = nullptr) {
  p.validate();
  require_domain(f, p.iv);
  if (!f.has_derivative()) fail(ErrorKind::missing_derivative, "'" + f.name + "' has no derivative");
  const double a = p.a(), b = p.b(), x = p.x;
  const double L1 = std::log(x / a);
  const double L2 = std::log(b / x);
  double value = 0.0;
  if (L1 > 0.0) {
    auto bps = detail::lemma_breakpoints(f, a, L1, a, x, p.alpha, p.lambda);
    value += a * std::pow(L1, p.alpha + 1.0) *
             detail::kernel_integral(f, a, L1, a, x, p.alpha, p.lambda, bps, cfg, stats);
  }
  if (L2 > 0.0) {
    auto bps = detail::lemma_breakpoints(f, b, -L2, x, b, p.alpha, p.lambda);
    value -= b * std::pow(L2, p.alpha + 1.0) *
             detail::kernel_integral(f, b, -L2, x, b, p.alpha, p.lambda, bps, cfg, stats);
  }
  return value;
}

/// I_f(x^m, lambda, alpha, a^m, b^m) from the definition.
inline double i_f_m_direct(const FunctionHandle& f, const Params& p, const QuadConfig& cfg = {},
                           QuadStats* stats = nullptr) {
  p.validate();
  const double m = p.cls.m;
  if (m == 1.0) return detail::i_f_definition(f, p.iv, p.x, p.lambda, p.alpha, cfg, stats);
  const Interval ivm(std::pow(p.a(), m), std::pow(p.b(), m));
  const double xm = std::clamp(std::pow(p.x, m), ivm.a(), ivm.b());
  return detail::i_f_definition(f, ivm, xm, p.lambda, p.alpha, cfg, stats);
}

enum class LemmaSign { plus, minus };

inline std::string_view to_string(LemmaSign s) { return s == LemmaSign::plus ? "plus" : "minus"; }

/// m^(a+1) a^m L1^(a+1) int (t^a - l)(x/a)^(mt) f'(x^(mt) a^(m(1-t))) dt
///   +- m^(a+1) b^m L2^(a+1) int (t^a - l)(x/b)^(mt) f'(x^(mt) b^(m(1-t))) dt,
/// with the sign of the second member chosen by the caller.
inline double i_f_m_lemma(const FunctionHandle& f, const Params& p, LemmaSign sign,
                          const QuadConfig& cfg = {}, QuadStats* stats = nullptr) {
  p.validate();
  if (!f.has_derivative()) fail(ErrorKind::missing_derivative, "'" + f.name + "' has no derivative");
  const double m = p.cls.m;
  const double am = std::pow(p.a(), m), bm = std::pow(p.b(), m), xm = std::pow(p.x, m);
  require_domain(f, Interval(am, bm));
  const double L1 = std::log(p.x / p.a());
  const double L2 = std::log(p.b() / p.x);
  const double mpow = std::pow(m, p.alpha + 1.0);
  double value = 0.0;
  if (L1 > 0.0) {
    const double c = m * L1;
    auto bps = detail::lemma_breakpoints(f, am, c, am, xm, p.alpha, p.lambda);
    value += mpow * am * std::pow(L1, p.alpha + 1.0) *
             detail::kernel_integral(f, am, c, am, xm, p.alpha, p.lambda, bps, cfg, stats);
  }
  if (L2 > 0.0) {
    const double c = -m * L2;
    auto bps = detail::lemma_breakpoints(f, bm, c, xm, bm, p.alpha, p.lambda);
    const double second = mpow * bm * std::pow(L2, p.alpha + 1.0) *
                          detail::kernel_integral(f, bm, c, xm, bm, p.alpha, p.lambda, bps, cfg, stats);
    value += sign == LemmaSign::plus ? second : -second;
  }
  return value;
}

/// Picks the sign under which i_f_m_lemma at m = 1 reproduces i_f_lemma.
/// Returns the deviation of the chosen sign through `deviation` if given.
inline LemmaSign resolve_lemma_sign(const FunctionHandle& f, Params p, const QuadConfig& cfg = {},
                                    double* deviation = nullptr) {
  p.cls.m = 1.0;
  const double ref = i_f_lemma(f, p, cfg);
  const double dp = std::abs(i_f_m_lemma(f, p, LemmaSign::plus, cfg) - ref);
  const double dm = std::abs(i_f_m_lemma(f, p, LemmaSign::minus, cfg) - ref);
  const LemmaSign s = dm <= dp ? LemmaSign::minus : LemmaSign::plus;
  if (deviation) *deviation = std::min(dp, dm);
  return s;
}

// ---------------------------------------------------------------------------
// Named left sides

enum class NamedForm { simpson, midpoint, trapezoid, ostrowski, hermite_hadamard };

inline std::string_view to_string(NamedForm k) {
  switch (k) {
    case NamedForm::simpson: return "simpson";
    case NamedForm::midpoint: return "midpoint";
    case NamedForm::trapezoid: return "trapezoid";
    case NamedForm::ostrowski: return "ostrowski";
    case NamedForm::hermite_hadamard: return "hermite-hadamard";
  }
  return "?";
}

inline NamedForm parse_named_form(std::string_view s) {
  if (s == "simpson") return NamedForm::simpson;
  if (s == "midpoint") return NamedForm::midpoint;
  if (s == "trapezoid") return NamedForm::trapezoid;
  if (s == "ostrowski") return NamedForm::ostrowski;
  if (s == "hermite-hadamard") return NamedForm::hermite_hadamard;
  fail(ErrorKind::invalid_config, "unknown named form '" + std::string(s) + "'");
}

/// The lambda a named form forces; ostrowski forces 0 with x free.
inline double forced_lambda(NamedForm k) {
  switch (k) {
    case NamedForm::simpson: return 1.0 / 3.0;
    case NamedForm::trapezoid: return 1.0;
    default: return 0.0;
  }
}

inline bool forces_geometric_mid(NamedForm k) {
  return k == NamedForm::simpson || k == NamedForm::midpoint || k == NamedForm::trapezoid;
}

inline bool near(double u, double v, double rel = 1e-12) {
  return std::abs(u - v) <= rel * std::max(1.0, std::max(std::abs(u), std::abs(v)));
}

inline void require_named_params(NamedForm k, const Params& p) {
  if (k == NamedForm::hermite_hadamard) return;
  if (!near(p.lambda, forced_lambda(k))) {
    fail(ErrorKind::kind_parameter_mismatch, std::string(to_string(k)) + " requires lambda = " +
                                                 std::to_string(forced_lambda(k)));
  }
  if (forces_geometric_mid(k) && !near(p.x, p.iv.geometric_mid())) {
    fail(ErrorKind::kind_parameter_mismatch, std::string(to_string(k)) + " requires x = sqrt(ab)");
  }
}

/// Gamma(alpha+1) / (2 ln^alpha(b/a)) times the two full-interval
/// log-composed integrals: the middle term of the Hermite-Hadamard chain.
inline double hh_middle(const FunctionHandle& f, const Interval& iv, double alpha,
                        const QuadConfig& cfg = {}, QuadStats* stats = nullptr) {
  const FracOrder order(alpha);
  const double left = rl_log_pair(f, iv, order, iv.b(), cfg, stats).lower_member;
  const double right = rl_log_pair(f, iv, order, iv.a(), cfg, stats).upper_member;
  return gamma(alpha + 1.0) / (2.0 * std::pow(iv.log_width(), alpha)) * (left + right);
}

/// Normalized |I_f| of a named form: 2^(alpha-1) ln^-alpha(b/a) |I_f| for
/// simpson/midpoint/trapezoid, |I_f| for ostrowski. For hermite-hadamard the
/// chain's middle term is returned.
inline double named_lhs(NamedForm k, const FunctionHandle& f, const Params& p, const QuadConfig& cfg = {},
                        QuadStats* stats = nullptr) {
  p.validate();
  require_named_params(k, p);
  if (k == NamedForm::hermite_hadamard) {
    require_domain(f, p.iv);
    return hh_middle(f, p.iv, p.alpha, cfg, stats);
  }
  const double v = std::abs(i_f_direct(f, p, cfg, stats));
  if (k == NamedForm::ostrowski) return v;
  return std::pow(2.0, p.alpha - 1.0) * std::pow(p.iv.log_width(), -p.alpha) * v;
}

/// Same for the substituted functional I_f(x^m, ..., a^m, b^m):
/// 2^(alpha-1) (m ln(b/a))^-alpha |I| and m^-alpha |I| for ostrowski.
inline double named_lhs_m(NamedForm k, const FunctionHandle& f, const Params& p, const QuadConfig& cfg = {},
                          QuadStats* stats = nullptr) {
  p.validate();
  require_named_params(k, p);
  if (k == NamedForm::hermite_hadamard) {
    fail(ErrorKind::kind_parameter_mismatch, "hermite-hadamard has no m-form");
  }
  const double m = p.cls.m;
  const double v = std::abs(i_f_m_direct(f, p, cfg, stats));
  if (k == NamedForm::ostrowski) return v / std::pow(m, p.alpha);
  return std::pow(2.0, p.alpha - 1.0) * std::pow(m * p.iv.log_width(), -p.alpha) * v;
}

/// The displayed middle expressions of the named forms, assembled from
/// function values and the fractional pair rather than from I_f:
///   simpson:   (1/6)[f(a) + 4 f(g) + f(b)] - c J
///   midpoint:  f(g) - c J
///   trapezoid: (f(a) + f(b))/2 - c J
/// with g = sqrt(ab), c = 2^(alpha-1) Gamma(alpha+1) / ln^alpha(b/a), J the
/// pair at g; ostrowski: [L1^alpha + L2^alpha] f(x) - Gamma(alpha+1) J(x).
inline double named_lhs_display(NamedForm k, const FunctionHandle& f, const Params& p,
                                const QuadConfig& cfg = {}) {
  p.validate();
  require_named_params(k, p);
  require_domain(f, p.iv);
  const double a = p.a(), b = p.b(), al = p.alpha;
  if (k == NamedForm::hermite_hadamard) return hh_middle(f, p.iv, al, cfg);
  if (k == NamedForm::ostrowski) {
    const double j = rl_log_pair(f, p.iv, FracOrder(al), p.x, cfg).sum();
    return std::abs((pow0(std::log(p.x / a), al) + pow0(std::log(b / p.x), al)) * f(p.x) -
                    gamma(al + 1.0) * j);
  }
  const double g = p.iv.geometric_mid();
  const double j = rl_log_pair(f, p.iv, FracOrder(al), g, cfg).sum();
  const double c = std::pow(2.0, al - 1.0) * gamma(al + 1.0) / std::pow(p.iv.log_width(), al);
  double head = 0.0;
  switch (k) {
    case NamedForm::simpson: head = (f(a) + 4.0 * f(g) + f(b)) / 6.0; break;
    case NamedForm::midpoint: head = f(g); break;
    default: head = 0.5 * (f(a) + f(b)); break;
  }
  return std::abs(head - c * j);
}

/// I_f at alpha = 1 written classically:
/// ln(b/a)(1 - lambda) f(x) + lambda[f(a) ln(x/a) + f(b) ln(b/x)] - int_a^b f(u)/u du.
inline double i_f_alpha1_classical(const FunctionHandle& f, const Params& p, const QuadConfig& cfg = {}) {
  p.validate();
  require_domain(f, p.iv);
  const double a = p.a(), b = p.b(), x = p.x;
  auto r = integrate([&](double u) { return f(u) / u; }, a, b,
                     detail::merge_breakpoints(cfg, a, b, f.kinks));
  return p.iv.log_width() * (1.0 - p.lambda) * f(x) +
         p.lambda * (f(a) * std::log(x / a) + f(b) * std::log(b / x)) - r.value;
}

}  // namespace fracineq
