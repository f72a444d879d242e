#pragma once

/**
 * Right-hand sides of the three derivative bounds on |I_f| and of their
 * corollaries, the auxiliary integrals A2..A5, B1, B2, C1..C4, and the
 * per-instance verifier.
 *
 * Each corollary bound exists in two forms: as printed, and obtained by
 * substituting the corollary's parameters into the parent theorem (then
 * applying the corollary's left-side normalization). The audit compares the
 * two and reports every disagreement.
 */

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fracineq/error.hpp"
#include "fracineq/funcspace.hpp"
#include "fracineq/function_handle.hpp"
#include "fracineq/functionals.hpp"
#include "fracineq/quadrature.hpp"
#include "fracineq/random.hpp"
#include "fracineq/special.hpp"
#include "fracineq/types.hpp"

namespace fracineq {

// ---------------------------------------------------------------------------
// Kinds

enum class Theorem { hh, ga_s, quasi, sm };
enum class Corollary {
  none,
  s1,
  s1_alpha1,
  q1,
  simpson,
  midpoint,
  trapezoid,
  ostrowski,
  left_link,
  right_link,
};

inline std::string_view to_string(Theorem t) {
  switch (t) {
    case Theorem::hh: return "hh";
    case Theorem::ga_s: return "ga-s";
    case Theorem::quasi: return "quasi";
    case Theorem::sm: return "sm";
  }
  return "?";
}

inline std::string_view to_string(Corollary c) {
  switch (c) {
    case Corollary::none: return "none";
    case Corollary::s1: return "s1";
    case Corollary::s1_alpha1: return "s1-alpha1";
    case Corollary::q1: return "q1";
    case Corollary::simpson: return "simpson";
    case Corollary::midpoint: return "midpoint";
    case Corollary::trapezoid: return "trapezoid";
    case Corollary::ostrowski: return "ostrowski";
    case Corollary::left_link: return "left-link";
    case Corollary::right_link: return "right-link";
  }
  return "?";
}

inline Theorem parse_theorem(std::string_view s) {
  if (s == "hh" || s == "hermite-hadamard") return Theorem::hh;
  if (s == "ga-s" || s == "GA-s") return Theorem::ga_s;
  if (s == "quasi" || s == "quasi-geometric") return Theorem::quasi;
  if (s == "sm" || s == "sm-ga" || s == "sm-GA") return Theorem::sm;
  fail(ErrorKind::invalid_config, "unknown theorem '" + std::string(s) + "' (expected hh, ga-s, quasi or sm)");
}

inline Corollary parse_corollary(std::string_view s) {
  static constexpr Corollary all[] = {Corollary::none,      Corollary::s1,        Corollary::s1_alpha1,
                                      Corollary::q1,        Corollary::simpson,   Corollary::midpoint,
                                      Corollary::trapezoid, Corollary::ostrowski, Corollary::left_link,
                                      Corollary::right_link};
  for (auto c : all) {
    if (to_string(c) == s) return c;
  }
  fail(ErrorKind::invalid_config, "unknown corollary '" + std::string(s) + "'");
}

inline const std::vector<Corollary>& corollaries_of(Theorem t) {
  static const std::vector<Corollary> hh = {Corollary::none, Corollary::left_link, Corollary::right_link};
  static const std::vector<Corollary> gas = {Corollary::none,     Corollary::s1,        Corollary::s1_alpha1,
                                             Corollary::q1,       Corollary::simpson,   Corollary::midpoint,
                                             Corollary::trapezoid, Corollary::ostrowski};
  static const std::vector<Corollary> rest = {Corollary::none,     Corollary::q1,        Corollary::simpson,
                                              Corollary::midpoint, Corollary::trapezoid, Corollary::ostrowski};
  switch (t) {
    case Theorem::hh: return hh;
    case Theorem::ga_s: return gas;
    default: return rest;
  }
}

struct BoundKind {
  Theorem theorem = Theorem::ga_s;
  Corollary corollary = Corollary::none;

  bool operator==(const BoundKind&) const = default;
  bool operator<(const BoundKind& o) const {
    return std::pair(theorem, corollary) < std::pair(o.theorem, o.corollary);
  }
};

inline std::string to_string(const BoundKind& k) {
  std::string s(to_string(k.theorem));
  if (k.corollary != Corollary::none) s += ":" + std::string(to_string(k.corollary));
  return s;
}

/// "ga-s", "ga-s:simpson", "hh:left-link", ...
inline BoundKind parse_bound_kind(std::string_view s) {
  BoundKind k;
  const auto colon = s.find(':');
  k.theorem = parse_theorem(s.substr(0, colon));
  if (colon != std::string_view::npos) k.corollary = parse_corollary(s.substr(colon + 1));
  const auto& allowed = corollaries_of(k.theorem);
  if (std::find(allowed.begin(), allowed.end(), k.corollary) == allowed.end()) {
    fail(ErrorKind::invalid_config, "corollary '" + std::string(to_string(k.corollary)) +
                                        "' does not belong to theorem '" +
                                        std::string(to_string(k.theorem)) + "'");
  }
  return k;
}

/// Class the hypothesis is stated in: of f for hh, of |f'|^q otherwise.
inline ConvexityClass hypothesis_class(Theorem t) {
  switch (t) {
    case Theorem::hh: return ConvexityClass::ga;
    case Theorem::ga_s: return ConvexityClass::ga_s;
    case Theorem::quasi: return ConvexityClass::quasi;
    case Theorem::sm: return ConvexityClass::sm_ga;
  }
  return ConvexityClass::ga;
}

inline bool is_named(Corollary c) {
  return c == Corollary::simpson || c == Corollary::midpoint || c == Corollary::trapezoid ||
         c == Corollary::ostrowski;
}

inline NamedForm named_form_of(Corollary c) {
  switch (c) {
    case Corollary::simpson: return NamedForm::simpson;
    case Corollary::midpoint: return NamedForm::midpoint;
    case Corollary::trapezoid: return NamedForm::trapezoid;
    case Corollary::ostrowski: return NamedForm::ostrowski;
    default: break;
  }
  fail(ErrorKind::invalid_config, "corollary has no named form");
}

/// Throws KindParameterMismatch when p contradicts the values the kind fixes.
inline void check_kind_params(const BoundKind& k, const Params& p) {
  auto mismatch = [&](const std::string& what) {
    fail(ErrorKind::kind_parameter_mismatch, to_string(k) + " requires " + what);
  };
  switch (k.corollary) {
    case Corollary::s1:
      if (p.cls.s != 1.0) mismatch("s = 1");
      break;
    case Corollary::s1_alpha1:
      if (p.cls.s != 1.0) mismatch("s = 1");
      if (p.alpha != 1.0) mismatch("alpha = 1");
      break;
    case Corollary::q1:
      if (p.q != 1.0) mismatch("q = 1");
      break;
    case Corollary::simpson:
    case Corollary::midpoint:
    case Corollary::trapezoid:
    case Corollary::ostrowski:
      require_named_params(named_form_of(k.corollary), p);
      break;
    default: break;
  }
}

/// Places x, lambda, s, alpha, q at the values the kind fixes.
inline Params apply_kind_params(const BoundKind& k, Params p) {
  switch (k.corollary) {
    case Corollary::s1_alpha1: p.alpha = 1.0; [[fallthrough]];
    case Corollary::s1: p.cls.s = 1.0; break;
    case Corollary::q1: p.q = 1.0; break;
    case Corollary::simpson:
    case Corollary::midpoint:
    case Corollary::trapezoid:
      p.x = p.iv.geometric_mid();
      p.lambda = forced_lambda(named_form_of(k.corollary));
      break;
    case Corollary::ostrowski: p.lambda = 0.0; break;
    default: break;
  }
  return p;
}

// ---------------------------------------------------------------------------
// Auxiliary integrals

namespace detail {

/// int_0^1 |t^alpha - lambda| e^(c t) w(t) dt.
template <class W>
double abs_kernel_integral(double alpha, double lambda, double c, W&& w, const QuadConfig& cfg,
                           QuadStats* stats) {
  std::vector<double> bps;
  if (lambda > 0.0 && lambda < 1.0) bps.push_back(std::pow(lambda, 1.0 / alpha));
  auto g = [&](double t) { return std::abs(std::pow(t, alpha) - lambda) * std::exp(c * t) * w(t); };
  auto r = integrate(g, 0.0, 1.0, merge_breakpoints(cfg, 0.0, 1.0, bps));
  record(stats, r);
  return r.value;
}

inline double log_ratio_a(const Params& p) { return std::log(p.x / p.a()); }   // ln(x/a) >= 0
inline double log_ratio_b(const Params& p) { return -std::log(p.b() / p.x); }  // ln(x/b) <= 0

}  // namespace detail

/// A2 = int |t^a - l| (x/a)^(qt) t^s, A3 with (1-t)^s, A4/A5 with base x/b.
inline double a_integral(int idx, const Params& p, const QuadConfig& cfg = {}, QuadStats* stats = nullptr) {
  if (idx < 2 || idx > 5) fail(ErrorKind::invalid_config, "A-integral index must be 2..5");
  const double c = p.q * (idx <= 3 ? detail::log_ratio_a(p) : detail::log_ratio_b(p));
  const double s = p.cls.s;
  if (idx % 2 == 0) {
    return detail::abs_kernel_integral(p.alpha, p.lambda, c, [s](double t) { return std::pow(t, s); }, cfg, stats);
  }
  return detail::abs_kernel_integral(p.alpha, p.lambda, c, [s](double t) { return std::pow(1.0 - t, s); }, cfg,
                                     stats);
}

/// B1 = int |t^a - l| (x/a)^(e t) dt, B2 with x/b; e is the exponent argument.
inline double b_integral_at(int idx, const Params& p, double e, const QuadConfig& cfg = {},
                            QuadStats* stats = nullptr) {
  if (idx < 1 || idx > 2) fail(ErrorKind::invalid_config, "B-integral index must be 1 or 2");
  const double c = e * (idx == 1 ? detail::log_ratio_a(p) : detail::log_ratio_b(p));
  return detail::abs_kernel_integral(p.alpha, p.lambda, c, [](double) { return 1.0; }, cfg, stats);
}

inline double b_integral(int idx, const Params& p, const QuadConfig& cfg = {}, QuadStats* stats = nullptr) {
  return b_integral_at(idx, p, p.q, cfg, stats);
}

/// C1 = int |t^a - l| (x/a)^(qmt) t^s, C2 with (1 - t^s), C3/C4 with base x/b.
inline double c_integral(int idx, const Params& p, const QuadConfig& cfg = {}, QuadStats* stats = nullptr) {
  if (idx < 1 || idx > 4) fail(ErrorKind::invalid_config, "C-integral index must be 1..4");
  const double c = p.q * p.cls.m * (idx <= 2 ? detail::log_ratio_a(p) : detail::log_ratio_b(p));
  const double s = p.cls.s;
  if (idx % 2 == 1) {
    return detail::abs_kernel_integral(p.alpha, p.lambda, c, [s](double t) { return std::pow(t, s); }, cfg, stats);
  }
  return detail::abs_kernel_integral(p.alpha, p.lambda, c, [s](double t) { return 1.0 - std::pow(t, s); }, cfg,
                                     stats);
}

// ---------------------------------------------------------------------------
// Theorem formulas

/// |f'| at the points a bound references: x (x^m for sm), a and b.
struct DerivSample {
  double dx = 0.0, da = 0.0, db = 0.0;
};

inline DerivSample derivative_sample(Theorem t, const FunctionHandle& f, const Params& p) {
  if (!f.has_derivative()) fail(ErrorKind::missing_derivative, "'" + f.name + "' has no derivative");
  const double xp = t == Theorem::sm ? std::pow(p.x, p.cls.m) : p.x;
  return {std::abs(f.deriv(xp)), std::abs(f.deriv(p.a())), std::abs(f.deriv(p.b()))};
}

/// Dense sampled sup of |f'| over [lo, hi], always including `extra` points.
inline double sampled_derivative_sup(const FunctionHandle& f, double lo, double hi,
                                     const std::vector<double>& extra = {}, int n = 2001) {
  if (!f.has_derivative()) fail(ErrorKind::missing_derivative, "'" + f.name + "' has no derivative");
  double M = 0.0;
  const double l0 = std::log(lo), l1 = std::log(hi);
  for (int i = 0; i < n; ++i) {
    const double u = i == 0 ? lo : (i == n - 1 ? hi : std::exp(l0 + (l1 - l0) * i / (n - 1)));
    M = std::max(M, std::abs(f.deriv(u)));
  }
  for (double u : extra) M = std::max(M, std::abs(f.deriv(u)));
  for (double k : f.kinks) {
    if (k >= lo && k <= hi) {
      M = std::max({M, std::abs(f.deriv(k)), std::abs(f.deriv(std::nextafter(k, 0.0)))});
    }
  }
  return M;
}

/// Interval on which the Ostrowski constant M must bound |f'|.
inline Interval ostrowski_range(Theorem t, const Params& p) {
  if (t != Theorem::sm) return p.iv;
  const double m = p.cls.m;
  const double lo = std::min(p.a(), std::pow(p.a(), m));
  const double hi = std::max(p.b(), std::pow(p.b(), m));
  return Interval(lo, hi);
}

inline double theorem_rhs(Theorem t, const Params& p, const DerivSample& d, const QuadConfig& cfg = {},
                          QuadStats* stats = nullptr) {
  const double a = p.a(), b = p.b(), q = p.q, al = p.alpha;
  const double L1 = std::log(p.x / a), L2 = std::log(b / p.x);
  const double pre = std::pow(a1_closed(al, p.lambda), 1.0 - 1.0 / q);
  const double w1 = pow0(L1, al + 1.0), w2 = pow0(L2, al + 1.0);
  switch (t) {
    case Theorem::ga_s: {
      const double A2 = a_integral(2, p, cfg, stats), A3 = a_integral(3, p, cfg, stats);
      const double A4 = a_integral(4, p, cfg, stats), A5 = a_integral(5, p, cfg, stats);
      return pre * (a * w1 * std::pow(std::pow(d.dx, q) * A2 + std::pow(d.da, q) * A3, 1.0 / q) +
                    b * w2 * std::pow(std::pow(d.dx, q) * A4 + std::pow(d.db, q) * A5, 1.0 / q));
    }
    case Theorem::quasi: {
      const double B1 = b_integral(1, p, cfg, stats), B2 = b_integral(2, p, cfg, stats);
      return pre * (a * w1 * std::max(d.dx, d.da) * std::pow(B1, 1.0 / q) +
                    b * w2 * std::max(d.dx, d.db) * std::pow(B2, 1.0 / q));
    }
    case Theorem::sm: {
      const double m = p.cls.m;
      const double C1 = c_integral(1, p, cfg, stats), C2 = c_integral(2, p, cfg, stats);
      const double C3 = c_integral(3, p, cfg, stats), C4 = c_integral(4, p, cfg, stats);
      return std::pow(m, al + 1.0) * pre *
             (std::pow(a, m) * w1 * std::pow(std::pow(d.dx, q) * C1 + m * std::pow(d.da, q) * C2, 1.0 / q) +
              std::pow(b, m) * w2 * std::pow(std::pow(d.dx, q) * C3 + m * std::pow(d.db, q) * C4, 1.0 / q));
    }
    case Theorem::hh: break;
  }
  fail(ErrorKind::invalid_config, "the Hermite-Hadamard chain has no derivative bound");
}

/// Factor the corollary applies to |I_f| on its left side.
inline double lhs_normalization(const BoundKind& k, const Params& p) {
  const double m = k.theorem == Theorem::sm ? p.cls.m : 1.0;
  switch (k.corollary) {
    case Corollary::simpson:
    case Corollary::midpoint:
    case Corollary::trapezoid:
      return std::pow(2.0, p.alpha - 1.0) * std::pow(m * p.iv.log_width(), -p.alpha);
    case Corollary::ostrowski: return std::pow(m, -p.alpha);
    default: return 1.0;
  }
}

/// Corollary bound derived from the parent theorem: theorem formula at the
/// corollary's parameters (|f'| replaced by M for Ostrowski) times the
/// left-side normalization.
inline double rhs_substituted(const BoundKind& k, const Params& p, const DerivSample& d,
                              std::optional<double> M = std::nullopt, const QuadConfig& cfg = {},
                              QuadStats* stats = nullptr) {
  check_kind_params(k, p);
  DerivSample dd = d;
  if (k.corollary == Corollary::ostrowski) {
    if (!M) fail(ErrorKind::missing_m, "Ostrowski bounds need M >= sup |f'|");
    dd = {*M, *M, *M};
  }
  return lhs_normalization(k, p) * theorem_rhs(k.theorem, p, dd, cfg, stats);
}

enum class DisplayVariant { as_printed, corrected };

/// Corollary right sides coded from their displays. DisplayVariant::corrected
/// applies the repairs listed in expected_corollary_findings().
inline double rhs_display(const BoundKind& k, const Params& p, const DerivSample& d,
                          std::optional<double> M = std::nullopt, const QuadConfig& cfg = {},
                          QuadStats* stats = nullptr, DisplayVariant variant = DisplayVariant::as_printed) {
  check_kind_params(k, p);
  const bool fix = variant == DisplayVariant::corrected;
  const double a = p.a(), b = p.b(), q = p.q, al = p.alpha, L = p.iv.log_width();
  const double L1 = std::log(p.x / a), L2 = std::log(b / p.x);
  const double iq = 1.0 / q, eq = 1.0 - 1.0 / q;
  auto pw = [](double v, double e) { return std::pow(v, e); };
  auto A = [&](int i) { return a_integral(i, p, cfg, stats); };
  auto B = [&](int i) { return b_integral(i, p, cfg, stats); };
  auto C = [&](int i) { return c_integral(i, p, cfg, stats); };
  if (k.corollary == Corollary::ostrowski && !M) fail(ErrorKind::missing_m, "Ostrowski bounds need M >= sup |f'|");

  if (k.corollary == Corollary::none) return theorem_rhs(k.theorem, p, d, cfg, stats);

  if (k.theorem == Theorem::ga_s) {
    switch (k.corollary) {
      case Corollary::s1:
        return pw(a1_closed(al, p.lambda), eq) *
               (a * pw(L1, al + 1.0) * pw(pw(d.dx, q) * A(2) + pw(d.da, q) * A(3), iq) +
                b * pw(L2, al + 1.0) * pw(pw(d.dx, q) * A(4) + pw(d.db, q) * A(5), iq));
      case Corollary::s1_alpha1:
        return pw(a1_closed(1.0, p.lambda), eq) *
               (a * L1 * L1 * pw(pw(d.dx, q) * A(2) + pw(d.da, q) * A(3), iq) +
                b * L2 * L2 * pw(pw(d.dx, q) * A(4) + pw(d.db, q) * A(5), iq));
      case Corollary::q1:
        return a * pw(L1, al + 1.0) * (d.dx * A(2) + d.da * A(3)) +
               b * pw(L2, al + 1.0) * (d.dx * A(4) + d.db * A(5));
      case Corollary::simpson:
      case Corollary::midpoint:
      case Corollary::trapezoid: {
        const double pre = k.corollary == Corollary::simpson  ? pw(a1_closed(al, 1.0 / 3.0), eq)
                           : k.corollary == Corollary::midpoint ? pw(1.0 / (al + 1.0), eq)
                                                                : pw(al / (al + 1.0), eq);
        return L / 4.0 * pre *
               (a * pw(pw(d.dx, q) * A(2) + pw(d.da, q) * A(3), iq) +
                b * pw(pw(d.dx, q) * A(4) + pw(d.db, q) * A(5), iq));
      }
      case Corollary::ostrowski: {
        // Printed with ln^alpha; the substitution gives ln^(alpha+1).
        const double e = fix ? al + 1.0 : al;
        return *M * pw(1.0 / (al + 1.0), eq) *
               (a * pow0(L1, e) * pw(A(2) + A(3), iq) + b * pow0(L2, e) * pw(A(4) + A(5), iq));
      }
      default: break;
    }
  }

  if (k.theorem == Theorem::quasi) {
    // The x = sqrt(ab) displays print [sup{|f'(g)|, |f'(a)|}]^(1/q) where the
    // theorem gives sup{|f'(g)|^q, |f'(a)|^q}^(1/q) = sup{|f'(g)|, |f'(a)|}.
    const double sa = fix ? std::max(d.dx, d.da) : pw(std::max(d.dx, d.da), iq);
    const double sb = fix ? std::max(d.dx, d.db) : pw(std::max(d.dx, d.db), iq);
    switch (k.corollary) {
      case Corollary::q1:
        return a * pw(L1, al + 1.0) * B(1) * std::max(d.dx, d.da) +
               b * pw(L2, al + 1.0) * B(2) * std::max(d.dx, d.db);
      case Corollary::simpson:
        return L / 4.0 * pw(a1_closed(al, 1.0 / 3.0), eq) * (a * sa * pw(B(1), iq) + b * sb * pw(B(2), iq));
      case Corollary::midpoint:
        return L / 4.0 * pw(1.0 / (al + 1.0), eq) * (a * sa * pw(B(1), iq) + b * sb * pw(B(2), iq));
      case Corollary::trapezoid: {
        if (fix) return L / 4.0 * pw(al / (al + 1.0), eq) * (a * sa * pw(B(1), iq) + b * sb * pw(B(2), iq));
        // Printed: prefactor 1/(alpha+1) and B1 shared by both members.
        return L / 4.0 * pw(1.0 / (al + 1.0), eq) * pw(B(1), iq) * (a * sa + b * sb);
      }
      case Corollary::ostrowski:
        return *M / pw(al + 1.0, eq) * (a * pow0(L1, al + 1.0) * pw(B(1), iq) + b * pow0(L2, al + 1.0) * pw(B(2), iq));
      default: break;
    }
  }

  if (k.theorem == Theorem::sm) {
    const double m = p.cls.m;
    // The x = sqrt(ab) displays drop the a^m and b^m weights.
    const double wa = fix ? pw(a, m) : 1.0;
    const double wb = fix ? pw(b, m) : 1.0;
    switch (k.corollary) {
      case Corollary::q1:
        return pw(m, al + 1.0) * (pw(a, m) * pw(L1, al + 1.0) * (d.dx * C(1) + m * d.da * C(2)) +
                                  pw(b, m) * pw(L2, al + 1.0) * (d.dx * C(3) + m * d.db * C(4)));
      case Corollary::simpson:
      case Corollary::midpoint:
      case Corollary::trapezoid: {
        const double pre = k.corollary == Corollary::simpson  ? pw(a1_closed(al, 1.0 / 3.0), eq)
                           : k.corollary == Corollary::midpoint ? pw(1.0 / (al + 1.0), eq)
                                                                : pw(al / (al + 1.0), eq);
        return m * L / 4.0 * pre *
               (wa * pw(pw(d.dx, q) * C(1) + m * pw(d.da, q) * C(2), iq) +
                wb * pw(pw(d.dx, q) * C(3) + m * pw(d.db, q) * C(4), iq));
      }
      case Corollary::ostrowski:
        return m * *M / pw(al + 1.0, eq) *
               (pw(a, m) * pow0(L1, al + 1.0) * pw(C(1) + m * C(2), iq) +
                pw(b, m) * pow0(L2, al + 1.0) * pw(C(3) + m * C(4), iq));
      default: break;
    }
  }
  fail(ErrorKind::invalid_config, "no displayed bound for " + to_string(k));
}

/// Bound used by verification: the theorem formula, or a corollary as printed.
inline double rhs(const BoundKind& k, const FunctionHandle& f, const Params& p,
                  std::optional<double> M = std::nullopt, const QuadConfig& cfg = {}, QuadStats* stats = nullptr) {
  if (k.theorem == Theorem::hh) fail(ErrorKind::invalid_config, "the Hermite-Hadamard chain has no derivative bound");
  const DerivSample d = k.corollary == Corollary::ostrowski ? DerivSample{} : derivative_sample(k.theorem, f, p);
  return rhs_display(k, p, d, M, cfg, stats);
}

/// Normalized left side |I_f| of a kind (or |I_f(x^m, ..., a^m, b^m)| for sm).
inline double bound_lhs(const BoundKind& k, const FunctionHandle& f, const Params& p, const QuadConfig& cfg = {},
                        QuadStats* stats = nullptr) {
  const double v = k.theorem == Theorem::sm ? i_f_m_direct(f, p, cfg, stats) : i_f_direct(f, p, cfg, stats);
  return lhs_normalization(k, p) * std::abs(v);
}

// ---------------------------------------------------------------------------
// Hypothesis certification and verification

struct CertOptions {
  int n_grid = 11;
  int n_random = 256;
  std::uint64_t seed = 42;
};

/// Interval on which the hypothesis is checked: [a, b], widened for sm to
/// cover a^m, b^m and x^m.
inline Interval hypothesis_range(Theorem t, const Params& p) {
  if (t != Theorem::sm) return p.iv;
  const double m = p.cls.m;
  const double xm = std::pow(p.x, m);
  const double lo = std::min({p.a(), std::pow(p.a(), m), xm});
  const double hi = std::max({p.b(), std::pow(p.b(), m), xm});
  return Interval(lo, hi);
}

/// Checks the theorem's hypothesis: GA-convexity of f for hh, the class of
/// |f'|^q otherwise.
inline ClassCertificate certify_hypothesis(Theorem t, const FunctionHandle& f, const Params& p,
                                           const CertOptions& opt = {}) {
  const auto cls = hypothesis_class(t);
  const Interval iv = hypothesis_range(t, p);
  if (t == Theorem::hh) return check_class(f, cls, p.cls, iv, opt.n_grid, opt.n_random, opt.seed);
  const ClassParams cp = t == Theorem::sm ? p.cls : ClassParams{p.cls.s, 1.0};
  return check_class(abs_derivative_pow(f, p.q), cls, cp, iv, opt.n_grid, opt.n_random, opt.seed);
}

struct SlackReport {
  BoundKind kind;
  std::string function;
  Params params;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool pass = false;
  double tol = 0.0;
  /// Hermite-Hadamard middle term (hh kinds only).
  std::optional<double> middle;
  double max_quad_err = 0.0;
  long subdivisions = 0;
  double wall_ms = 0.0;
};

inline double verify_tolerance(double rhs) { return 1e-7 * (1.0 + std::abs(rhs)); }

namespace detail {

inline SlackReport evaluate_once(const BoundKind& k, const FunctionHandle& f, const Params& p,
                                 std::optional<double> M, const QuadConfig& cfg) {
  SlackReport r;
  r.kind = k;
  r.function = f.name;
  r.params = p;
  QuadStats stats;
  if (k.theorem == Theorem::hh) {
    require_domain(f, p.iv);
    const double g = f(p.iv.geometric_mid());
    const double mid = hh_middle(f, p.iv, p.alpha, cfg, &stats);
    const double avg = 0.5 * (f(p.a()) + f(p.b()));
    r.middle = mid;
    const double left = mid - g, right = avg - mid;
    if (k.corollary == Corollary::left_link || (k.corollary == Corollary::none && left <= right)) {
      r.lhs = g;
      r.rhs = mid;
    } else {
      r.lhs = mid;
      r.rhs = avg;
    }
  } else {
    r.lhs = bound_lhs(k, f, p, cfg, &stats);
    r.rhs = rhs(k, f, p, M, cfg, &stats);
  }
  r.slack = r.rhs - r.lhs;
  r.tol = verify_tolerance(r.rhs);
  r.max_quad_err = stats.max_err;
  r.subdivisions = stats.subdivisions;
  r.pass = r.slack >= -r.tol && r.max_quad_err <= 0.1 * r.tol;
  return r;
}

}  // namespace detail

/// Computes both sides without checking the hypothesis. Quadrature is
/// repeated at the tight configuration when its error estimate exceeds a
/// tenth of the verification tolerance.
inline SlackReport evaluate_instance(const BoundKind& k, const FunctionHandle& f, const Params& p,
                                     std::optional<double> M = std::nullopt, const QuadConfig& cfg = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  p.validate();
  check_kind_params(k, p);
  if (k.corollary == Corollary::ostrowski && !M) fail(ErrorKind::missing_m, "Ostrowski bounds need M >= sup |f'|");
  if (M && !(*M >= 0.0)) fail(ErrorKind::domain_error, "M must be >= 0");
  auto r = detail::evaluate_once(k, f, p, M, cfg);
  if (r.max_quad_err > 0.1 * r.tol) r = detail::evaluate_once(k, f, p, M, QuadConfig::tight());
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

/// Verifies one instance given a certificate for the theorem's hypothesis.
inline SlackReport verify_instance(const BoundKind& k, const FunctionHandle& f, const Params& p,
                                   const ClassCertificate& cert, std::optional<double> M = std::nullopt,
                                   const QuadConfig& cfg = {}) {
  if (cert.cls != hypothesis_class(k.theorem)) {
    fail(ErrorKind::hypothesis_not_certified, "certificate is for class " + std::string(to_string(cert.cls)) +
                                                  ", " + to_string(k) + " needs " +
                                                  std::string(to_string(hypothesis_class(k.theorem))));
  }
  if (!cert.certified()) {
    const auto& w = *cert.witness;
    fail(ErrorKind::hypothesis_not_certified,
         "hypothesis class " + std::string(to_string(cert.cls)) + " violated at x=" + std::to_string(w.x) +
             " y=" + std::to_string(w.y) + " t=" + std::to_string(w.t));
  }
  return evaluate_instance(k, f, p, M, cfg);
}

/// Certifies the hypothesis, then verifies.
inline SlackReport verify(const BoundKind& k, const FunctionHandle& f, const Params& p,
                          std::optional<double> M = std::nullopt, const QuadConfig& cfg = {},
                          const CertOptions& opt = {}) {
  p.validate();
  check_kind_params(k, p);
  return verify_instance(k, f, p, certify_hypothesis(k.theorem, f, p, opt), M, cfg);
}

// ---------------------------------------------------------------------------
// Corollary audit

/// Corollaries whose printed bound differs from the parent-theorem
/// substitution:
///  ga-s:ostrowski    ln^alpha printed, ln^(alpha+1) by substitution
///  quasi:simpson     sup^(1/q) printed, sup by substitution
///  quasi:midpoint    same
///  quasi:trapezoid   prefactor (1/(alpha+1))^(1-1/q) printed where
///                    A1(alpha,1)^(1-1/q) = (alpha/(alpha+1))^(1-1/q);
///                    B1 printed for the b member where B2 belongs; sup^(1/q)
///  sm:simpson/midpoint/trapezoid   a^m and b^m weights missing
inline const std::set<BoundKind>& expected_corollary_findings() {
  static const std::set<BoundKind> s = {
      {Theorem::ga_s, Corollary::ostrowski}, {Theorem::quasi, Corollary::simpson},
      {Theorem::quasi, Corollary::midpoint}, {Theorem::quasi, Corollary::trapezoid},
      {Theorem::sm, Corollary::simpson},     {Theorem::sm, Corollary::midpoint},
      {Theorem::sm, Corollary::trapezoid},
  };
  return s;
}

struct CorollaryAuditRow {
  BoundKind kind;
  double max_rel_dev_printed = 0.0;    // printed vs substituted
  double max_rel_dev_corrected = 0.0;  // corrected vs substituted
  bool mismatch = false;
  bool expected = false;
};

struct CorollaryAudit {
  std::vector<CorollaryAuditRow> rows;
  std::vector<BoundKind> unexpected_mismatches;
  std::vector<BoundKind> missing_findings;
  std::vector<BoundKind> uncorrected;
  bool pass() const { return unexpected_mismatches.empty() && missing_findings.empty() && uncorrected.empty(); }
};

inline double audit_tolerance(double v) { return 1e-9 * (1.0 + std::abs(v)); }

/// Draws n_tuples random parameter tuples per corollary (q in [1.5, 4] so the
/// 1/q exponents are visible) with random nonnegative derivative samples, and
/// compares printed, corrected and substituted bounds.
inline CorollaryAudit audit_corollaries(int n_tuples = 20, std::uint64_t seed = 7, const QuadConfig& cfg = QuadConfig::tight()) {
  CorollaryAudit out;
  for (Theorem t : {Theorem::ga_s, Theorem::quasi, Theorem::sm}) {
    for (Corollary c : corollaries_of(t)) {
      if (c == Corollary::none) continue;
      const BoundKind k{t, c};
      CorollaryAuditRow row;
      row.kind = k;
      row.expected = expected_corollary_findings().count(k) > 0;
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t) * 16 + static_cast<std::uint64_t>(c)));
      for (int i = 0; i < n_tuples; ++i) {
        const double a = rng.uniform(0.2, 5.0);
        const double b = a * rng.uniform(1.2, 6.0);
        Params p;
        p.iv = Interval(a, b);
        p.x = std::exp(rng.uniform(std::log(a), std::log(b)));
        p.lambda = rng.u01();
        p.alpha = rng.uniform(0.2, 5.0);
        p.q = rng.uniform(1.5, 4.0);
        p.cls = {rng.uniform(0.1, 1.0), rng.uniform(0.1, 1.0)};
        p = apply_kind_params(k, p);
        const DerivSample d{rng.uniform(0.05, 3.0), rng.uniform(0.05, 3.0), rng.uniform(0.05, 3.0)};
        const double M = rng.uniform(0.5, 3.0);
        const double sub = rhs_substituted(k, p, d, M, cfg);
        const double printed = rhs_display(k, p, d, M, cfg, nullptr, DisplayVariant::as_printed);
        const double fixed = rhs_display(k, p, d, M, cfg, nullptr, DisplayVariant::corrected);
        const double scale = 1.0 + std::abs(sub);
        row.max_rel_dev_printed = std::max(row.max_rel_dev_printed, std::abs(printed - sub) / scale);
        row.max_rel_dev_corrected = std::max(row.max_rel_dev_corrected, std::abs(fixed - sub) / scale);
        if (std::abs(printed - sub) > audit_tolerance(sub)) row.mismatch = true;
        if (std::abs(fixed - sub) > audit_tolerance(sub)) out.uncorrected.push_back(k);
      }
      if (row.mismatch && !row.expected) out.unexpected_mismatches.push_back(k);
      if (!row.mismatch && row.expected) out.missing_findings.push_back(k);
      out.rows.push_back(row);
    }
  }
  std::sort(out.uncorrected.begin(), out.uncorrected.end());
  out.uncorrected.erase(std::unique(out.uncorrected.begin(), out.uncorrected.end()), out.uncorrected.end());
  return out;
}

}  // namespace fracineq
