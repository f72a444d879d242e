#pragma once

/**
 * Test-function registry, seeded generators for each convexity class, and a
 * sample-based certifier for the defining inequalities.
 *
 * Certification is never a proof: it evaluates the class inequality on a
 * lattice plus random samples and either reports certified-on-samples or the
 * worst violating triple (x, y, t), which is exactly replayable.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fracineq/error.hpp"
#include "fracineq/function_handle.hpp"
#include "fracineq/random.hpp"
#include "fracineq/types.hpp"

namespace fracineq {

enum class ConvexityClass { ga, ga_s, gg, quasi, sm_ga };

inline std::string_view to_string(ConvexityClass c) {
  switch (c) {
    case ConvexityClass::ga: return "GA";
    case ConvexityClass::ga_s: return "GA-s";
    case ConvexityClass::gg: return "GG";
    case ConvexityClass::quasi: return "quasi-geometric";
    case ConvexityClass::sm_ga: return "sm-GA";
  }
  return "?";
}

inline ConvexityClass parse_class(std::string_view s) {
  static const std::map<std::string, ConvexityClass, std::less<>> names = {
      {"ga", ConvexityClass::ga},       {"GA", ConvexityClass::ga},
      {"ga-s", ConvexityClass::ga_s},   {"GA-s", ConvexityClass::ga_s},
      {"gg", ConvexityClass::gg},       {"GG", ConvexityClass::gg},
      {"quasi", ConvexityClass::quasi}, {"quasi-geometric", ConvexityClass::quasi},
      {"sm", ConvexityClass::sm_ga},    {"sm-ga", ConvexityClass::sm_ga},
      {"sm-GA", ConvexityClass::sm_ga},
  };
  auto it = names.find(s);
  if (it == names.end()) {
    fail(ErrorKind::invalid_config, "unknown convexity class '" + std::string(s) +
                                        "' (expected ga, ga-s, gg, quasi or sm)");
  }
  return it->second;
}

// ---------------------------------------------------------------------------
// Registry

inline const std::vector<FunctionHandle>& registry() {
  static const std::vector<FunctionHandle> handles = [] {
    using namespace tags;
    std::vector<FunctionHandle> r;
    auto constant = [](double c) {
      FunctionHandle h;
      h.name = "const-" + std::to_string(static_cast<int>(c));
      h.value = [c](double) { return c; };
      h.derivative = [](double) { return 0.0; };
      h.tags = {ga, gg, quasi, nonneg};
      return h;
    };
    r.push_back(constant(1.0));
    r.push_back(constant(5.0));

    r.push_back({"identity", {}, [](double x) { return x; }, [](double) { return 1.0; }, {},
                 {ga, gg, quasi, nonneg}});
    r.push_back({"log", {}, [](double x) { return std::log(x); },
                 [](double x) { return 1.0 / x; }, {}, {ga, quasi}});
    r.push_back({"log-squared", {}, [](double x) { return std::log(x) * std::log(x); },
                 [](double x) { return 2.0 * std::log(x) / x; }, {}, {ga, quasi, nonneg}});
    r.push_back({"pow-neg1", {}, [](double x) { return 1.0 / x; },
                 [](double x) { return -1.0 / (x * x); }, {}, {ga, gg, quasi, nonneg}});
    r.push_back({"sqrt", {}, [](double x) { return std::sqrt(x); },
                 [](double x) { return 0.5 / std::sqrt(x); }, {}, {ga, gg, quasi, nonneg}});
    r.push_back({"square", {}, [](double x) { return x * x; }, [](double x) { return 2.0 * x; },
                 {}, {ga, gg, quasi, nonneg}});
    r.push_back({"exp", {}, [](double x) { return std::exp(x); },
                 [](double x) { return std::exp(x); }, {}, {ga, gg, quasi, nonneg}});

    // 1 on (0, 1], (x - 2)^2 on [1, 4]: quasi-geometrically convex but
    // neither GA- nor GG-convex.
    FunctionHandle pw;
    pw.name = "paper-piecewise";
    pw.domain = {0.0, 4.0};
    pw.value = [](double x) { return x <= 1.0 ? 1.0 : (x - 2.0) * (x - 2.0); };
    pw.derivative = [](double x) { return x < 1.0 ? 0.0 : 2.0 * (x - 2.0); };
    pw.kinks = {1.0};
    pw.tags = {quasi, nonneg};
    r.push_back(std::move(pw));
    return r;
  }();
  return handles;
}

inline std::optional<FunctionHandle> find_function(std::string_view name) {
  for (const auto& h : registry()) {
    if (h.name == name) return h;
  }
  return std::nullopt;
}

inline FunctionHandle lookup(std::string_view name) {
  if (auto h = find_function(name)) return *h;
  fail(ErrorKind::unknown_function, "no registered function named '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Certification

struct Witness {
  double x = 0.0, y = 0.0, t = 0.0;
  double lhs = 0.0, rhs = 0.0, gap = 0.0;  // gap = lhs - rhs
};

enum class Verdict { certified_on_samples, violated };

inline std::string_view to_string(Verdict v) {
  return v == Verdict::certified_on_samples ? "certified-on-samples" : "violated";
}

struct ClassCertificate {
  ConvexityClass cls = ConvexityClass::ga;
  ClassParams params;
  Verdict verdict = Verdict::certified_on_samples;
  std::optional<Witness> witness;
  long samples_used = 0;

  bool certified() const noexcept { return verdict == Verdict::certified_on_samples; }
};

/// Slack allowed before a sample counts as a violation.
inline double class_check_tolerance(double rhs) { return 1e-9 * (1.0 + std::abs(rhs)); }

/// Right side of the class inequality at (f(x), f(y), t).
inline double class_rhs(ConvexityClass cls, const ClassParams& p, double fx, double fy, double t) {
  switch (cls) {
    case ConvexityClass::ga: return t * fx + (1.0 - t) * fy;
    case ConvexityClass::ga_s: return std::pow(t, p.s) * fx + std::pow(1.0 - t, p.s) * fy;
    case ConvexityClass::gg: return std::pow(fx, t) * std::pow(fy, 1.0 - t);
    case ConvexityClass::quasi: return std::max(fx, fy);
    case ConvexityClass::sm_ga: {
      const double ts = std::pow(t, p.s);
      return ts * fx + p.m * (1.0 - ts) * fy;
    }
  }
  return 0.0;
}

/// Evaluation point of the class inequality: x^t y^(1-t), or x^t y^(m(1-t)) for sm-GA.
inline double class_point(ConvexityClass cls, const ClassParams& p, double x, double y, double t) {
  if (cls == ConvexityClass::sm_ga) {
    if (t == 1.0) return x;
    return std::exp(t * std::log(x) + p.m * (1.0 - t) * std::log(y));
  }
  if (t == 1.0) return x;
  if (t == 0.0) return y;
  const double z = std::exp(t * std::log(x) + (1.0 - t) * std::log(y));
  return std::clamp(z, std::min(x, y), std::max(x, y));
}

/// Sample-based check of the defining inequality of `cls` over iv: an
/// n_grid^3 lattice (log-spaced in x and y, linear in t, ends included) plus
/// n_random seeded triples. Reports the worst violation.
inline ClassCertificate check_class(const FunctionHandle& f, ConvexityClass cls,
                                    const ClassParams& params, const Interval& iv, int n_grid = 21,
                                    int n_random = 1000, std::uint64_t seed = 42) {
  if (cls == ConvexityClass::ga_s || cls == ConvexityClass::sm_ga) params.validate();
  if (n_grid < 3) fail(ErrorKind::invalid_config, "n_grid must be >= 3");
  if (n_random < 0) fail(ErrorKind::invalid_config, "n_random must be >= 0");
  if (!f.domain.contains(iv)) {
    fail(ErrorKind::domain_error, "interval lies outside the domain of '" + f.name + "'");
  }

  auto value = [&](double x) {
    const double v = f(x);
    if (!std::isfinite(v)) {
      fail(ErrorKind::domain_error, "'" + f.name + "' is not finite at x=" + std::to_string(x));
    }
    if (cls == ConvexityClass::gg && !(v > 0.0)) {
      fail(ErrorKind::gg_requires_positive,
           "GG check needs f > 0 but f(" + std::to_string(x) + ")=" + std::to_string(v));
    }
    return v;
  };

  ClassCertificate cert;
  cert.cls = cls;
  cert.params = params;

  auto test = [&](double x, double fx, double y, double fy, double t) {
    const double z = class_point(cls, params, x, y, t);
    if (!f.domain.contains(z)) {
      fail(ErrorKind::domain_error, "evaluation point " + std::to_string(z) +
                                        " leaves the domain of '" + f.name + "'");
    }
    const double lhs = value(z);
    const double rhs = class_rhs(cls, params, fx, fy, t);
    ++cert.samples_used;
    if (lhs > rhs + class_check_tolerance(rhs)) {
      const double gap = lhs - rhs;
      if (!cert.witness || gap > cert.witness->gap) cert.witness = Witness{x, y, t, lhs, rhs, gap};
    }
  };

  const double la = std::log(iv.a());
  const double lb = std::log(iv.b());
  std::vector<double> xs(n_grid), fs(n_grid), ts(n_grid);
  for (int i = 0; i < n_grid; ++i) {
    const double u = static_cast<double>(i) / (n_grid - 1);
    xs[i] = i == 0 ? iv.a() : (i == n_grid - 1 ? iv.b() : std::exp(la + u * (lb - la)));
    ts[i] = u;
    fs[i] = value(xs[i]);
  }
  ts.back() = 1.0;

  for (int i = 0; i < n_grid; ++i) {
    for (int j = 0; j < n_grid; ++j) {
      for (int k = 0; k < n_grid; ++k) test(xs[i], fs[i], xs[j], fs[j], ts[k]);
    }
  }

  Rng rng(derive_seed(seed, 0xC1A55));
  for (int r = 0; r < n_random; ++r) {
    const double x = std::clamp(rng.log_uniform(iv.a(), iv.b()), iv.a(), iv.b());
    const double y = std::clamp(rng.log_uniform(iv.a(), iv.b()), iv.a(), iv.b());
    const double t = rng.u01();
    test(x, value(x), y, value(y), t);
  }

  if (cert.witness) cert.verdict = Verdict::violated;
  return cert;
}

// ---------------------------------------------------------------------------
// Generators of GA-convex functions: f = g o ln with g convex.

/// g(z) = c0 + c1 z + c2 z^2 + c4 z^4 + ce e^(k z) + ch max(0, z - z1),
/// z = (ln x - t0) / w. Convex in z whenever c2, c4, ce, ch >= 0.
struct GaRecipe {
  double t0 = 0.0, w = 1.0;
  double c0 = 0.0, c1 = 0.0, c2 = 0.0, c4 = 0.0;
  double ce = 0.0, k = 0.0;
  double ch = 0.0, z1 = 0.0;
};

inline FunctionHandle make_ga_from_recipe(const GaRecipe& r, std::string name) {
  if (!(r.w > 0.0)) fail(ErrorKind::invalid_config, "recipe width must be positive");
  FunctionHandle h;
  h.name = std::move(name);
  h.value = [r](double x) {
    const double z = (std::log(x) - r.t0) / r.w;
    return r.c0 + r.c1 * z + r.c2 * z * z + r.c4 * z * z * z * z + r.ce * std::exp(r.k * z) +
           r.ch * std::max(0.0, z - r.z1);
  };
  h.derivative = [r](double x) {
    const double z = (std::log(x) - r.t0) / r.w;
    const double dg = r.c1 + 2.0 * r.c2 * z + 4.0 * r.c4 * z * z * z + r.ce * r.k * std::exp(r.k * z) +
                      (z > r.z1 ? r.ch : 0.0);
    return dg / (r.w * x);
  };
  if (r.ch != 0.0) h.kinks = {std::exp(r.t0 + r.w * r.z1)};
  h.tags = {tags::ga};
  return h;
}

namespace detail {

inline GaRecipe random_ga_recipe(std::uint64_t seed, const Interval& iv) {
  Rng rng(derive_seed(seed, 0x6A));
  GaRecipe r;
  r.t0 = 0.5 * (std::log(iv.a()) + std::log(iv.b()));
  r.w = 0.5 * iv.log_width();
  r.c1 = rng.uniform(-1.0, 1.0);
  r.c0 = std::abs(r.c1) + rng.u01();  // keeps g >= 0 on |z| <= 1
  if (rng.coin()) r.c2 = rng.u01();
  if (rng.coin()) r.c4 = rng.u01();
  if (rng.coin()) {
    r.ce = rng.u01();
    r.k = rng.uniform(-2.0, 2.0);
  }
  if (rng.coin()) {
    r.ch = rng.u01();
    r.z1 = rng.uniform(-0.8, 0.8);
  }
  return r;
}

}  // namespace detail

/// Random GA-convex function, nonnegative on iv.
inline FunctionHandle make_ga_convex(std::uint64_t seed, const Interval& iv) {
  auto h = make_ga_from_recipe(detail::random_ga_recipe(seed, iv), "ga-random:" + std::to_string(seed));
  h.tags.insert(tags::quasi);
  return h;
}

/// Nonnegative GA-convex functions are GA-s-convex for every s in (0, 1],
/// since t <= t^s on [0, 1].
inline FunctionHandle make_ga_s_convex(std::uint64_t seed, double s, const Interval& iv) {
  ClassParams{s, 1.0}.validate();
  auto h = make_ga_convex(seed, iv);
  h.name = "ga-s-random:" + std::to_string(seed);
  return h;
}

// ---------------------------------------------------------------------------
// Generators of f whose |f'|^q lies in a class. They prescribe
// f'(u) = Q(ln u) and integrate exactly: f(u) = int_0^{ln u} Q(v) e^v dv.

/// int_0^L (v/R)^k e^v dv = (L/R)^k L sum_j L^j / (j! (k + j + 1)).
inline double log_power_primitive(int k, double L, double R = 1.0) {
  if (L == 0.0) return 0.0;
  double term = 1.0;  // L^j / j!
  double sum = 0.0;
  for (int j = 0; j < 2000; ++j) {
    const double add = term / (k + j + 1);
    sum += add;
    if (j > std::abs(L) && std::abs(add) <= 1e-17 * std::abs(sum)) break;
    term *= L / (j + 1);
  }
  return std::pow(L / R, k) * L * sum;
}

namespace detail {

/// Coefficients of Q(v) = sum_k c[k] ((v - v0) / w)^k expanded in v.
inline std::vector<double> expand_shifted(const std::vector<double>& c, double v0, double w) {
  std::vector<double> out(c.size(), 0.0);
  for (std::size_t k = 0; k < c.size(); ++k) {
    // ((v - v0)/w)^k = w^-k sum_i C(k,i) v^i (-v0)^(k-i)
    double binom = 1.0;
    for (std::size_t i = 0; i <= k; ++i) {
      if (i > 0) binom = binom * static_cast<double>(k - i + 1) / static_cast<double>(i);
      out[i] += c[k] * binom * std::pow(-v0, static_cast<double>(k - i)) / std::pow(w, static_cast<double>(k));
    }
  }
  return out;
}

/// f with f'(u) = sum_k c[k] (ln u / R)^k and f(1) = offset.
inline FunctionHandle log_poly_handle(std::vector<double> c, double R, double offset, std::string name) {
  FunctionHandle h;
  h.name = std::move(name);
  h.value = [c, R, offset](double u) {
    const double L = std::log(u);
    double s = offset;
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (c[k] != 0.0) s += c[k] * log_power_primitive(static_cast<int>(k), L, R);
    }
    return s;
  };
  h.derivative = [c, R](double u) {
    const double z = std::log(u) / R;
    double s = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) s = s * z + c[k];
    return s;
  };
  return h;
}

/// f' = c u^kappa.
inline FunctionHandle power_derivative_handle(double c, double kappa, double offset, std::string name) {
  FunctionHandle h;
  h.name = std::move(name);
  if (std::abs(kappa + 1.0) < 1e-12) {
    h.value = [c, offset](double u) { return offset + c * std::log(u); };
  } else {
    h.value = [c, kappa, offset](double u) { return offset + c * std::pow(u, kappa + 1.0) / (kappa + 1.0); };
  }
  h.derivative = [c, kappa](double u) { return c * std::pow(u, kappa); };
  return h;
}

/// One of three families with |f'|^q convex in ln u and nonnegative:
/// Q = c0 + c2 (v - v0)^2, Q = c1 (v - v0), or f' = c u^kappa.
inline FunctionHandle random_convex_log_derivative(Rng& rng, const Interval& iv, std::string name) {
  const double la = std::log(iv.a()), lb = std::log(iv.b());
  const double offset = rng.uniform(-1.0, 1.0);
  switch (rng.below(3)) {
    case 0: {
      const double c0 = rng.u01(), c2 = rng.u01(), v0 = rng.uniform(la, lb);
      return log_poly_handle(expand_shifted({c0, 0.0, c2}, v0, 1.0), 1.0, offset, std::move(name));
    }
    case 1: {
      const double c1 = rng.uniform(-1.0, 1.0), v0 = rng.uniform(la, lb);
      return log_poly_handle(expand_shifted({0.0, c1}, v0, 1.0), 1.0, offset, std::move(name));
    }
    default:
      return power_derivative_handle(rng.uniform(-1.0, 1.0), rng.uniform(-2.0, 2.0), offset,
                                     std::move(name));
  }
}

}  // namespace detail

/// f with |f'|^q GA-convex and nonnegative for every q >= 1, hence GA-s-convex for every s.
inline FunctionHandle make_deriv_ga_s(std::uint64_t seed, const Interval& iv) {
  Rng rng(derive_seed(seed, 0xD6A5));
  return detail::random_convex_log_derivative(rng, iv, "deriv-random:" + std::to_string(seed));
}

/// f with |f'| quasi-geometrically convex (so is |f'|^q): either a monotone
/// cubic in ln u, whose modulus is unimodal, or a GA-convex family.
inline FunctionHandle make_deriv_quasi(std::uint64_t seed, const Interval& iv) {
  Rng rng(derive_seed(seed, 0xD0A5));
  std::string name = "deriv-random:" + std::to_string(seed);
  if (rng.coin()) return detail::random_convex_log_derivative(rng, iv, std::move(name));
  const double la = std::log(iv.a()), lb = std::log(iv.b());
  const double v0 = rng.uniform(la, lb);
  const double w = std::max(0.5 * (lb - la), 1e-3);
  const double sign = rng.coin() ? 1.0 : -1.0;
  const double c0 = sign * rng.uniform(-1.0, 1.0);
  const double c1 = sign * rng.u01();
  const double c3 = sign * rng.u01();
  return detail::log_poly_handle(detail::expand_shifted({c0, c1, 0.0, c3}, v0, w), 1.0,
                                 rng.uniform(-1.0, 1.0), std::move(name));
}

/// Largest polynomial degree the (s,m) generator will use.
inline constexpr int kMaxSmDegree = 64;

/// f with |f'|^q (s,m)-GA-convex on (0, inf):
/// f'(u) = +-(c1 (v/R)^n + c2 (v/R)^(n+2)), v = ln u, with n q >= 1 + ln s / ln m.
/// Then h = |f'|^q o exp is convex with h(c v) <= c^(nq) h(v) for c <= 1, and
/// m^(nq-1) <= s closes the inequality. For m = 1 and s < 1 only constants
/// qualify, and a constant is returned. The same happens when the required
/// degree exceeds kMaxSmDegree.
inline FunctionHandle make_deriv_sm(std::uint64_t seed, double s, double m, double q, const Interval& iv) {
  ClassParams{s, m}.validate();
  if (!(q >= 1.0)) fail(ErrorKind::domain_error, "q must be >= 1");
  Rng rng(derive_seed(seed, 0x5A));
  std::string name = "deriv-random:" + std::to_string(seed);
  const double offset = rng.uniform(-1.0, 1.0);
  if (m == 1.0) {
    if (s == 1.0) return detail::random_convex_log_derivative(rng, iv, std::move(name));
    return detail::log_poly_handle({}, 1.0, offset, std::move(name));
  }
  const double p_star = 1.0 + std::log(s) / std::log(m);
  const int n = std::max(1, static_cast<int>(std::ceil(p_star / q - 1e-12)));
  if (n > kMaxSmDegree) return detail::log_poly_handle({}, 1.0, offset, std::move(name));
  double R = std::max(std::abs(std::log(iv.a())), std::abs(std::log(iv.b())));
  if (!(R > 0.0)) R = 1.0;
  const double sign = rng.coin() ? 1.0 : -1.0;
  std::vector<double> c(static_cast<std::size_t>(n + 3), 0.0);
  c[n] = sign * rng.u01();
  c[n + 2] = sign * rng.u01();
  return detail::log_poly_handle(std::move(c), R, offset, std::move(name));
}

// ---------------------------------------------------------------------------
// Name resolution

/// What a generator spec must produce: the class its output should belong
/// to (of f itself for ga/ga-s, of |f'|^q for "deriv-random").
struct GeneratorContext {
  Interval iv;
  ConvexityClass target = ConvexityClass::ga;
  ClassParams cls;
  double q = 1.0;
};

inline std::optional<std::uint64_t> parse_generator_seed(std::string_view name, std::string_view prefix) {
  if (name.substr(0, prefix.size()) != prefix) return std::nullopt;
  const std::string digits(name.substr(prefix.size()));
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
    fail(ErrorKind::unknown_function, "generator seed must be a nonnegative integer in '" +
                                          std::string(name) + "'");
  }
  return std::stoull(digits);
}

inline bool is_generator_name(std::string_view name) {
  return name.rfind("ga-random:", 0) == 0 || name.rfind("ga-s-random:", 0) == 0 ||
         name.rfind("deriv-random:", 0) == 0;
}

/// Registry names, "ga-random:SEED", "ga-s-random:SEED" and "deriv-random:SEED".
inline FunctionHandle resolve_function(std::string_view name,
                                       const std::optional<GeneratorContext>& ctx = std::nullopt) {
  if (auto h = find_function(name)) return *h;
  if (!is_generator_name(name)) {
    fail(ErrorKind::unknown_function, "no registered function or generator named '" +
                                          std::string(name) + "'");
  }
  if (!ctx) fail(ErrorKind::invalid_config, "generator '" + std::string(name) + "' needs an interval");
  if (auto seed = parse_generator_seed(name, "ga-random:")) return make_ga_convex(*seed, ctx->iv);
  if (auto seed = parse_generator_seed(name, "ga-s-random:")) {
    return make_ga_s_convex(*seed, ctx->cls.s, ctx->iv);
  }
  const auto seed = *parse_generator_seed(name, "deriv-random:");
  switch (ctx->target) {
    case ConvexityClass::ga_s: return make_deriv_ga_s(seed, ctx->iv);
    case ConvexityClass::quasi: return make_deriv_quasi(seed, ctx->iv);
    case ConvexityClass::sm_ga: return make_deriv_sm(seed, ctx->cls.s, ctx->cls.m, ctx->q, ctx->iv);
    case ConvexityClass::ga:
    case ConvexityClass::gg: break;
  }
  return make_ga_convex(seed, ctx->iv);
}

}  // namespace fracineq
