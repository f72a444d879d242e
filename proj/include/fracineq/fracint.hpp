#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "fracineq/error.hpp"
#include "fracineq/function_handle.hpp"
#include "fracineq/quadrature.hpp"
#include "fracineq/special.hpp"
#include "fracineq/types.hpp"

namespace fracineq {

namespace detail {

inline QuadConfig merge_breakpoints(const QuadConfig& cfg, double lo, double hi,
                                    const std::vector<double>& extra) {
  std::vector<double> all = cfg.breakpoints;
  all.insert(all.end(), extra.begin(), extra.end());
  return cfg.with_breakpoints(interior_points(lo, hi, std::move(all)));
}

inline QuadResult scale(QuadResult r, double c) {
  r.value *= c;
  r.err_estimate *= std::abs(c);
  return r;
}

}  // namespace detail

/// Left-sided integral J_{a+}^alpha f(x) = 1/Gamma(alpha) int_a^x (x-t)^(alpha-1) f(t) dt.
template <class F>
QuadResult rl_left(F&& f, double a, FracOrder alpha, double x, const QuadConfig& cfg = {}) {
  if (!(x > a)) fail(ErrorKind::domain_error, "rl_left requires x > a");
  auto cfg2 = detail::merge_breakpoints(cfg, a, x, {});
  auto r = integrate_endpoint_singular(f, a, x, alpha, SingularEnd::upper, cfg2);
  return detail::scale(r, 1.0 / gamma(alpha));
}

inline QuadResult rl_left(const FunctionHandle& f, double a, FracOrder alpha, double x,
                          const QuadConfig& cfg = {}) {
  if (!(x > a)) fail(ErrorKind::domain_error, "rl_left requires x > a");
  auto cfg2 = detail::merge_breakpoints(cfg, a, x, f.kinks);
  auto r = integrate_endpoint_singular(f.value, a, x, alpha, SingularEnd::upper, cfg2);
  return detail::scale(r, 1.0 / gamma(alpha));
}

/// Right-sided integral J_{b-}^alpha f(x) = 1/Gamma(alpha) int_x^b (t-x)^(alpha-1) f(t) dt.
template <class F>
QuadResult rl_right(F&& f, double b, FracOrder alpha, double x, const QuadConfig& cfg = {}) {
  if (!(x < b)) fail(ErrorKind::domain_error, "rl_right requires x < b");
  auto cfg2 = detail::merge_breakpoints(cfg, x, b, {});
  auto r = integrate_endpoint_singular(f, x, b, alpha, SingularEnd::lower, cfg2);
  return detail::scale(r, 1.0 / gamma(alpha));
}

inline QuadResult rl_right(const FunctionHandle& f, double b, FracOrder alpha, double x,
                           const QuadConfig& cfg = {}) {
  if (!(x < b)) fail(ErrorKind::domain_error, "rl_right requires x < b");
  auto cfg2 = detail::merge_breakpoints(cfg, x, b, f.kinks);
  auto r = integrate_endpoint_singular(f.value, x, b, alpha, SingularEnd::lower, cfg2);
  return detail::scale(r, 1.0 / gamma(alpha));
}

/// J^0 f = f.
inline double rl_order_zero(const FunctionHandle& f, double x) { return f(x); }

/// The two log-composed members appearing in I_f:
///   lower_member = J^alpha_{(ln x)-}(f o exp)(ln a)
///                = 1/Gamma(alpha) int_{ln a}^{ln x} (t - ln a)^(alpha-1) f(e^t) dt
///   upper_member = J^alpha_{(ln x)+}(f o exp)(ln b)
///                = 1/Gamma(alpha) int_{ln x}^{ln b} (ln b - t)^(alpha-1) f(e^t) dt
/// An empty range (x = a or x = b) contributes 0.
struct LogPair {
  double lower_member = 0.0;
  double upper_member = 0.0;
  double sum() const noexcept { return lower_member + upper_member; }
};

inline LogPair rl_log_pair(const FunctionHandle& f, const Interval& iv, FracOrder alpha, double x,
                           const QuadConfig& cfg = {}, QuadStats* stats = nullptr) {
  const double a = iv.a();
  const double b = iv.b();
  if (!(x >= a && x <= b)) fail(ErrorKind::domain_error, "rl_log_pair requires a <= x <= b");

  // Both members are written with the kernel singular at u = 0:
  // t = ln a + u for the first, t = ln b - u for the second.
  const double inv_gamma = 1.0 / gamma(alpha);
  LogPair out;
  const double l1 = std::log(x / a);
  if (x > a && l1 > 0.0) {
    std::vector<double> bps;
    for (double k : f.kinks_in(a, x)) bps.push_back(std::log(k / a));
    auto g = [&](double u) { return f(std::min(a * std::exp(u), x)); };
    auto r = integrate_endpoint_singular(g, 0.0, l1, alpha, SingularEnd::lower,
                                         detail::merge_breakpoints(cfg, 0.0, l1, bps));
    record(stats, detail::scale(r, inv_gamma));
    out.lower_member = r.value * inv_gamma;
  }
  const double l2 = std::log(b / x);
  if (x < b && l2 > 0.0) {
    std::vector<double> bps;
    for (double k : f.kinks_in(x, b)) bps.push_back(std::log(b / k));
    auto g = [&](double u) { return f(std::max(b * std::exp(-u), x)); };
    auto r = integrate_endpoint_singular(g, 0.0, l2, alpha, SingularEnd::lower,
                                         detail::merge_breakpoints(cfg, 0.0, l2, bps));
    record(stats, detail::scale(r, inv_gamma));
    out.upper_member = r.value * inv_gamma;
  }
  return out;
}

}  // namespace fracineq
