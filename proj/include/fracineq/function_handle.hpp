#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fracineq/error.hpp"
#include "fracineq/types.hpp"

namespace fracineq {

/// Class-membership tags carried by registry fixtures.
namespace tags {
inline constexpr const char* ga = "GA";
inline constexpr const char* gg = "GG";
inline constexpr const char* quasi = "quasi-geometric";
inline constexpr const char* nonneg = "nonnegative";
}  // namespace tags

/// A real function on (0, inf) with an optional analytic derivative.
struct FunctionHandle {
  std::string name;
  Domain domain;
  std::function<double(double)> value;
  std::function<double(double)> derivative;  // empty when unavailable
  /// Interior points where the derivative jumps.
  std::vector<double> kinks;
  /// Known class memberships (fixture metadata, not certificates).
  std::set<std::string> tags;

  double operator()(double x) const { return value(x); }
  bool has_derivative() const noexcept { return static_cast<bool>(derivative); }

  double deriv(double x) const {
    if (!derivative) fail(ErrorKind::missing_derivative, "function '" + name + "' has no derivative");
    return derivative(x);
  }

  bool has_tag(const std::string& t) const { return tags.count(t) > 0; }

  /// Kinks lying strictly inside (lo, hi).
  std::vector<double> kinks_in(double lo, double hi) const {
    std::vector<double> out;
    for (double k : kinks) {
      if (k > lo && k < hi) out.push_back(k);
    }
    return out;
  }
};

/// c * f, derivative included when f has one.
inline FunctionHandle scaled(const FunctionHandle& f, double c) {
  FunctionHandle g;
  g.name = std::to_string(c) + "*" + f.name;
  g.domain = f.domain;
  g.value = [v = f.value, c](double x) { return c * v(x); };
  if (f.derivative) g.derivative = [d = f.derivative, c](double x) { return c * d(x); };
  g.kinks = f.kinks;
  return g;
}

/// c1 * f + c2 * g on the intersection of the domains.
inline FunctionHandle linear_combination(double c1, const FunctionHandle& f, double c2,
                                         const FunctionHandle& g) {
  FunctionHandle h;
  h.name = std::to_string(c1) + "*" + f.name + "+" + std::to_string(c2) + "*" + g.name;
  h.domain = {std::max(f.domain.lo, g.domain.lo), std::min(f.domain.hi, g.domain.hi)};
  h.value = [fv = f.value, gv = g.value, c1, c2](double x) { return c1 * fv(x) + c2 * gv(x); };
  if (f.derivative && g.derivative) {
    h.derivative = [fd = f.derivative, gd = g.derivative, c1, c2](double x) {
      return c1 * fd(x) + c2 * gd(x);
    };
  }
  h.kinks = f.kinks;
  h.kinks.insert(h.kinks.end(), g.kinks.begin(), g.kinks.end());
  std::sort(h.kinks.begin(), h.kinks.end());
  return h;
}

/// |f'|^q as a handle of its own (no derivative). The convexity hypotheses of
/// the bounds are stated for this function rather than for f.
inline FunctionHandle abs_derivative_pow(const FunctionHandle& f, double q) {
  if (!f.derivative) fail(ErrorKind::missing_derivative, "function '" + f.name + "' has no derivative");
  FunctionHandle g;
  g.name = "|" + f.name + "'|^" + std::to_string(q);
  g.domain = f.domain;
  g.value = [d = f.derivative, q](double x) { return std::pow(std::abs(d(x)), q); };
  g.kinks = f.kinks;
  return g;
}

}  // namespace fracineq
