#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "fracineq/error.hpp"

namespace fracineq {

/// Closed interval [a, b] with 0 < a < b.
class Interval {
 public:
  Interval(double a, double b) : a_(a), b_(b) {
    if (!(a > 0.0) || !(a < b) || !std::isfinite(b)) {
      fail(ErrorKind::domain_error, "interval requires 0 < a < b (got a=" + std::to_string(a) +
                                        ", b=" + std::to_string(b) + ")");
    }
  }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double log_width() const noexcept { return std::log(b_ / a_); }
  double geometric_mid() const noexcept { return std::sqrt(a_ * b_); }
  bool contains(double x) const noexcept { return x >= a_ && x <= b_; }

 private:
  double a_, b_;
};

/// Order of a Riemann-Liouville integral, alpha > 0.
class FracOrder {
 public:
  explicit FracOrder(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) fail(ErrorKind::invalid_alpha, "alpha must be > 0");
  }
  double value() const noexcept { return alpha_; }
  operator double() const noexcept { return alpha_; }

 private:
  double alpha_;
};

/// (s, m) of the GA-s and (s,m)-GA classes, both in (0, 1].
struct ClassParams {
  double s = 1.0;
  double m = 1.0;

  void validate() const {
    if (!(s > 0.0 && s <= 1.0)) fail(ErrorKind::domain_error, "class parameter s must lie in (0, 1]");
    if (!(m > 0.0 && m <= 1.0)) fail(ErrorKind::domain_error, "class parameter m must lie in (0, 1]");
  }
};

/// Half-open domain (lo, hi] of a registered function; hi may be +inf.
struct Domain {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double x) const noexcept { return x > lo && x <= hi; }
  bool contains(const Interval& iv) const noexcept { return contains(iv.a()) && contains(iv.b()); }
};

}  // namespace fracineq
