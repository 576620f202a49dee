#ifndef ORLICZ_SRC_NUMERICS_HPP
#define ORLICZ_SRC_NUMERICS_HPP

#include <cmath>

namespace orlicz::detail {

/// Smallest representable-bisection t >= 0 with f(t) >= v, for f continuous
/// and strictly increasing with f(0) = 0. Monotone in v.
template <class F>
double invert_increasing(F&& f, double v) {
  if (!(v > 0.0)) return 0.0;
  double hi = 1.0;
  while (f(hi) < v) {
    hi *= 2.0;
    if (!std::isfinite(hi)) return hi;
  }
  double lo = 0.5 * hi;
  while (f(lo) >= v) {
    hi = lo;
    lo *= 0.5;
    if (lo < 1e-300) {
      lo = 0.0;
      break;
    }
  }
  for (int it = 0; it < 4000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (f(mid) < v) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

/// Five-point Gauss-Legendre rule on [a, b].
template <class F>
double gauss_legendre5(F&& f, double a, double b) {
  static constexpr double x[5] = {0.0, 0.5384693101056831, -0.5384693101056831,
                                  0.9061798459386640, -0.9061798459386640};
  static constexpr double w[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                  0.2369268850561891, 0.2369268850561891};
  const double c = 0.5 * (a + b), r = 0.5 * (b - a);
  double s = 0.0;
  for (int k = 0; k < 5; ++k) s += w[k] * f(c + r * x[k]);
  return s * r;
}

}  // namespace orlicz::detail

#endif  // ORLICZ_SRC_NUMERICS_HPP
