#pragma once

#include <cmath>
#include <utility>

namespace pursuit {

/// Bisection for a sign change of f on [lo, hi] with f(lo) > 0 >= f(hi).
/// Stops when the bracket stops shrinking in floating point or after max_iter
/// halvings; returns the end of the final bracket with the smaller |f|.
template <class F>
double bisect_root(F&& f, double lo, double hi, int max_iter = 200) {
  double flo = f(lo), fhi = f(hi);
  for (int i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    const double fm = f(mid);
    if (fm > 0.0) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
    if (flo == 0.0 || fhi == 0.0) break;
  }
  return std::abs(flo) <= std::abs(fhi) ? lo : hi;
}

/// Golden-section maximization of a unimodal f on [lo, hi].
template <class F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, int iters = 80) {
  constexpr double g = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return fc > fd ? std::pair{c, fc} : std::pair{d, fd};
}

}  // namespace pursuit
