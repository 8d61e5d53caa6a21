#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace ctb {

namespace detail {

template <typename F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa,
                            double fm, double fb, double whole, double tol,
                            int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double h = b - a;
  const double left = (h / 12.0) * (fa + 4.0 * flm + fm);
  const double right = (h / 12.0) * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol,
                              depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol,
                              depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature with absolute tolerance. The interval is
/// pre-split into unit-scale panels so sharply peaked integrands on wide
/// intervals are not missed by the first coarse estimate.
template <typename F>
double integrate(const F& f, double a, double b, double tol = 1e-10,
                 int max_depth = 48) {
  if (!(b > a)) return 0.0;
  const int panels =
      std::clamp(static_cast<int>(std::ceil(b - a)), 4, 1 << 12);
  const double step = (b - a) / panels;
  const double panel_tol = tol / panels;
  double total = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double lo = a + k * step;
    const double hi = (k + 1 == panels) ? b : a + (k + 1) * step;
    const double mid = 0.5 * (lo + hi);
    const double flo = f(lo);
    const double fmid = f(mid);
    const double fhi = f(hi);
    const double whole = ((hi - lo) / 6.0) * (flo + 4.0 * fmid + fhi);
    total += detail::adaptive_simpson_rec(f, lo, hi, flo, fmid, fhi, whole,
                                          panel_tol, max_depth);
  }
  return total;
}

/// Bisection for a continuous monotone-bracketed root of f on [lo, hi].
/// Stops once |f(mid)| <= f_tol or the bracket collapses; max_iter bounds
/// the work. Assumes f(lo) and f(hi) bracket zero (sign change or equality).
template <typename F>
double bisect(const F& f, double lo, double hi, double f_tol = 1e-10,
              int max_iter = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  for (int i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) return mid;
    const double fm = f(mid);
    if (std::abs(fm) <= f_tol) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace ctb
