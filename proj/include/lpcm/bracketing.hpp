#pragma once

#include <cmath>

namespace lpcm {

/// Bisection on [lo, hi] with f(lo) < 0 <= f(hi). Stops when the bracket is
/// no wider than `tol`, or at machine resolution when `tol` <= 0. Returns
/// the upper end, the first point known to be at or past the crossing.
template <class F>
double bisect_crossing(F&& f, double lo, double hi, double tol) {
  for (;;) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (tol > 0.0 && hi - lo <= tol) break;
    if (f(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

struct CrossingScan {
  bool found = false;
  bool at_start = false;  ///< f(t0) >= 0 already
  double t = 0.0;
  bool monotone = true;   ///< no sampled decrease of f up to t (or t_max with full scan)
  int upward_crossings = 0;
};

/// First upward zero crossing of f on [t0, t_max] located by fixed-step
/// bracketing followed by bisection. With `full_scan` the sampling
/// continues to t_max, counting further upward crossings and checking
/// monotonicity over the whole range.
template <class F>
CrossingScan scan_first_crossing(F&& f, double t0, double t_max, double step, double tol,
                                 bool full_scan = false) {
  CrossingScan out;
  double prev_t = t0;
  double prev_f = f(t0);
  if (prev_f >= 0.0) {
    out.found = true;
    out.at_start = true;
    out.t = t0;
    out.upward_crossings = 1;
    if (!full_scan) return out;
  }
  const long n_steps = static_cast<long>(std::ceil((t_max - t0) / step));
  for (long k = 1; k <= n_steps; ++k) {
    const double t = k == n_steps ? t_max : t0 + static_cast<double>(k) * step;
    const double ft = f(t);
    if (ft < prev_f) out.monotone = false;
    if (prev_f < 0.0 && ft >= 0.0) {
      ++out.upward_crossings;
      if (!out.found) {
        out.found = true;
        out.t = bisect_crossing(f, prev_t, t, tol);
        if (!full_scan) return out;
      }
    }
    prev_t = t;
    prev_f = ft;
  }
  return out;
}

}  // namespace lpcm
