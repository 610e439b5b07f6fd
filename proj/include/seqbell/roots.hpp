#pragma once

#include <cmath>
#include <optional>

namespace seqbell::detail {

inline constexpr int kMaxRootIterations = 200;

/// Root of f on [lo, hi] by bisection; requires a sign change. Infinite
/// endpoint values are fine as long as they carry a sign.
template <typename F>
std::optional<double> bisect_root(F&& f, double lo, double hi, double tol) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (std::isnan(flo) || std::isnan(fhi)) return std::nullopt;
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) return std::nullopt;
  for (int it = 0; it < kMaxRootIterations && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if ((fmid < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// A few safeguarded Newton steps from x inside [lo, hi]; steps leaving the
/// bracket or failing to reduce |f| are rejected.
template <typename F, typename DF>
double newton_polish(F&& f, DF&& df, double x, double lo, double hi, int steps = 5) {
  double fx = f(x);
  for (int i = 0; i < steps; ++i) {
    const double d = df(x);
    if (!std::isfinite(d) || d == 0.0) break;
    const double next = x - fx / d;
    if (!(next >= lo && next <= hi)) break;
    const double fnext = f(next);
    if (!(std::abs(fnext) < std::abs(fx))) break;
    x = next;
    fx = fnext;
  }
  return x;
}

}  // namespace seqbell::detail
