#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "levybandit/errors.hpp"

namespace levybandit {

struct RootResult {
  double root = 0.0;
  double residual = 0.0;  // f at the reported root
  int iterations = 0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

// Default tolerances. Downstream formulas exponentiate the root, so we drive
// both the residual and the bracket down to double-precision headroom.
inline constexpr double kRootResidualTol = 1e-12;
inline constexpr double kRootWidthTol = 1e-12;

// Unique positive root of a strictly increasing f with f(0) < 0.
//
// The upper end of the bracket is doubled from 1 until f turns positive, then
// the root is refined by bisection accelerated with Newton steps; a Newton
// step is taken only when it lands strictly inside the current bracket.
// Throws NumericError if f never becomes positive within 2^64 (the sign
// change is guaranteed for valid informative problems, so reaching the cap
// signals a validation bypass).
template <class F, class DF>
RootResult solve_increasing_root(F&& f, DF&& df,
                                 double residual_tol = kRootResidualTol,
                                 double width_tol = kRootWidthTol) {
  double lo = 0.0;
  double f_lo = f(0.0);
  if (!(f_lo < 0.0))
    throw NumericError("root solve requires f(0) < 0, got f(0)=" +
                       std::to_string(f_lo));

  double hi = 1.0;
  double f_hi = f(hi);
  int doublings = 0;
  while (f_hi <= 0.0) {
    if (++doublings > 64)
      throw NumericError(
          "no sign change: f stayed negative up to 2^64 "
          "(problem is effectively uninformative)");
    lo = hi;
    f_lo = f_hi;
    hi *= 2.0;
    f_hi = f(hi);
  }

  double x = 0.5 * (lo + hi);
  double fx = f(x);
  int iters = 0;
  const int max_iters = 500;
  while (iters < max_iters) {
    ++iters;
    if (fx == 0.0) break;
    if (fx > 0.0) {
      hi = x;
      f_hi = fx;
    } else {
      lo = x;
      f_lo = fx;
    }
    const double width = hi - lo;
    if (width <= width_tol * std::max(1.0, std::abs(x)) &&
        std::abs(fx) <= residual_tol)
      break;

    double next = 0.5 * (lo + hi);
    const double slope = df(x);
    if (slope > 0.0) {
      const double newton = x - fx / slope;
      if (newton > lo && newton < hi) next = newton;
    }
    x = next;
    fx = f(x);
  }

  // Report the bracket endpoint if it beats the last iterate.
  if (std::abs(f_hi) < std::abs(fx)) { x = hi; fx = f_hi; }
  if (std::abs(f_lo) < std::abs(fx)) { x = lo; fx = f_lo; }

  if (!(std::abs(fx) <= residual_tol))
    throw NumericError("root residual " + std::to_string(fx) +
                       " stuck above the tolerance; the problem is scaled "
                       "beyond double precision");

  return RootResult{x, fx, iters, lo, hi};
}

}  // namespace levybandit
