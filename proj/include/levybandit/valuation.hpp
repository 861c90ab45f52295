#pragma once

#include <cmath>
#include <string>

#include "levybandit/exponent.hpp"
#include "levybandit/problem.hpp"

namespace levybandit {

// Solved optimal policy for one bandit problem: the exponent alpha, the
// optimal cut-off p*, the option-value constant C_alpha, and the payoff data
// the value curve needs.
struct ValueProfile {
  double alpha = 0.0;
  double cutoff = 0.0;         // p*
  double c_alpha = 0.0;        // option-value coefficient, > 0
  double g_high = 0.0;
  double g_low = 0.0;
  double safe_rate = 0.0;
  double myopic_cutoff = 0.0;  // p^m = (s - g2) / (g1 - g2), > cutoff
};

// Option-value shape (1-p) ((1-p)/p)^alpha and its first two derivatives.
// The derivatives are analytic, not finite differences, so that residual
// checks isolate formula errors from differencing noise.
namespace detail {

inline double option_shape(double alpha, double p) {
  return (1.0 - p) * std::pow((1.0 - p) / p, alpha);
}

inline double option_shape_d1(double alpha, double p) {
  // phi'(p) = -((1-p)/p)^alpha (p + alpha) / p
  return -std::pow((1.0 - p) / p, alpha) * (p + alpha) / p;
}

inline double option_shape_d2(double alpha, double p) {
  // phi'' = phi (psi^2 + psi'), psi = -(alpha+1)/(1-p) - alpha/p
  const double q = 1.0 - p;
  const double psi = -(alpha + 1.0) / q - alpha / p;
  const double dpsi = -(alpha + 1.0) / (q * q) + alpha / (p * p);
  return option_shape(alpha, p) * (psi * psi + dpsi);
}

}  // namespace detail

// Solve the problem: alpha from the exponent equation, then
//   p*      = alpha (s - g2) / ((alpha+1)(g1 - s) + alpha (s - g2)),
//   C_alpha = (s - g2 - p* (g1 - g2)) / ((1-p*) ((1-p*)/p*)^alpha),
//   p^m     = (s - g2) / (g1 - g2).
inline ValueProfile build_profile(const BanditProblem& problem) {
  const RootResult root = solve_alpha(problem);
  const double a = root.root;
  const double s = problem.safe_rate;
  const double g1 = problem.g_high();
  const double g2 = problem.g_low();

  ValueProfile v;
  v.alpha = a;
  v.g_high = g1;
  v.g_low = g2;
  v.safe_rate = s;
  v.cutoff = a * (s - g2) / ((a + 1.0) * (g1 - s) + a * (s - g2));
  v.myopic_cutoff = (s - g2) / (g1 - g2);
  v.c_alpha = (s - g2 - v.cutoff * (g1 - g2)) /
              detail::option_shape(a, v.cutoff);

  // The two branches of the value meet at the cut-off by construction.
  const double risky_at_cutoff = v.cutoff * g1 + (1.0 - v.cutoff) * g2 +
                                 v.c_alpha * detail::option_shape(a, v.cutoff);
  if (!(std::abs(risky_at_cutoff - s) <= 1e-10 * std::max(1.0, std::abs(s))))
    throw NumericError("value branches disagree at the cut-off by " +
                       std::to_string(risky_at_cutoff - s));
  return v;
}

// Optimal expected payoff U(p): the safe rate below the cut-off, otherwise
// the risky line plus the option value. U(1) = g_high via the vanishing
// option term.
inline double value(const ValueProfile& v, double p) {
  require_probability(p, "belief p");
  if (p <= v.cutoff) return v.safe_rate;
  return p * v.g_high + (1.0 - p) * v.g_low +
         v.c_alpha * detail::option_shape(v.alpha, p);
}

// dU/dp on the risky branch (p in (cutoff, 1)).
inline double value_slope(const ValueProfile& v, double p) {
  return v.g_high - v.g_low + v.c_alpha * detail::option_shape_d1(v.alpha, p);
}

// d2U/dp2 on the risky branch.
inline double value_curvature(const ValueProfile& v, double p) {
  return v.c_alpha * detail::option_shape_d2(v.alpha, p);
}

// Signed residual of the functional differential equation the optimal value
// solves on (p*, 1):
//
//   U(p) = p g1 + (1-p) g2
//        + (1/r) [ sum_h (p rh + (1-p) rl) U(P_h)
//                  - p (1-p) (nu1 - nu2) U'(p)
//                  - (p nu1 + (1-p) nu2) U(p)
//                  + (1/2) U''(p) p^2 (1-p)^2 ((mu1-mu2)/sigma)^2 ],
//
// where P_h is the post-jump belief. Evaluates to ~0 when alpha solves the
// exponent equation; used as an independent cross-check of the closed form.
inline double fde_residual(const BanditProblem& problem, const ValueProfile& v,
                           double p) {
  require_probability(p, "belief p");
  if (!(p > v.cutoff && p < 1.0))
    throw PreconditionError("fde_residual needs cutoff < p < 1");

  const double u = value(v, p);
  const double u1 = value_slope(v, p);
  const double u2 = value_curvature(v, p);

  double jump_sum = 0.0;
  double nu1 = 0.0, nu2 = 0.0;
  for (const JumpAtom& a : problem.stream.atoms) {
    nu1 += a.rate_high;
    nu2 += a.rate_low;
    const double weight = p * a.rate_high + (1.0 - p) * a.rate_low;
    if (weight > 0.0) jump_sum += weight * value(v, p * a.rate_high / weight);
  }

  double diffusion = 0.0;
  const StreamSpec& s = problem.stream;
  if (s.mu_high != s.mu_low) {
    const double m = (s.mu_high - s.mu_low) / s.sigma();
    diffusion = 0.5 * u2 * p * p * (1.0 - p) * (1.0 - p) * m * m;
  }

  const double rhs =
      p * v.g_high + (1.0 - p) * v.g_low +
      (jump_sum - p * (1.0 - p) * (nu1 - nu2) * u1 -
       (p * nu1 + (1.0 - p) * nu2) * u + diffusion) /
          problem.discount;
  return u - rhs;
}

}  // namespace levybandit
