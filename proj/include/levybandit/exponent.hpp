#pragma once

#include <cmath>

#include "levybandit/problem.hpp"
#include "levybandit/root_solve.hpp"

namespace levybandit {

// Per-stream part of the exponent equation. For one observed stream,
//
//   sum_h rate_low (rate_low/rate_high)^eta + eta (nu1 - nu2) - nu2
//     + (1/2) eta (eta+1) ((mu1 - mu2) / sigma)^2,
//
// with the drift term defined as 0 when mu1 == mu2 (which covers the
// pure-Poisson sigma = 0 case). Vanishes identically at eta = 0 and is
// strictly increasing on (0, inf) whenever the stream is informative.
inline double information_term(const StreamSpec& s, double eta) {
  double powered = 0.0;  // sum rate_low * (rate_low/rate_high)^eta
  double nu1 = 0.0, nu2 = 0.0;
  for (const JumpAtom& a : s.atoms) {
    nu1 += a.rate_high;
    nu2 += a.rate_low;
    if (a.rate_low > 0.0)
      powered += a.rate_low * std::pow(a.rate_low / a.rate_high, eta);
  }
  double drift_quad = 0.0;
  if (s.mu_high != s.mu_low) {
    const double m = (s.mu_high - s.mu_low) / s.sigma();
    drift_quad = 0.5 * (eta + 1.0) * eta * m * m;
  }
  return powered + eta * (nu1 - nu2) - nu2 + drift_quad;
}

inline double information_term_derivative(const StreamSpec& s, double eta) {
  double d = 0.0;
  double nu1 = 0.0, nu2 = 0.0;
  for (const JumpAtom& a : s.atoms) {
    nu1 += a.rate_high;
    nu2 += a.rate_low;
    if (a.rate_low > 0.0 && a.rate_low != a.rate_high) {
      const double ratio = a.rate_low / a.rate_high;
      d += a.rate_low * std::log(ratio) * std::pow(ratio, eta);
    }
  }
  d += nu1 - nu2;
  if (s.mu_high != s.mu_low) {
    const double m = (s.mu_high - s.mu_low) / s.sigma();
    d += 0.5 * (2.0 * eta + 1.0) * m * m;
  }
  return d;
}

// f(eta) = information_term(eta) - r. f(0) = -r exactly; the optimal-policy
// exponent alpha is its unique positive root.
inline double f_eval(const BanditProblem& p, double eta) {
  return information_term(p.stream, eta) - p.discount;
}

inline double f_derivative(const BanditProblem& p, double eta) {
  return information_term_derivative(p.stream, eta);
}

inline RootResult solve_alpha(const BanditProblem& p) {
  require_valid(p);
  return solve_increasing_root(
      [&](double eta) { return f_eval(p, eta); },
      [&](double eta) { return f_derivative(p, eta); });
}

}  // namespace levybandit
