#pragma once

#include <cmath>

#include "levybandit/valuation.hpp"

namespace levybandit {

// A decision maker who believes the prior is subjective_prior while the true
// prior is true_prior, and who runs a cut-off strategy at `cutoff` on the
// subjective posterior.
struct MispriorInput {
  double true_prior = 0.0;        // p0
  double subjective_prior = 0.0;  // q0
  double cutoff = 0.0;            // p'
};

// Expected payoff under the true prior of the subjective cut-off strategy:
//
//   s                                                     if q0 < p',
//   (s - g1) p0 ((1-q0)/q0)^(a+1) (p'/(1-p'))^(a+1)
//   + (s - g2)(1-p0) ((1-q0)/q0)^a (p'/(1-p'))^a
//   + g1 p0 + g2 (1-p0)                                   otherwise,
//
// with a = alpha. Both branches meet at s when q0 = p'. Degenerate corners
// are the formula's limits, special-cased to dodge 0 * inf:
//   p' = 0  -> never stop,    p0 g1 + (1-p0) g2 (q0-independent);
//   p' = 1  -> stop at once,  s;
//   q0 = 0  -> safe forever,  s (unless p' = 0);
//   q0 = 1  -> never stop,    p0 g1 + (1-p0) g2.
inline double misprior_value(const ValueProfile& v, const MispriorInput& in) {
  const double p0 = require_probability(in.true_prior, "true prior p0");
  const double q0 = require_probability(in.subjective_prior, "subjective prior q0");
  const double pc = require_probability(in.cutoff, "cutoff p'");
  const double s = v.safe_rate, g1 = v.g_high, g2 = v.g_low;
  const double risky_forever = p0 * g1 + (1.0 - p0) * g2;

  if (pc == 0.0) return risky_forever;
  if (pc == 1.0) return s;
  if (q0 == 0.0) return s;
  if (q0 == 1.0) return risky_forever;
  if (q0 < pc) return s;

  const double ratio = (1.0 - q0) / q0 * pc / (1.0 - pc);
  const double pow_a = std::pow(ratio, v.alpha);
  const double pow_a1 = pow_a * ratio;
  return (s - g1) * p0 * pow_a1 + (s - g2) * (1.0 - p0) * pow_a +
         risky_forever;
}

inline double misprior_value(const BanditProblem& problem,
                             const MispriorInput& in) {
  return misprior_value(build_profile(problem), in);
}

}  // namespace levybandit
