#pragma once

#include <cmath>

#include "levybandit/misprior.hpp"
#include "levybandit/valuation.hpp"

namespace levybandit {

enum class BiasWinner { OptimistBetter, PessimistBetter, Tie };

enum class BiasRegime {
  AlphaAbove1,       // alpha > 1: optimist predicted better
  AlphaBelow1_LowP,  // alpha < 1, beliefs at or below (alpha+2)/3: optimist
  AlphaBelow1_HighP, // alpha < 1, beliefs strictly above (alpha+2)/3: pessimist
  Boundary,          // alpha = 1, or the biased beliefs straddle the split
};

inline const char* bias_winner_name(BiasWinner w) {
  switch (w) {
    case BiasWinner::OptimistBetter: return "optimist";
    case BiasWinner::PessimistBetter: return "pessimist";
    case BiasWinner::Tie: return "tie";
  }
  return "?";
}

inline const char* bias_regime_name(BiasRegime r) {
  switch (r) {
    case BiasRegime::AlphaAbove1: return "alpha-above-1";
    case BiasRegime::AlphaBelow1_LowP: return "alpha-below-1-low-p";
    case BiasRegime::AlphaBelow1_HighP: return "alpha-below-1-high-p";
    case BiasRegime::Boundary: return "boundary";
  }
  return "?";
}

struct BiasVerdict {
  double w_value = 0.0;  // value(optimist) - value(pessimist)
  BiasWinner verdict = BiasWinner::Tie;
  BiasRegime regime = BiasRegime::Boundary;
};

inline constexpr double kBiasTieTol = 1e-12;

// Expected payoff of a DM who plays the optimal cut-off strategy computed
// from the biased prior p0 + eps (eps may be negative) while the true prior
// is p0.
inline double biased_value(const ValueProfile& v, double p0, double eps) {
  require_probability(p0, "true prior p0");
  const double q0 = p0 + eps;
  if (!(q0 >= 0.0 && q0 <= 1.0))
    throw RangeError("biased prior p0 + eps must lie in [0,1], got " +
                     std::to_string(q0));
  return misprior_value(v, MispriorInput{p0, q0, v.cutoff});
}

inline double biased_value(const BanditProblem& problem, double p0,
                           double eps) {
  return biased_value(build_profile(problem), p0, eps);
}

// W(eps) = V(p0 + eps) - V(p0 - eps): the optimist's payoff minus the
// pessimist's. The verdict always comes from the sign of W itself; the
// regime is the classification the sign is known to obey when the biased
// beliefs sit strictly inside one of its cases, and a cross-check asserts
// the two agree there.
inline BiasVerdict compare_bias(const ValueProfile& v, double p0, double eps) {
  require_probability(p0, "true prior p0");
  if (!(eps > 0.0)) throw RangeError("eps must be > 0");
  if (p0 + eps > 1.0)
    throw RangeError("optimist prior p0 + eps exceeds 1");
  if (!(p0 - eps > v.cutoff))
    throw PreconditionError(
        "need cutoff < p0 - eps so that both biased DMs actually play");

  BiasVerdict out;
  out.w_value = biased_value(v, p0, eps) - biased_value(v, p0, -eps);
  out.verdict = out.w_value > kBiasTieTol    ? BiasWinner::OptimistBetter
                : out.w_value < -kBiasTieTol ? BiasWinner::PessimistBetter
                                             : BiasWinner::Tie;

  const double split = (v.alpha + 2.0) / 3.0;
  if (v.alpha > 1.0) {
    out.regime = BiasRegime::AlphaAbove1;
  } else if (v.alpha < 1.0 && p0 + eps <= split) {
    out.regime = BiasRegime::AlphaBelow1_LowP;
  } else if (v.alpha < 1.0 && p0 - eps > split && p0 + eps < 1.0) {
    out.regime = BiasRegime::AlphaBelow1_HighP;
  } else {
    out.regime = BiasRegime::Boundary;  // alpha = 1 or straddling the split
  }

  // Where the classification applies, the direct evaluation must not
  // contradict it; a breach means a formula bug, not bad input.
  const bool optimist_predicted = out.regime == BiasRegime::AlphaAbove1 ||
                                  out.regime == BiasRegime::AlphaBelow1_LowP;
  const bool pessimist_predicted = out.regime == BiasRegime::AlphaBelow1_HighP;
  if ((optimist_predicted && out.w_value < -kBiasTieTol) ||
      (pessimist_predicted && out.w_value > kBiasTieTol))
    throw NumericError("bias comparison contradicts its regime prediction");
  return out;
}

inline BiasVerdict compare_bias(const BanditProblem& problem, double p0,
                                double eps) {
  return compare_bias(build_profile(problem), p0, eps);
}

// Geometric formulation: optimist at (1+rho) p0, pessimist at (1-rho) p0.
// Both carry the same absolute bias rho * p0, so this is compare_bias at
// eps = rho * p0.
inline BiasVerdict compare_bias_geometric(const ValueProfile& v, double p0,
                                          double rho) {
  if (!(rho > 0.0)) throw RangeError("rho must be > 0");
  return compare_bias(v, p0, rho * p0);
}

}  // namespace levybandit
