#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "levybandit/problem.hpp"

namespace levybandit {

inline double logit(double p) { return std::log(p / (1.0 - p)); }

// Numerically stable inverse of logit; maps +-inf to 1/0.
inline double sigmoid(double log_odds) {
  if (log_odds >= 0.0) return 1.0 / (1.0 + std::exp(-log_odds));
  const double e = std::exp(log_odds);
  return e / (1.0 + e);
}

// Posterior probability of the High type, kept in log-odds to stay accurate
// near 0 and 1. Beliefs 0 and 1 (log-odds -inf/+inf) are absorbing.
struct Posterior {
  double log_odds = 0.0;

  double belief() const { return sigmoid(log_odds); }

  static Posterior from_belief(double p) {
    require_probability(p, "belief");
    if (p == 0.0) return {-std::numeric_limits<double>::infinity()};
    if (p == 1.0) return {std::numeric_limits<double>::infinity()};
    return {logit(p)};
  }
};

// Log-odds gained from one stretch of play on the risky arm: continuous
// payoff y observed over time t plus the recorded jumps. The increment is
//
//   (mu1 - mu2)/sigma^2 * y - (mu1^2 - mu2^2)/(2 sigma^2) * t
//   - (nu1 - nu2) * t + sum_jumps ln(rate_high / rate_low),
//
// with the two sigma terms absent when sigma = 0 (then y must be 0: a
// driftless jump-only stream produces no continuous payoff). A jump whose
// Low rate is zero contributes +inf: it reveals the High type.
inline double log_odds_increment(const StreamSpec& s, double t,
                                 double continuous_payoff,
                                 std::span<const std::size_t> jump_atoms) {
  double inc = 0.0;
  if (s.sigma() == 0.0) {
    if (continuous_payoff != 0.0)
      throw DomainError(
          "sigma = 0 admits no continuous payoff, got a nonzero observation");
  } else {
    const double s2 = s.sigma() * s.sigma();
    inc += (s.mu_high - s.mu_low) / s2 * continuous_payoff;
    inc -= (s.mu_high * s.mu_high - s.mu_low * s.mu_low) / (2.0 * s2) * t;
  }
  inc -= (s.nu_bar(ArmSide::High) - s.nu_bar(ArmSide::Low)) * t;
  for (std::size_t idx : jump_atoms) {
    const JumpAtom& a = s.atoms.at(idx);
    inc += std::log(a.rate_high / a.rate_low);  // +inf when rate_low == 0
  }
  return inc;
}

// Exact Bayesian posterior after observing the risky arm for time t:
// continuous_payoff is the Brownian-plus-drift component of the payoff,
// jump_atoms indexes every observed jump into the problem's atom table.
inline Posterior posterior_from_history(const BanditProblem& problem,
                                        double q0, double t,
                                        double continuous_payoff,
                                        std::span<const std::size_t> jump_atoms) {
  require_open_probability(q0, "prior q0");
  if (!(t >= 0.0)) throw RangeError("time t must be >= 0");
  if (!std::isfinite(continuous_payoff))
    throw RangeError("continuous payoff observation must be finite");
  return {logit(q0) +
          log_odds_increment(problem.stream, t, continuous_payoff, jump_atoms)};
}

// Post-jump belief P_h = p rate_high / (p rate_high + (1-p) rate_low).
// Never below p: jumps are (weakly) good news under rate dominance.
inline double jump_update(double p, const JumpAtom& atom) {
  require_probability(p, "belief p");
  if (p == 0.0 || p == 1.0) return p;
  const double num = p * atom.rate_high;
  return num / (num + (1.0 - p) * atom.rate_low);
}

// Piecewise-linear stopping boundary equivalent to the belief threshold:
// while playing risky, the DM continues as long as
//
//   signal_sign * Y_B(t) / sigma > slope_F * t - intercept_E - sum credits,
//
// where Y_B is the continuous payoff component and every observed jump adds
// its atom's credit. Fields are normalized so jump credits are >= 0; for
// mu_high > mu_low the raw forms are
//
//   F   = (mu1 + mu2)/(2 sigma) + sigma (nu1 - nu2)/(mu1 - mu2),
//   E   = sigma/(mu1 - mu2) [logit(q0) - logit(p')],
//   G_h = sigma/(mu1 - mu2) ln(rate_high/rate_low),
//
// and signal_sign = +1; the mu_high < mu_low case flips all signs.
struct BoundaryParams {
  double slope_F = 0.0;
  double intercept_E = 0.0;
  std::vector<double> jump_credit;  // per atom index, >= 0
  double signal_sign = 1.0;
};

inline BoundaryParams boundary_params(const BanditProblem& problem, double q0,
                                      double cutoff_p) {
  require_open_probability(q0, "prior q0");
  require_open_probability(cutoff_p, "cutoff");
  const StreamSpec& s = problem.stream;
  if (s.mu_high == s.mu_low)
    throw DomainError(
        "the boundary form needs a drift gap; equal drifts leave only the "
        "belief-threshold rule");

  const double sigma = s.sigma();
  const double scale = sigma / (s.mu_high - s.mu_low);
  const double sign = scale > 0.0 ? 1.0 : -1.0;

  BoundaryParams b;
  b.signal_sign = sign;
  b.slope_F = sign * ((s.mu_high + s.mu_low) / (2.0 * sigma) +
                      scale * (s.nu_bar(ArmSide::High) - s.nu_bar(ArmSide::Low)));
  b.intercept_E = sign * scale * (logit(q0) - logit(cutoff_p));
  b.jump_credit.reserve(s.atoms.size());
  for (const JumpAtom& a : s.atoms)
    b.jump_credit.push_back(sign * scale * std::log(a.rate_high / a.rate_low));
  return b;
}

}  // namespace levybandit
