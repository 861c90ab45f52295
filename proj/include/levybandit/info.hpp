#pragma once

#include <cmath>

#include "levybandit/exponent.hpp"
#include "levybandit/misprior.hpp"
#include "levybandit/problem.hpp"

namespace levybandit {

// Risky arm generating three independent Levy streams:
//   a - observed, contributes to the payoff;
//   b - observed, pays nothing (pure signal);
//   c - unobserved, contributes to the payoff.
// Stream c enters the value only through its expected rates, so that is all
// we store for it.
struct InfoProblem {
  double safe_rate = 0.0;
  double discount = 0.0;
  StreamSpec stream_a;
  StreamSpec stream_b;
  double g_c_high = 0.0;
  double g_c_low = 0.0;

  double paid_g_high() const { return stream_a.g(ArmSide::High) + g_c_high; }
  double paid_g_low() const { return stream_a.g(ArmSide::Low) + g_c_low; }
};

// Streams a and b each satisfy the single-stream requirements; the safe rate
// must sit strictly between the paid totals; (a, b) must jointly distinguish
// the types.
inline ValidationResult validate(const InfoProblem& p) {
  if (!detail::finite(p.safe_rate))
    return {Violation::Scalar, "safe_rate is not finite"};
  if (!detail::finite(p.discount) || p.discount <= 0.0)
    return {Violation::Scalar, "discount must be finite and > 0"};
  if (!detail::finite(p.g_c_high) || !detail::finite(p.g_c_low))
    return {Violation::Scalar, "stream c expectations must be finite"};
  if (auto r = validate_stream(p.stream_a); !r) return r;
  if (auto r = validate_stream(p.stream_b); !r) return r;
  if (!p.stream_a.informative() && !p.stream_b.informative())
    return {Violation::Uninformative,
            "neither observed stream distinguishes the types"};
  const double paid_hi = p.paid_g_high(), paid_lo = p.paid_g_low();
  if (!(paid_lo < p.safe_rate && p.safe_rate < paid_hi))
    return {Violation::A1, "need paid g_low < s < paid g_high, got " +
                               std::to_string(paid_lo) + " / " +
                               std::to_string(p.safe_rate) + " / " +
                               std::to_string(paid_hi)};
  return {};
}

inline void require_valid(const InfoProblem& p) {
  if (auto r = validate(p); !r) throw ValidationError(r.violated, r.detail);
}

// f_{a,b}(eta): the two observed streams' information terms minus r. With
// stream b null this is exactly the single-stream f, term for term.
inline double f_ab_eval(const InfoProblem& p, double eta) {
  return information_term(p.stream_a, eta) + information_term(p.stream_b, eta) -
         p.discount;
}

inline double f_ab_derivative(const InfoProblem& p, double eta) {
  return information_term_derivative(p.stream_a, eta) +
         information_term_derivative(p.stream_b, eta);
}

// beta, the positive root of f_{a,b}: all information the DM observes,
// condensed into one exponent. Signal stream b lowers it; the unobserved
// stream c never enters.
inline RootResult solve_beta(const InfoProblem& p) {
  require_valid(p);
  return solve_increasing_root(
      [&](double eta) { return f_ab_eval(p, eta); },
      [&](double eta) { return f_ab_derivative(p, eta); });
}

struct InfoValueProfile {
  double beta = 0.0;
  double cutoff = 0.0;       // optimal cut-off for a correct-prior DM
  double paid_g_high = 0.0;  // g^a_1 + g^c_1
  double paid_g_low = 0.0;   // g^a_2 + g^c_2
};

inline InfoValueProfile info_optimal_cutoff(const InfoProblem& p) {
  const RootResult root = solve_beta(p);
  const double b = root.root;
  const double s = p.safe_rate;
  const double hi = p.paid_g_high(), lo = p.paid_g_low();
  InfoValueProfile out;
  out.beta = b;
  out.paid_g_high = hi;
  out.paid_g_low = lo;
  out.cutoff = b * (s - lo) / ((b + 1.0) * (hi - s) + b * (s - lo));
  return out;
}

// Expected payoff of a cut-off strategy at p' under subjective prior q0 and
// true prior p0: s when q0 <= p', otherwise the misprior form with beta in
// place of alpha and the paid totals in place of g1, g2.
inline double info_value(const InfoProblem& problem, double p0, double q0,
                         double cutoff_p) {
  require_probability(p0, "true prior p0");
  require_probability(q0, "subjective prior q0");
  require_probability(cutoff_p, "cutoff p'");
  require_valid(problem);
  const double s = problem.safe_rate;
  const double hi = problem.paid_g_high(), lo = problem.paid_g_low();
  const double risky_forever = p0 * hi + (1.0 - p0) * lo;

  if (q0 <= cutoff_p) return s;
  if (cutoff_p == 0.0) return risky_forever;  // never stop
  if (q0 == 1.0) return risky_forever;

  const double beta = solve_beta(problem).root;
  const double ratio = (1.0 - q0) / q0 * cutoff_p / (1.0 - cutoff_p);
  const double pow_b = std::pow(ratio, beta);
  const double pow_b1 = pow_b * ratio;
  return (s - hi) * p0 * pow_b1 + (s - lo) * (1.0 - p0) * pow_b +
         risky_forever;
}

// Fair price of the extra information in `enriched` over `base`: both DMs
// hold the correct prior p0 and use their own optimal cut-offs. Nonnegative
// whenever `enriched` only adds signal.
inline double price_of_information(const InfoProblem& base,
                                   const InfoProblem& enriched, double p0) {
  require_probability(p0, "true prior p0");
  const InfoValueProfile vb = info_optimal_cutoff(base);
  const InfoValueProfile ve = info_optimal_cutoff(enriched);
  return info_value(enriched, p0, p0, ve.cutoff) -
         info_value(base, p0, p0, vb.cutoff);
}

}  // namespace levybandit
