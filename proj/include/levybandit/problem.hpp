#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "levybandit/errors.hpp"

namespace levybandit {

enum class ArmSide { High, Low };

inline const char* arm_name(ArmSide s) {
  return s == ArmSide::High ? "High" : "Low";
}

// One jump size shared by both risky-arm types. Each type produces jumps of
// this size at its own Poisson rate; rate_low/rate_high is the per-jump
// likelihood ratio of Low to High (the Radon-Nikodym ratio of the two Levy
// measures at this atom). Atoms with rate_high = 0 are rejected outright:
// dominance would force rate_low = 0 and the likelihood ratio degenerates.
struct JumpAtom {
  double size = 0.0;       // h, payoff added per jump; nonzero
  double rate_high = 0.0;  // expected jumps per unit time under High; > 0
  double rate_low = 0.0;   // expected jumps per unit time under Low; <= rate_high

  double rate(ArmSide s) const { return s == ArmSide::High ? rate_high : rate_low; }
};

// A risky-arm type: linear drift, Brownian volatility, and the rate column of
// the shared atom table it reads. Non-owning view; keep the owning stream
// alive while using it.
struct LevyArmType {
  double drift = 0.0;
  double sigma = 0.0;
  std::span<const JumpAtom> atoms{};
  ArmSide side = ArmSide::High;
};

// g_i = sum_h h * rate_i(h) + mu_i, the expected payoff per unit time.
inline double expected_rate(const LevyArmType& arm) {
  double g = arm.drift;
  for (const JumpAtom& a : arm.atoms) g += a.size * a.rate(arm.side);
  return g;
}

// H_i = (sum_h h * rate_i(h)) / nu_bar_i, the mean jump size; 0 for an arm
// that never jumps.
inline double mean_jump_size(const LevyArmType& arm) {
  double weighted = 0.0, total = 0.0;
  for (const JumpAtom& a : arm.atoms) {
    weighted += a.size * a.rate(arm.side);
    total += a.rate(arm.side);
  }
  return total == 0.0 ? 0.0 : weighted / total;
}

// Everything one observed payoff stream carries about its two possible types.
// The sigmas are stored per type so that a violation of the shared-volatility
// assumption is representable and caught by validation rather than silently
// collapsed; valid streams always have sigma_high == sigma_low.
struct StreamSpec {
  double mu_high = 0.0;
  double mu_low = 0.0;
  double sigma_high = 0.0;
  double sigma_low = 0.0;
  std::vector<JumpAtom> atoms;

  LevyArmType arm(ArmSide s) const {
    if (s == ArmSide::High) return {mu_high, sigma_high, atoms, s};
    return {mu_low, sigma_low, atoms, s};
  }

  // Shared Brownian volatility of a validated stream.
  double sigma() const { return sigma_high; }

  // Total jump intensity nu_bar_i.
  double nu_bar(ArmSide s) const {
    double total = 0.0;
    for (const JumpAtom& a : atoms) total += a.rate(s);
    return total;
  }

  double g(ArmSide s) const { return expected_rate(arm(s)); }

  // Whether observing the stream can ever distinguish the two types.
  bool informative() const {
    if (mu_high != mu_low) return true;
    for (const JumpAtom& a : atoms)
      if (a.rate_low != a.rate_high) return true;
    return false;
  }
};

inline StreamSpec make_stream(double mu_high, double mu_low, double sigma,
                              std::vector<JumpAtom> atoms = {}) {
  return StreamSpec{mu_high, mu_low, sigma, sigma, std::move(atoms)};
}

// Two-armed bandit: a safe arm paying safe_rate forever against a risky arm
// whose type (High or Low) is unknown and whose payoff is the Levy process
// described by `stream`.
struct BanditProblem {
  double safe_rate = 0.0;
  double discount = 0.0;  // r > 0
  StreamSpec stream;

  LevyArmType high() const { return stream.arm(ArmSide::High); }
  LevyArmType low() const { return stream.arm(ArmSide::Low); }
  double g_high() const { return stream.g(ArmSide::High); }
  double g_low() const { return stream.g(ArmSide::Low); }
  double sigma() const { return stream.sigma(); }
  double nu_high() const { return stream.nu_bar(ArmSide::High); }
  double nu_low() const { return stream.nu_bar(ArmSide::Low); }
};

inline BanditProblem make_problem(double safe_rate, double discount,
                                  double mu_high, double mu_low, double sigma,
                                  std::vector<JumpAtom> atoms = {}) {
  return BanditProblem{safe_rate, discount,
                       make_stream(mu_high, mu_low, sigma, std::move(atoms))};
}

// First violated assumption, in the order the checks run.
enum class Violation {
  None,
  Scalar,                 // non-finite scalar, r <= 0, sigma < 0
  Atom,                   // size = 0, rate_high <= 0, negative/non-finite rate
  A2,                     // sigma differs across types
  A3,                     // some atom has rate_low > rate_high
  A1,                     // not g_low < s < g_high
  SigmaZeroWithDriftGap,  // mu_high != mu_low but sigma = 0
  Uninformative,          // the two types are indistinguishable
};

inline const char* violation_tag(Violation v) {
  switch (v) {
    case Violation::None: return "ok";
    case Violation::Scalar: return "scalar";
    case Violation::Atom: return "atom";
    case Violation::A2: return "A2";
    case Violation::A3: return "A3";
    case Violation::A1: return "A1";
    case Violation::SigmaZeroWithDriftGap: return "sigma-zero-with-drift-gap";
    case Violation::Uninformative: return "uninformative";
  }
  return "?";
}

struct ValidationResult {
  Violation violated = Violation::None;
  std::string detail;

  bool ok() const { return violated == Violation::None; }
  explicit operator bool() const { return ok(); }
};

class ValidationError : public Error {
 public:
  ValidationError(Violation v, const std::string& detail)
      : Error(std::string("assumption ") + violation_tag(v) +
              " violated: " + detail),
        violated(v) {}
  Violation violated;
};

namespace detail {

inline bool finite(double x) { return std::isfinite(x); }

inline ValidationResult check_stream_scalars(const StreamSpec& s) {
  if (!finite(s.mu_high) || !finite(s.mu_low))
    return {Violation::Scalar, "drift is not finite"};
  if (!finite(s.sigma_high) || !finite(s.sigma_low) || s.sigma_high < 0.0 ||
      s.sigma_low < 0.0)
    return {Violation::Scalar, "sigma must be finite and >= 0"};
  return {};
}

}  // namespace detail

// Stream-level checks: atom sanity, shared volatility (A2), per-atom rate
// dominance (A3), and the rule that a drift gap needs a Brownian channel.
inline ValidationResult validate_stream(const StreamSpec& s) {
  if (auto r = detail::check_stream_scalars(s); !r) return r;
  for (const JumpAtom& a : s.atoms) {
    if (!detail::finite(a.size) || a.size == 0.0)
      return {Violation::Atom, "atom size must be finite and nonzero"};
    if (!detail::finite(a.rate_high) || !detail::finite(a.rate_low) ||
        a.rate_low < 0.0 || a.rate_high <= 0.0)
      return {Violation::Atom,
              "atom rates must be finite, rate_high > 0, rate_low >= 0"};
  }
  if (s.sigma_high != s.sigma_low)
    return {Violation::A2, "types must share the Brownian volatility"};
  for (const JumpAtom& a : s.atoms) {
    if (a.rate_low > a.rate_high)
      return {Violation::A3, "atom at size " + std::to_string(a.size) +
                                 " has rate_low > rate_high"};
  }
  if (s.mu_high != s.mu_low && s.sigma_high == 0.0)
    return {Violation::SigmaZeroWithDriftGap,
            "distinct drifts require sigma > 0"};
  return {};
}

// Full problem validation. Returns the first violated assumption.
inline ValidationResult validate(const BanditProblem& p) {
  if (!detail::finite(p.safe_rate))
    return {Violation::Scalar, "safe_rate is not finite"};
  if (!detail::finite(p.discount) || p.discount <= 0.0)
    return {Violation::Scalar, "discount must be finite and > 0"};
  if (auto r = validate_stream(p.stream); !r) return r;
  // An uninformative stream forces g_high == g_low, so this must be ruled
  // out before the strict A1 ordering can even be stated.
  if (!p.stream.informative())
    return {Violation::Uninformative, "the two types are indistinguishable"};
  const double g1 = p.g_high(), g2 = p.g_low();
  if (!(g2 < p.safe_rate && p.safe_rate < g1))
    return {Violation::A1, "need g_low < s < g_high, got g_low=" +
                               std::to_string(g2) + " s=" +
                               std::to_string(p.safe_rate) + " g_high=" +
                               std::to_string(g1)};
  return {};
}

inline void require_valid(const BanditProblem& p) {
  if (auto r = validate(p); !r) throw ValidationError(r.violated, r.detail);
}

}  // namespace levybandit
