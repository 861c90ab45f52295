#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "levybandit/belief.hpp"
#include "levybandit/problem.hpp"
#include "levybandit/rng.hpp"

namespace levybandit {

struct SimConfig {
  double dt = 1e-3;
  double horizon = 0.0;
  std::int64_t replications = 1;
  std::uint64_t seed = 0;
  double prior_true = 0.5;        // p0: chance the drawn type is High
  double prior_subjective = 0.5;  // q0: where the DM's filter starts
  double cutoff = 0.0;            // p': stop once the subjective belief <= p'
  double truncation_tolerance = 1e-6;  // cap on the reported horizon-tail bound
  int threads = 0;                // 0 = hardware concurrency
};

struct SimOutcome {
  double discounted_payoff = 0.0;
  std::optional<double> stop_time;  // empty when the horizon ran out first
  ArmSide true_type = ArmSide::High;
  std::int64_t jump_count = 0;
};

struct SimEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample std / sqrt(replications)
  std::int64_t replications = 0;
  double truncation_bound = 0.0;  // e^{-r horizon} (|g1| + |g2| + |s|)
};

inline double truncation_bound(const BanditProblem& p, double horizon) {
  return std::exp(-p.discount * horizon) *
         (std::abs(p.g_high()) + std::abs(p.g_low()) + std::abs(p.safe_rate));
}

// Checks shared by every simulation entry point.
inline void validate_config_basic(const BanditProblem& problem,
                                  const SimConfig& cfg) {
  require_valid(problem);
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt))
    throw ConfigError("dt must be finite and > 0");
  if (!(cfg.horizon >= 0.0) || !std::isfinite(cfg.horizon))
    throw ConfigError("horizon must be finite and >= 0");
  if (cfg.replications < 1) throw ConfigError("replications must be >= 1");
  if (!(cfg.prior_true >= 0.0 && cfg.prior_true <= 1.0))
    throw ConfigError("prior_true must lie in [0,1]");
  if (!(cfg.prior_subjective >= 0.0 && cfg.prior_subjective <= 1.0))
    throw ConfigError("prior_subjective must lie in [0,1]");
  if (!(cfg.cutoff >= 0.0 && cfg.cutoff <= 1.0))
    throw ConfigError("cutoff must lie in [0,1]");
  if (!(problem.nu_high() * cfg.dt < 0.1))
    throw ConfigError("per-step jump probability nu_high * dt must stay below 0.1");
}

// Payoff-producing runs additionally require the horizon tail to be small.
inline void validate_config(const BanditProblem& problem, const SimConfig& cfg) {
  validate_config_basic(problem, cfg);
  const double bound = truncation_bound(problem, cfg.horizon);
  if (!(bound <= cfg.truncation_tolerance))
    throw ConfigError("horizon too short: truncation bound " +
                      std::to_string(bound) + " exceeds tolerance " +
                      std::to_string(cfg.truncation_tolerance));
}

// One per-step record of dump_path. `boundary` is the stopping boundary
// F t - E - sum credits (NaN when no drift gap makes it meaningful).
struct PathRecord {
  double t = 0.0;
  double payoff = 0.0;      // cumulative raw payoff Y(t)
  double continuous = 0.0;  // Brownian-plus-drift component Y_B(t)
  double jump_size = 0.0;   // jump payoff received in this step
  double belief = 0.0;      // subjective posterior at t
  double boundary = 0.0;
};

namespace detail {

struct AtomSim {
  double size = 0.0;
  double lambda_high = 0.0;  // rate_high * dt
  double lambda_low = 0.0;
  double log_ratio = 0.0;    // ln(rate_high / rate_low), +inf when rate_low = 0
  double credit = 0.0;       // boundary credit per jump
};

// Precomputed per-step constants; runs any replication index on demand.
// Plays the risky arm while the subjective belief strictly exceeds the
// cut-off, then banks the safe annuity; unstopped paths are closed at the
// horizon with the better of safe-forever and risky-forever under the final
// belief.
class PathSampler {
 public:
  PathSampler(const BanditProblem& problem, const SimConfig& cfg)
      : cfg_(cfg),
        r_(problem.discount),
        s_(problem.safe_rate),
        g_high_(problem.g_high()),
        g_low_(problem.g_low()),
        sigma_(problem.sigma()),
        n_steps_(static_cast<std::int64_t>(
            std::floor(cfg.horizon / cfg.dt + 1e-9))),
        sig_sqdt_(problem.sigma() * std::sqrt(cfg.dt)),
        decay_(std::exp(-problem.discount * cfg.dt)),
        mid_decay_(std::exp(-0.5 * problem.discount * cfg.dt)) {
    const StreamSpec& s = problem.stream;
    drift_pay_[0] = s.mu_high * cfg.dt;
    drift_pay_[1] = s.mu_low * cfg.dt;

    drain_ = (s.nu_bar(ArmSide::High) - s.nu_bar(ArmSide::Low)) * cfg.dt;
    if (s.sigma() > 0.0 && s.mu_high != s.mu_low) {
      const double s2 = s.sigma() * s.sigma();
      obs_gain_ = (s.mu_high - s.mu_low) / s2;
      drain_ += (s.mu_high * s.mu_high - s.mu_low * s.mu_low) / (2.0 * s2) *
                cfg.dt;
    }

    log_odds0_ = to_log_odds(cfg.prior_subjective);
    log_odds_cut_ = to_log_odds(cfg.cutoff);

    check_boundary_ = s.mu_high != s.mu_low && cfg.prior_subjective > 0.0 &&
                      cfg.prior_subjective < 1.0 && cfg.cutoff > 0.0 &&
                      cfg.cutoff < 1.0;
    BoundaryParams bp;
    if (check_boundary_)
      bp = boundary_params(problem, cfg.prior_subjective, cfg.cutoff);

    atoms_.reserve(s.atoms.size());
    for (std::size_t i = 0; i < s.atoms.size(); ++i) {
      const JumpAtom& a = s.atoms[i];
      AtomSim sim;
      sim.size = a.size;
      sim.lambda_high = a.rate_high * cfg.dt;
      sim.lambda_low = a.rate_low * cfg.dt;
      sim.log_ratio = std::log(a.rate_high / a.rate_low);
      sim.credit = check_boundary_ ? bp.jump_credit[i] : 0.0;
      atoms_.push_back(sim);
    }
    slope_ = bp.slope_F;
    intercept_ = bp.intercept_E;
    signal_sign_ = bp.signal_sign;
  }

  std::int64_t steps() const { return n_steps_; }

  template <class Recorder>
  SimOutcome run(std::uint64_t replication, Recorder&& record) const {
    CounterRng rng(cfg_.seed, replication);
    const bool is_high = rng.next_uniform() < cfg_.prior_true;

    SimOutcome out;
    out.true_type = is_high ? ArmSide::High : ArmSide::Low;

    double log_odds = log_odds0_;
    if (!(log_odds > log_odds_cut_)) {
      out.discounted_payoff = s_;
      out.stop_time = 0.0;
      return out;
    }

    const double drift_pay = drift_pay_[is_high ? 0 : 1];
    double discount = 1.0;  // e^{-r t} at the step start
    double payoff = 0.0;
    double continuous = 0.0;  // Y_B(t)
    double total = 0.0;       // Y(t)
    double credit_sum = 0.0;

    for (std::int64_t k = 0; k < n_steps_; ++k) {
      double dy = drift_pay;
      if (sig_sqdt_ > 0.0) dy += sig_sqdt_ * rng.next_normal();

      double jump_pay = 0.0;
      double jump_log_odds = 0.0;
      for (const AtomSim& a : atoms_) {
        const double lambda = is_high ? a.lambda_high : a.lambda_low;
        if (lambda <= 0.0) continue;
        const int count = rng.next_poisson(lambda);
        if (count == 0) continue;
        jump_pay += count * a.size;
        jump_log_odds += count * a.log_ratio;
        credit_sum += count * a.credit;
        out.jump_count += count;
      }

      continuous += dy;
      total += dy + jump_pay;
      // r e^{-r tau} dY with tau at the step midpoint.
      payoff += r_ * discount * mid_decay_ * (dy + jump_pay);
      log_odds += obs_gain_ * dy - drain_ + jump_log_odds;
      discount *= decay_;
      const double t_end = static_cast<double>(k + 1) * cfg_.dt;

      if (check_boundary_) {
        const double lhs = signal_sign_ * continuous / sigma_;
        const double rhs = slope_ * t_end - intercept_ - credit_sum;
        const bool near_tie = std::abs(lhs - rhs) <= 1e-9 ||
                              std::abs(log_odds - log_odds_cut_) <= 1e-9;
        if (!near_tie && (log_odds > log_odds_cut_) != (lhs > rhs))
          throw NumericError(
              "belief threshold and payoff boundary disagree mid-path");
      }

      record(PathRecord{t_end, total, continuous, jump_pay,
                        sigmoid(log_odds),
                        check_boundary_
                            ? slope_ * t_end - intercept_ - credit_sum
                            : std::numeric_limits<double>::quiet_NaN()});

      if (!(log_odds > log_odds_cut_)) {
        payoff += s_ * discount;
        out.stop_time = t_end;
        out.discounted_payoff = payoff;
        return out;
      }
    }

    const double belief_end = sigmoid(log_odds);
    const double risky_tail = belief_end * g_high_ + (1.0 - belief_end) * g_low_;
    payoff += discount * std::max(s_, risky_tail);
    out.discounted_payoff = payoff;
    return out;
  }

 private:
  static double to_log_odds(double p) {
    if (p <= 0.0) return -std::numeric_limits<double>::infinity();
    if (p >= 1.0) return std::numeric_limits<double>::infinity();
    return logit(p);
  }

  SimConfig cfg_;
  double r_, s_, g_high_, g_low_, sigma_;
  std::int64_t n_steps_;
  double sig_sqdt_, decay_, mid_decay_;
  double drift_pay_[2] = {0.0, 0.0};
  double obs_gain_ = 0.0;  // (mu1 - mu2)/sigma^2, 0 without a usable channel
  double drain_ = 0.0;     // deterministic log-odds loss per risky step
  double log_odds0_ = 0.0, log_odds_cut_ = 0.0;
  std::vector<AtomSim> atoms_;
  bool check_boundary_ = false;
  double slope_ = 0.0, intercept_ = 0.0, signal_sign_ = 1.0;
};

struct NoRecord {
  void operator()(const PathRecord&) const {}
};

// Scheduling-independent reduction: fixed binary tree over the index range.
inline double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 16) {
    double total = 0.0;
    for (double x : xs) total += x;
    return total;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

}  // namespace detail

// One replication, fully determined by (config.seed, replication_index).
inline SimOutcome simulate_path(const BanditProblem& problem,
                                const SimConfig& cfg,
                                std::uint64_t replication_index) {
  validate_config(problem, cfg);
  return detail::PathSampler(problem, cfg).run(replication_index,
                                               detail::NoRecord{});
}

// Mean discounted payoff across replications. Replications run in parallel
// on independent counter-based streams; the reduction is a deterministic
// pairwise sum, so the estimate is bit-identical however it is scheduled.
inline SimEstimate estimate_value(const BanditProblem& problem,
                                  const SimConfig& cfg) {
  validate_config(problem, cfg);
  const detail::PathSampler sampler(problem, cfg);
  const std::int64_t n = cfg.replications;
  std::vector<double> payoffs(static_cast<std::size_t>(n));

  int threads = cfg.threads > 0
                    ? cfg.threads
                    : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = static_cast<int>(std::min<std::int64_t>(threads, n));

  std::exception_ptr worker_error;
  std::mutex error_mutex;
  auto worker = [&](std::int64_t begin, std::int64_t end) {
    try {
      for (std::int64_t i = begin; i < end; ++i)
        payoffs[static_cast<std::size_t>(i)] =
            sampler.run(static_cast<std::uint64_t>(i), detail::NoRecord{})
                .discounted_payoff;
    } catch (...) {
      const std::lock_guard<std::mutex> lock(error_mutex);
      if (!worker_error) worker_error = std::current_exception();
    }
  };

  if (threads <= 1) {
    worker(0, n);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    const std::int64_t chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const std::int64_t begin = t * chunk;
      const std::int64_t end = std::min<std::int64_t>(begin + chunk, n);
      if (begin >= end) break;
      pool.emplace_back(worker, begin, end);
    }
    for (std::thread& th : pool) th.join();
  }
  if (worker_error) std::rethrow_exception(worker_error);

  SimEstimate est;
  est.replications = n;
  est.truncation_bound = truncation_bound(problem, cfg.horizon);
  est.mean = detail::pairwise_sum(payoffs) / static_cast<double>(n);
  if (n > 1) {
    for (double& x : payoffs) {
      const double d = x - est.mean;
      x = d * d;
    }
    const double ss = detail::pairwise_sum(payoffs);
    est.std_error = std::sqrt(ss / static_cast<double>(n - 1) /
                              static_cast<double>(n));
  }
  return est;
}

// Streams one replication's per-step records into `record`. A zero-step
// horizon emits nothing.
template <class Recorder>
SimOutcome dump_path(const BanditProblem& problem, const SimConfig& cfg,
                     std::uint64_t replication_index, Recorder&& record) {
  validate_config_basic(problem, cfg);
  return detail::PathSampler(problem, cfg).run(replication_index,
                                               std::forward<Recorder>(record));
}

}  // namespace levybandit
