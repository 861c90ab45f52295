// Acceptance suite: one line per criterion, every tolerance pinned in code.
// Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "levybandit/json_io.hpp"
#include "levybandit/levybandit.hpp"
#include "support/random_problems.hpp"

using namespace levybandit;
namespace fs = std::filesystem;

namespace {

const std::string kFixtures = FIXTURES_DIR;
const std::string kCli = CLI_BIN;

struct Check {
  bool ok = true;
  std::string detail;

  void fail(const std::string& what) {
    if (ok) detail = what;
    ok = false;
  }
  void expect(bool condition, const std::string& what) {
    if (!condition) fail(what);
  }
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

// --- criterion 1: exact special-case reductions ---------------------------

void criterion_special_cases(Check& c) {
  // Brownian-motion-only arm: alpha = (-1 + sqrt(1 + 8 r sigma^2/gap^2)) / 2,
  // 100-point grid over (r, sigma, gap)
  const std::vector<double> rs{0.1, 0.5, 1.0, 2.0, 5.0};
  const std::vector<double> sigmas{0.25, 0.5, 1.0, 2.0, 4.0};
  const std::vector<double> gaps{0.1, 0.5, 1.0, 3.0};
  for (double r : rs)
    for (double sigma : sigmas)
      for (double gap : gaps) {
        const auto p = make_problem(0.5 * gap, r, gap, 0.0, sigma);
        const double formula =
            (-1.0 + std::sqrt(1.0 + 8.0 * r * sigma * sigma / (gap * gap))) /
            2.0;
        const double solved = solve_alpha(p).root;
        c.expect(std::abs(solved - formula) <= 1e-10,
                 "Brownian alpha off by " + fmt(solved - formula) + " at r=" +
                     fmt(r) + " sigma=" + fmt(sigma) + " gap=" + fmt(gap));
      }

  // jump-only arm with a silent Low type: alpha = r / lambda,
  // 100-point grid over (r, lambda)
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      const double r = 0.2 + 0.4 * i;
      const double lambda = 0.3 + 0.3 * j;
      const auto p =
          make_problem(0.5 * lambda, r, 0.0, 0.0, 0.0, {{1.0, lambda, 0.0}});
      const double solved = solve_alpha(p).root;
      c.expect(std::abs(solved - r / lambda) <= 1e-10,
               "jump-only alpha off by " + fmt(solved - r / lambda) +
                   " at r=" + fmt(r) + " lambda=" + fmt(lambda));
    }
}

// --- criterion 2: root-equation properties ---------------------------------

void criterion_root_equation(Check& c) {
  std::mt19937_64 rng(1001);
  for (int i = 0; i < 1000; ++i) {
    const auto p = testsupport::random_problem(rng);
    c.expect(f_eval(p, 0.0) == -p.discount, "f(0) != -r exactly");
    double prev_eta = 0.0, prev_f = -p.discount;
    for (int k = 1; k <= 4; ++k) {
      const double eta = prev_eta + testsupport::uniform(rng, 0.05, 1.5);
      const double fe = f_eval(p, eta);
      c.expect(fe > prev_f, "f not strictly increasing");
      prev_eta = eta;
      prev_f = fe;
    }
    const auto root = solve_alpha(p);
    c.expect(std::abs(root.residual) <= 1e-12,
             "solver residual " + fmt(root.residual) + " above 1e-12");
    c.expect(root.bracket_lo <= root.root && root.root <= root.bracket_hi,
             "root escaped its bracket");
  }
}

// --- criterion 3: value-function structure ---------------------------------

void criterion_value_structure(Check& c) {
  std::mt19937_64 rng(1003);
  const int grid = 10000;
  std::vector<double> u(grid + 1);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = testsupport::random_problem(rng);
    const auto v = build_profile(p);

    c.expect(v.cutoff < v.myopic_cutoff, "cutoff not below the myopic cutoff");
    c.expect(std::abs(value(v, v.cutoff) - p.safe_rate) <= 1e-10,
             "value(cutoff) != safe rate");
    c.expect(std::abs(value(v, 1.0) - p.g_high()) <= 1e-10,
             "value(1) != g_high");

    for (int i = 0; i <= grid; ++i)
      u[i] = value(v, static_cast<double>(i) / grid);
    for (int i = 0; i < grid && c.ok; ++i)
      c.expect(u[i + 1] >= u[i] - 1e-12, "value not nondecreasing");
    for (int i = 1; i < grid && c.ok; ++i)
      c.expect(u[i + 1] - 2.0 * u[i] + u[i - 1] >= -1e-9,
               "value not convex (second difference below -1e-9)");

    const double quotient =
        (value(v, v.cutoff + 1e-6) - p.safe_rate) / 1e-6;
    c.expect(quotient < 1e-2, "smooth-pasting quotient " + fmt(quotient) +
                                  " at eps=1e-6 not below 1e-2");

    for (int i = 1; i <= 50; ++i) {
      const double q = v.cutoff + (1.0 - v.cutoff) * i / 51.0;
      const double res = fde_residual(p, v, q);
      c.expect(std::abs(res) < 1e-8,
               "FDE residual " + fmt(res) + " at p=" + fmt(q));
    }
  }
}

// --- criterion 4: misprior consistency --------------------------------------

double misprior_via_intercept(const BanditProblem& p, const ValueProfile& v,
                              double p0, double q0, double cutoff) {
  const double m = (p.stream.mu_high - p.stream.mu_low) / p.sigma();
  const double e = boundary_params(p, q0, cutoff).intercept_E;
  return p0 * v.g_high + (1.0 - p0) * v.g_low +
         (v.safe_rate - v.g_high) * p0 * std::exp(-m * (v.alpha + 1.0) * e) +
         (v.safe_rate - v.g_low) * (1.0 - p0) * std::exp(-m * v.alpha * e);
}

void criterion_misprior(Check& c) {
  std::mt19937_64 rng(1004);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = testsupport::random_problem(rng);
    const auto v = build_profile(p);

    for (int i = 0; i < 1000; ++i) {  // 10^5 randomized (p0, q0) pairs total
      const double p0 = testsupport::uniform(rng, 0.0, 1.0);
      const double q0 = testsupport::uniform(rng, 0.0, 1.0);
      const double biased = misprior_value(v, {p0, q0, v.cutoff});
      c.expect(biased <= value(v, p0) + 1e-12,
               "misprior value exceeds the optimal value");
    }

    const double p0 = testsupport::uniform(rng, 0.05, 0.95);
    c.expect(std::abs(misprior_value(v, {p0, p0, v.cutoff}) - value(v, p0)) <=
                 1e-12,
             "correct-prior payoff differs from the optimal value");

    const double pc = testsupport::uniform(rng, 0.15, 0.85);
    const double delta = 1e-12;
    const double left = misprior_value(v, {p0, pc - delta, pc});
    const double right = misprior_value(v, {p0, pc + delta, pc});
    c.expect(std::abs(right - left) <= 1e-8,
             "discontinuity of size " + fmt(right - left) + " at q0 = p'");

    if (p.stream.mu_high != p.stream.mu_low) {
      const double q0 = testsupport::uniform(rng, pc, 0.97);
      const double direct = misprior_value(v, {p0, q0, pc});
      const double via_e = misprior_via_intercept(p, v, p0, q0, pc);
      c.expect(std::abs(direct - via_e) <=
                   1e-12 * std::max(1.0, std::abs(direct)),
               "intercept-form payoff differs by " + fmt(direct - via_e));
    }
  }
}

// --- criterion 5: Monte Carlo oracle agreement ------------------------------

void criterion_monte_carlo(Check& c) {
  struct Fixture {
    const char* file;
    double p0, q0;
  };
  const Fixture fixtures[] = {
      {"/brownian.json", 0.5, 0.5},
      {"/krc.json", 0.5, 0.5},
      {"/mixed.json", 0.5, 0.5},
  };

  for (const Fixture& fx : fixtures) {
    const auto problem = load_problem(kFixtures + fx.file);
    const auto v = build_profile(problem);
    const double closed =
        misprior_value(v, {fx.p0, fx.q0, v.cutoff});

    SimConfig cfg;
    cfg.dt = 1e-3;
    cfg.horizon = 20.0 / problem.discount;
    cfg.replications = 100000;
    cfg.seed = 90210;
    cfg.prior_true = fx.p0;
    cfg.prior_subjective = fx.q0;
    cfg.cutoff = v.cutoff;

    const auto coarse = estimate_value(problem, cfg);
    const double tol = 3.0 * coarse.std_error + coarse.truncation_bound;
    c.expect(std::abs(coarse.mean - closed) <= tol,
             std::string(fx.file) + ": |mean - closed| = " +
                 fmt(std::abs(coarse.mean - closed)) + " above " + fmt(tol));

    SimConfig fine = cfg;
    fine.dt = 5e-4;
    fine.seed = 90211;  // independent stream for the refinement run
    const auto refined = estimate_value(problem, fine);
    const double ci = 3.0 * std::sqrt(coarse.std_error * coarse.std_error +
                                      refined.std_error * refined.std_error);
    c.expect(std::abs(coarse.mean - refined.mean) < ci,
             std::string(fx.file) + ": dt vs dt/2 gap " +
                 fmt(std::abs(coarse.mean - refined.mean)) +
                 " not below the CI width " + fmt(ci));
  }
}

// --- criterion 6: information model -----------------------------------------

void criterion_information(Check& c) {
  std::mt19937_64 rng(1006);

  // b-null reduction on randomized problems
  for (int i = 0; i < 100; ++i) {
    const auto p = testsupport::random_problem(rng);
    InfoProblem ip;
    ip.safe_rate = p.safe_rate;
    ip.discount = p.discount;
    ip.stream_a = p.stream;
    const auto v = build_profile(p);
    const double p0 = testsupport::uniform(rng, 0.0, 1.0);
    const double q0 = testsupport::uniform(rng, 0.0, 1.0);
    const double pc = testsupport::uniform(rng, 0.05, 0.95);
    if (q0 != pc) {
      const double lhs = info_value(ip, p0, q0, pc);
      const double rhs = misprior_value(v, {p0, q0, pc});
      c.expect(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)),
               "b-null info value differs from misprior by " + fmt(lhs - rhs));
    }
  }

  // beta comparisons and information price on 500 randomized problems
  for (int i = 0; i < 500; ++i) {
    const auto pa = testsupport::random_problem(rng);
    const auto pb = testsupport::random_problem(rng);
    InfoProblem base;
    base.safe_rate = pa.safe_rate;
    base.discount = pa.discount;
    base.stream_a = pa.stream;
    InfoProblem enriched = base;
    enriched.stream_b = pb.stream;

    const double beta_a = solve_beta(base).root;
    const double beta_ab = solve_beta(enriched).root;
    c.expect(beta_ab < beta_a, "beta did not drop when adding signal");

    const double p0 = testsupport::uniform(rng, 0.0, 1.0);
    c.expect(price_of_information(base, enriched, p0) >= -1e-12,
             "negative price of information");

    auto shifted = enriched;
    shifted.g_c_high = testsupport::uniform(rng, -0.05, 0.2);
    shifted.g_c_low = testsupport::uniform(rng, -0.2, 0.05);
    if (validate(shifted))
      c.expect(std::abs(solve_beta(shifted).root - beta_ab) <= 1e-12,
               "beta moved under a c-stream perturbation");
  }
}

// --- criterion 7: bias classification ----------------------------------------

void criterion_bias(Check& c) {
  std::mt19937_64 rng(1007);
  const double margin = 1e-3;
  int cases = 0;
  while (cases < 500) {
    const auto p = testsupport::random_problem(rng);
    const auto v = build_profile(p);
    const double split = (v.alpha + 2.0) / 3.0;

    double lo = 0.0, hi = 0.0;
    bool optimist_expected = true;
    if (v.alpha > 1.0 + 1e-6) {
      lo = v.cutoff + margin;
      hi = 1.0;
    } else if (v.alpha < 1.0 - 1e-6) {
      if (testsupport::uniform(rng, 0.0, 1.0) < 0.5 &&
          split - v.cutoff > 4.0 * margin) {
        lo = v.cutoff + margin;
        hi = std::min(split, 1.0);
      } else if (1.0 - split > 4.0 * margin) {
        lo = split + margin;
        hi = 1.0 - margin;
        optimist_expected = false;
      } else {
        continue;
      }
    } else {
      continue;
    }
    if (hi - lo < 4.0 * margin) continue;

    const double p0 = testsupport::uniform(rng, lo + margin, hi - margin);
    const double eps = testsupport::uniform(
        rng, margin / 2.0, std::min(p0 - lo, hi - p0));
    if (!(p0 - eps > v.cutoff) || p0 + eps > 1.0) continue;

    const auto verdict = compare_bias(v, p0, eps);
    c.expect(verdict.regime != BiasRegime::Boundary,
             "sampled point fell outside every regime");
    if (optimist_expected)
      c.expect(verdict.w_value > 0.0,
               "W = " + fmt(verdict.w_value) + " not positive in an optimist "
               "regime (alpha=" + fmt(v.alpha) + " p0=" + fmt(p0) +
               " eps=" + fmt(eps) + ")");
    else
      c.expect(verdict.w_value < 0.0,
               "W = " + fmt(verdict.w_value) + " not negative in the "
               "pessimist regime (alpha=" + fmt(v.alpha) + " p0=" + fmt(p0) +
               " eps=" + fmt(eps) + ")");
    ++cases;

    // W(0) = 0 exactly
    c.expect(biased_value(v, p0, 0.0) - biased_value(v, p0, -0.0) == 0.0,
             "W(0) != 0");

    // geometric-bias equivalence at the same absolute bias
    const double rho = eps / p0;
    const auto geometric = compare_bias_geometric(v, p0, rho);
    c.expect(geometric.verdict == verdict.verdict,
             "geometric and absolute bias verdicts disagree");
  }
}

// --- criterion 8: filter properties ------------------------------------------

void criterion_filter(Check& c) {
  const auto mixed = load_problem(kFixtures + "/mixed.json");

  // one-step martingale at 10^6 draws
  {
    std::mt19937_64 rng(1008);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double prior = 0.4;
    const double dt = 0.05;
    const int draws = 1000000;
    double sum = 0.0, sum_sq = 0.0;
    std::vector<std::size_t> jumps;
    for (int i = 0; i < draws; ++i) {
      const bool high = unif(rng) < prior;
      const double mu =
          high ? mixed.stream.mu_high : mixed.stream.mu_low;
      const double y = mu * dt + mixed.sigma() * std::sqrt(dt) * normal(rng);
      jumps.clear();
      for (std::size_t a = 0; a < mixed.stream.atoms.size(); ++a) {
        const double rate = high ? mixed.stream.atoms[a].rate_high
                                 : mixed.stream.atoms[a].rate_low;
        const int count = std::poisson_distribution<int>(rate * dt)(rng);
        for (int k = 0; k < count; ++k) jumps.push_back(a);
      }
      const double b =
          posterior_from_history(mixed, prior, dt, y, jumps).belief();
      sum += b;
      sum_sq += b * b;
    }
    const double mean = sum / draws;
    const double se =
        std::sqrt((sum_sq / draws - mean * mean) / draws);
    c.expect(std::abs(mean - prior) <= 3.0 * se,
             "posterior not a martingale: mean " + fmt(mean) + " vs prior " +
                 fmt(prior) + " (se " + fmt(se) + ")");
  }

  // threshold rule vs boundary rule at every step of 10^3 simulated paths;
  // the simulator also asserts this internally and would throw
  {
    const auto v = build_profile(mixed);
    SimConfig cfg;
    cfg.dt = 1e-3;
    cfg.horizon = 10.0;
    cfg.replications = 1;
    cfg.seed = 777;
    cfg.prior_true = 0.5;
    cfg.prior_subjective = 0.5;
    cfg.cutoff = v.cutoff;
    const double cut_odds = std::log(cfg.cutoff / (1.0 - cfg.cutoff));
    long steps = 0;
    for (std::uint64_t rep = 0; rep < 1000; ++rep) {
      try {
        dump_path(mixed, cfg, rep, [&](const PathRecord& rec) {
          ++steps;
          const double lhs = rec.continuous / mixed.sigma();
          if (std::abs(lhs - rec.boundary) <= 1e-9) return;
          const double odds = std::log(rec.belief / (1.0 - rec.belief));
          if (std::abs(odds - cut_odds) <= 1e-9) return;
          if ((rec.belief > cfg.cutoff) != (lhs > rec.boundary))
            c.fail("threshold and boundary rules disagree at t=" +
                   fmt(rec.t));
        });
      } catch (const Error& e) {
        c.fail(std::string("simulator invariant threw: ") + e.what());
        break;
      }
    }
    c.expect(steps > 100000, "path sample unexpectedly small");
  }

  // jumps never push the posterior down
  {
    std::mt19937_64 rng(1009);
    for (int i = 0; i < 20000; ++i) {
      JumpAtom a{1.0, testsupport::uniform(rng, 0.05, 3.0), 0.0};
      a.rate_low = a.rate_high * testsupport::uniform(rng, 0.0, 1.0);
      const double p = testsupport::uniform(rng, 0.0, 1.0);
      c.expect(jump_update(p, a) >= p, "jump decreased the posterior");
    }
  }
}

// --- criterion 9: byte-identical simulate runs -------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void criterion_determinism(Check& c) {
  const fs::path base = fs::temp_directory_path() / "levybandit_acceptance";
  fs::remove_all(base);
  const fs::path dir1 = base / "run1";
  const fs::path dir2 = base / "run2";
  fs::create_directories(dir1);
  fs::create_directories(dir2);

  const std::string args = " simulate --problem " + kFixtures +
                           "/mixed.json --reps 20000 --dt 0.001 --horizon 20"
                           " --seed 4242 --threads 2";
  const std::string quiet = " > /dev/null 2>&1";
  const int rc1 =
      std::system((kCli + args + " --out " + dir1.string() + quiet).c_str());
  const int rc2 =
      std::system((kCli + args + " --out " + dir2.string() + quiet).c_str());
  c.expect(WIFEXITED(rc1) && WEXITSTATUS(rc1) == 0, "first simulate run failed");
  c.expect(WIFEXITED(rc2) && WEXITSTATUS(rc2) == 0, "second simulate run failed");

  const std::string csv1 = slurp(dir1 / "sim.csv");
  const std::string csv2 = slurp(dir2 / "sim.csv");
  c.expect(!csv1.empty(), "sim.csv missing");
  c.expect(csv1 == csv2, "sim.csv differs between identical runs");
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    std::function<void(Check&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, "special-case reductions (Brownian formula, jump-only r/lambda)",
       criterion_special_cases},
      {2, "root-equation properties (f(0) = -r, monotone, residual <= 1e-12)",
       criterion_root_equation},
      {3, "value-function structure (convexity, pasting, FDE residual)",
       criterion_value_structure},
      {4, "misprior consistency (dominance, continuity, intercept form)",
       criterion_misprior},
      {5, "Monte Carlo oracle agreement (3 fixtures, dt and dt/2)",
       criterion_monte_carlo},
      {6, "information model (b-null reduction, beta drop, price >= 0)",
       criterion_information},
      {7, "bias classification (regime signs, W(0) = 0, geometric bias)",
       criterion_bias},
      {8, "filter properties (martingale, boundary equivalence, good news)",
       criterion_filter},
      {9, "byte-identical parallel simulate runs", criterion_determinism},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      criterion.run(check);
    } catch (const std::exception& e) {
      check.fail(std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (check.ok) {
      std::printf("[PASS] criterion %d: %s (%.1f s)\n", criterion.number,
                  criterion.name, seconds);
    } else {
      ++failures;
      std::printf("[FAIL] criterion %d: %s (%.1f s) - %s\n", criterion.number,
                  criterion.name, seconds, check.detail.c_str());
    }
    std::fflush(stdout);
  }
  return failures;
}
