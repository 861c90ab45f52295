// Command-line front end: reads JSON problem documents, solves them in closed
// form, runs the Monte Carlo cross-check, and writes CSV results.
//
// Verbs: solve, value, simulate, sweep, price-info, bias-compare, dump-path.
// Exit codes: 0 success, 1 schema error, 2 validation error, 3 numeric
// failure (no root bracket, confidence-interval breach).

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "levybandit/levybandit.hpp"
#include "levybandit/json_io.hpp"

namespace lb = levybandit;
namespace fs = std::filesystem;

namespace {

// CSV numbers carry 12 significant digits; std::to_chars keeps the decimal
// point locale-proof.
std::string csv_num(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x,
                           std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

// Human summaries use 6 digits.
std::string human_num(double x) {
  char buf[64];
  auto res =
      std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::fixed, 6);
  return std::string(buf, res.ptr);
}

class CsvFile {
 public:
  CsvFile(const fs::path& path, const std::string& header) {
    out_.open(path, std::ios::binary);
    if (!out_) throw lb::Error("cannot open output file: " + path.string());
    out_ << header << "\n";
  }
  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << fields[i];
    }
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

struct CommonArgs {
  std::string problem_path;
  std::string out_dir = ".";
};

fs::path prepare_out_dir(const CommonArgs& args) {
  fs::path dir(args.out_dir);
  if (!dir.empty()) fs::create_directories(dir);
  return dir;
}

void write_echo(const fs::path& dir, const nlohmann::json& doc) {
  std::ofstream out(dir / "problem_echo.json", std::ios::binary);
  out << doc.dump(2) << "\n";
}

lb::BanditProblem load_base(const CommonArgs& args, const fs::path& out_dir) {
  const nlohmann::json doc = lb::load_json_file(args.problem_path);
  lb::BanditProblem problem = lb::parse_problem(doc);
  lb::require_valid(problem);
  write_echo(out_dir, lb::to_json(problem));
  return problem;
}

double parse_cutoff(const std::string& text, const lb::ValueProfile& profile) {
  if (text == "optimal") return profile.cutoff;
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw lb::SchemaError("--cutoff expects a probability or \"optimal\", got \"" +
                          text + "\"");
  }
}

int run_solve(const CommonArgs& args) {
  const fs::path dir = prepare_out_dir(args);
  const lb::BanditProblem problem = load_base(args, dir);
  const lb::ValueProfile v = lb::build_profile(problem);

  std::cout << "alpha=" << human_num(v.alpha) << "\n"
            << "cutoff=" << human_num(v.cutoff) << "\n"
            << "c_alpha=" << human_num(v.c_alpha) << "\n"
            << "myopic=" << human_num(v.myopic_cutoff) << "\n"
            << "g_high=" << human_num(v.g_high) << "\n"
            << "g_low=" << human_num(v.g_low) << "\n";

  CsvFile csv(dir / "solve.csv", "alpha,cutoff,c_alpha,myopic,g_high,g_low");
  csv.row({csv_num(v.alpha), csv_num(v.cutoff), csv_num(v.c_alpha),
           csv_num(v.myopic_cutoff), csv_num(v.g_high), csv_num(v.g_low)});
  return 0;
}

int run_value(const CommonArgs& args, int grid) {
  if (grid < 2) throw lb::SchemaError("--grid must be at least 2");
  const fs::path dir = prepare_out_dir(args);
  const lb::BanditProblem problem = load_base(args, dir);
  const lb::ValueProfile v = lb::build_profile(problem);

  CsvFile csv(dir / "curve.csv", "p,value,branch");
  for (int i = 0; i < grid; ++i) {
    const double p = static_cast<double>(i) / (grid - 1);
    csv.row({csv_num(p), csv_num(lb::value(v, p)),
             p <= v.cutoff ? "safe" : "risky"});
  }
  std::cout << "curve with " << grid << " points written; cutoff="
            << human_num(v.cutoff) << " value(cutoff)=" << human_num(v.safe_rate)
            << " value(1)=" << human_num(v.g_high) << "\n";
  return 0;
}

struct SimArgs {
  double dt = 1e-3;
  std::optional<double> horizon;
  std::int64_t reps = 100000;
  std::uint64_t seed = 12345;
  std::string cutoff = "optimal";
  std::optional<double> q0;
  double p0 = 0.5;
  std::optional<double> expect;
  int threads = 0;
};

lb::SimConfig make_config(const lb::BanditProblem& problem, const SimArgs& sa,
                          const lb::ValueProfile& profile) {
  lb::SimConfig cfg;
  cfg.dt = sa.dt;
  cfg.horizon = sa.horizon ? *sa.horizon : 20.0 / problem.discount;
  cfg.replications = sa.reps;
  cfg.seed = sa.seed;
  cfg.prior_true = sa.p0;
  cfg.prior_subjective = sa.q0 ? *sa.q0 : sa.p0;
  cfg.cutoff = parse_cutoff(sa.cutoff, profile);
  cfg.threads = sa.threads;
  return cfg;
}

int run_simulate(const CommonArgs& args, const SimArgs& sa) {
  const fs::path dir = prepare_out_dir(args);
  const lb::BanditProblem problem = load_base(args, dir);
  const lb::ValueProfile profile = lb::build_profile(problem);
  const lb::SimConfig cfg = make_config(problem, sa, profile);

  const double closed = lb::misprior_value(
      profile, lb::MispriorInput{cfg.prior_true, cfg.prior_subjective,
                                 cfg.cutoff});
  const double target = sa.expect ? *sa.expect : closed;

  const lb::SimEstimate est = lb::estimate_value(problem, cfg);
  const double diff = std::abs(est.mean - target);
  const double tolerance = 3.0 * est.std_error + est.truncation_bound;

  CsvFile csv(dir / "sim.csv",
              "mean,std_error,reps,truncation_bound,closed_form,abs_diff");
  csv.row({csv_num(est.mean), csv_num(est.std_error),
           std::to_string(est.replications), csv_num(est.truncation_bound),
           csv_num(target), csv_num(diff)});

  std::cout << "mean=" << human_num(est.mean)
            << " std_error=" << human_num(est.std_error)
            << " closed_form=" << human_num(target)
            << " abs_diff=" << human_num(diff) << "\n";
  if (sa.expect)
    std::cout << "comparison target overridden by --expect (closed form is "
              << human_num(closed) << ")\n";
  if (diff > tolerance) {
    std::cerr << "confidence-interval violation: |mean - closed_form| = "
              << human_num(diff) << " exceeds 3*std_error + truncation = "
              << human_num(tolerance) << "\n";
    return 3;
  }
  std::cout << "within 3*std_error + truncation (" << human_num(tolerance)
            << ")\n";
  return 0;
}

struct SweepAxis {
  std::string name;
  double from = 0.0;
  double to = 0.0;
  int steps = 0;
};

void apply_param(lb::BanditProblem& p, const std::string& name, double value) {
  if (name == "safe_rate") p.safe_rate = value;
  else if (name == "discount") p.discount = value;
  else if (name == "sigma") { p.stream.sigma_high = value; p.stream.sigma_low = value; }
  else if (name == "mu_high") p.stream.mu_high = value;
  else if (name == "mu_low") p.stream.mu_low = value;
  else throw lb::SchemaError("unknown sweep parameter \"" + name +
                             "\" (use safe_rate, discount, sigma, mu_high, mu_low)");
}

int run_sweep(const CommonArgs& args, const std::vector<std::string>& names,
              const std::vector<double>& froms, const std::vector<double>& tos,
              const std::vector<int>& steps) {
  if (names.empty() || names.size() > 2)
    throw lb::SchemaError("sweep needs one or two --param axes");
  if (froms.size() != names.size() || tos.size() != names.size() ||
      steps.size() != names.size())
    throw lb::SchemaError("each --param needs a matching --from, --to, --steps");

  std::vector<SweepAxis> axes;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (steps[i] < 1) throw lb::SchemaError("--steps must be >= 1");
    axes.push_back({names[i], froms[i], tos[i], steps[i]});
  }

  const fs::path dir = prepare_out_dir(args);
  const lb::BanditProblem base = load_base(args, dir);

  std::string header = axes[0].name;
  if (axes.size() == 2) header += "," + axes[1].name;
  header += ",alpha,cutoff,c_alpha,myopic,g_high,g_low";
  CsvFile csv(dir / "sweep.csv", header);

  auto axis_value = [](const SweepAxis& a, int i) {
    if (a.steps == 1) return a.from;
    return a.from + (a.to - a.from) * i / (a.steps - 1);
  };

  const int outer = axes[0].steps;
  const int inner = axes.size() == 2 ? axes[1].steps : 1;
  for (int i = 0; i < outer; ++i) {
    for (int j = 0; j < inner; ++j) {
      lb::BanditProblem p = base;
      const double x = axis_value(axes[0], i);
      apply_param(p, axes[0].name, x);
      std::vector<std::string> fields{csv_num(x)};
      if (axes.size() == 2) {
        const double y = axis_value(axes[1], j);
        apply_param(p, axes[1].name, y);
        fields.push_back(csv_num(y));
      }
      lb::require_valid(p);
      const lb::ValueProfile v = lb::build_profile(p);  // alpha per grid point
      fields.insert(fields.end(),
                    {csv_num(v.alpha), csv_num(v.cutoff), csv_num(v.c_alpha),
                     csv_num(v.myopic_cutoff), csv_num(v.g_high),
                     csv_num(v.g_low)});
      csv.row(fields);
    }
  }
  std::cout << "sweep of " << outer * inner << " points written\n";
  return 0;
}

int run_price_info(const CommonArgs& args, int grid) {
  if (grid < 2) throw lb::SchemaError("--grid must be at least 2");
  const fs::path dir = prepare_out_dir(args);
  const nlohmann::json doc = lb::load_json_file(args.problem_path);
  const lb::InfoProblem enriched = lb::parse_info_problem(doc);
  lb::require_valid(enriched);
  write_echo(dir, lb::to_json(enriched));

  lb::InfoProblem base = enriched;
  base.stream_b = lb::StreamSpec{};  // drop the pure-signal stream
  lb::require_valid(base);

  const lb::InfoValueProfile vb = lb::info_optimal_cutoff(base);
  const lb::InfoValueProfile ve = lb::info_optimal_cutoff(enriched);
  std::cout << "beta_base=" << human_num(vb.beta)
            << " cutoff_base=" << human_num(vb.cutoff)
            << " beta_enriched=" << human_num(ve.beta)
            << " cutoff_enriched=" << human_num(ve.cutoff) << "\n";

  CsvFile csv(dir / "price_info.csv", "p0,value_base,value_enriched,price");
  for (int i = 0; i < grid; ++i) {
    const double p0 = static_cast<double>(i) / (grid - 1);
    const double value_base = lb::info_value(base, p0, p0, vb.cutoff);
    const double value_enriched = lb::info_value(enriched, p0, p0, ve.cutoff);
    csv.row({csv_num(p0), csv_num(value_base), csv_num(value_enriched),
             csv_num(value_enriched - value_base)});
  }
  return 0;
}

int run_bias_compare(const CommonArgs& args, double p0, double eps, int grid) {
  if (grid < 1) throw lb::SchemaError("--grid must be at least 1");
  if (!(eps > 0.0)) throw lb::SchemaError("--eps must be > 0");
  const fs::path dir = prepare_out_dir(args);
  const lb::BanditProblem problem = load_base(args, dir);
  const lb::ValueProfile v = lb::build_profile(problem);

  std::cout << "alpha=" << human_num(v.alpha) << " cutoff=" << human_num(v.cutoff)
            << " split=" << human_num((v.alpha + 2.0) / 3.0) << "\n";

  CsvFile csv(dir / "bias.csv", "eps,w_value,verdict,regime");
  for (int k = 1; k <= grid; ++k) {
    const double e = eps * k / grid;
    const lb::BiasVerdict verdict = lb::compare_bias(v, p0, e);
    csv.row({csv_num(e), csv_num(verdict.w_value),
             lb::bias_winner_name(verdict.verdict),
             lb::bias_regime_name(verdict.regime)});
  }
  return 0;
}

int run_dump_path(const CommonArgs& args, const SimArgs& sa,
                  std::uint64_t replication) {
  const fs::path dir = prepare_out_dir(args);
  const lb::BanditProblem problem = load_base(args, dir);
  const lb::ValueProfile profile = lb::build_profile(problem);
  const lb::SimConfig cfg = make_config(problem, sa, profile);

  CsvFile csv(dir / "path.csv", "t,payoff,continuous,jump_size,belief,boundary");
  const lb::SimOutcome outcome = lb::dump_path(
      problem, cfg, replication, [&](const lb::PathRecord& rec) {
        csv.row({csv_num(rec.t), csv_num(rec.payoff), csv_num(rec.continuous),
                 csv_num(rec.jump_size), csv_num(rec.belief),
                 std::isnan(rec.boundary) ? "" : csv_num(rec.boundary)});
      });
  std::cout << "type=" << lb::arm_name(outcome.true_type) << " jumps="
            << outcome.jump_count << " discounted_payoff="
            << human_num(outcome.discounted_payoff);
  if (outcome.stop_time)
    std::cout << " stop_time=" << human_num(*outcome.stop_time);
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-armed Levy bandit solver and simulator"};
  app.require_subcommand(1);

  CommonArgs common;
  SimArgs sim_args;
  int value_grid = 101, price_grid = 21, bias_grid = 11;
  double p0 = 0.5, eps = 0.1;
  std::uint64_t replication = 0;
  std::vector<std::string> param_names;
  std::vector<double> param_from, param_to;
  std::vector<int> param_steps;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--problem", common.problem_path, "problem document (JSON)")
        ->required();
    cmd->add_option("--out", common.out_dir, "output directory");
  };
  auto add_sim = [&](CLI::App* cmd) {
    cmd->add_option("--dt", sim_args.dt, "time step");
    cmd->add_option("--horizon", sim_args.horizon,
                    "simulation horizon (default 20/r)");
    cmd->add_option("--reps", sim_args.reps, "replications");
    cmd->add_option("--seed", sim_args.seed, "RNG seed");
    cmd->add_option("--cutoff", sim_args.cutoff, "cutoff p' or \"optimal\"");
    cmd->add_option("--q0", sim_args.q0, "subjective prior (default p0)");
    cmd->add_option("--p0", sim_args.p0, "true prior");
    cmd->add_option("--threads", sim_args.threads,
                    "worker threads (0 = hardware)");
  };

  CLI::App* solve = app.add_subcommand("solve", "closed-form solution");
  add_common(solve);

  CLI::App* value = app.add_subcommand("value", "value curve on a grid");
  add_common(value);
  value->add_option("--grid", value_grid, "grid points");

  CLI::App* simulate =
      app.add_subcommand("simulate", "Monte Carlo estimate vs closed form");
  add_common(simulate);
  add_sim(simulate);
  simulate->add_option("--expect", sim_args.expect,
                       "override the closed-form comparison value");

  CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep");
  add_common(sweep);
  sweep->add_option("--param", param_names, "parameter name (repeat for 2 axes)");
  sweep->add_option("--from", param_from, "axis start");
  sweep->add_option("--to", param_to, "axis end");
  sweep->add_option("--steps", param_steps, "axis points");

  CLI::App* price =
      app.add_subcommand("price-info", "price of the pure-signal stream");
  add_common(price);
  price->add_option("--grid", price_grid, "p0 grid points");

  CLI::App* bias = app.add_subcommand("bias-compare", "optimist vs pessimist");
  add_common(bias);
  bias->add_option("--p0", p0, "true prior");
  bias->add_option("--eps", eps, "largest bias")->required();
  bias->add_option("--grid", bias_grid, "table rows");

  CLI::App* dump = app.add_subcommand("dump-path", "per-step path CSV");
  add_common(dump);
  add_sim(dump);
  dump->add_option("--rep", replication, "replication index");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // bad flags are schema errors
  }

  try {
    if (solve->parsed()) return run_solve(common);
    if (value->parsed()) return run_value(common, value_grid);
    if (simulate->parsed()) return run_simulate(common, sim_args);
    if (sweep->parsed())
      return run_sweep(common, param_names, param_from, param_to, param_steps);
    if (price->parsed()) return run_price_info(common, price_grid);
    if (bias->parsed()) return run_bias_compare(common, p0, eps, bias_grid);
    if (dump->parsed()) return run_dump_path(common, sim_args, replication);
  } catch (const lb::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 1;
  } catch (const lb::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const lb::ConfigError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const lb::RangeError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const lb::PreconditionError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const lb::DomainError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const lb::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const lb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
