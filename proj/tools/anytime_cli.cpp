// Experiment runner: run, sweep, ratefit and bounds subcommands.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "anytime/errors.hpp"
#include "anytime/harness.hpp"

namespace {

using namespace anytime;

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

// Raw flag values; turned into an ExperimentConfig after parsing.
struct Flags {
  std::string algo = "anytime";
  std::string learner;
  std::string schedule;
  std::string problem = "quadratic";
  int dim = 10;
  double spectrum_lo = 0.1;
  double spectrum_hi = 1.0;
  std::optional<double> xstar_norm;
  Round T = 1000;
  double sigma = 0.0;
  std::string noise;
  double B = 4.0;
  std::optional<double> mu_surrogate;
  double c = 2.0;
  std::string seeds = "0";
  std::uint64_t problem_seed = 0;
  int samples = 200;
  double ridge = 0.1;
  std::string out;
  Round log_every = 0;
  int grid_density = 8;
  double tail_frac = 0.5;
  double delta = 0.05;
  std::string config;  // consumed by expand_config
};

void add_experiment_flags(CLI::App* app, Flags& f) {
  // Repeated flags keep the last value, so flags given after the expanded
  // config file entries win.
  app->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app->add_option("--config", f.config,
                  "flat key=value file with the same keys as the flags; flags override it");
  app->add_option("--algo", f.algo, "classic | anytime | general-sc | optimistic | accelerated")
      ->capture_default_str();
  app->add_option("--learner", f.learner,
                  "adaptive-ogd | optimistic-ogd | ftl-sc (default: the one --algo needs)");
  app->add_option("--schedule", f.schedule,
                  "constant | linear | poly:k (default: linear for optimistic/accelerated/"
                  "general-sc, else constant)");
  app->add_option("--problem", f.problem, "quadratic | logistic | absdev")->capture_default_str();
  app->add_option("--dim", f.dim, "dimension")->capture_default_str();
  app->add_option("--spectrum-lo", f.spectrum_lo, "smallest quadratic eigenvalue")
      ->capture_default_str();
  app->add_option("--spectrum-hi", f.spectrum_hi, "largest quadratic eigenvalue")
      ->capture_default_str();
  app->add_option("--xstar-norm", f.xstar_norm, "||x*|| (default B/4)");
  app->add_option("--T", f.T, "rounds")->capture_default_str();
  app->add_option("--sigma", f.sigma, "noise level, E||zeta||^2 = sigma^2")->capture_default_str();
  app->add_option("--noise", f.noise,
                  "none | gaussian | sphere (default: sphere if sigma > 0, else none)");
  app->add_option("--B", f.B, "domain diameter (origin-centered ball of radius B/2)")
      ->capture_default_str();
  app->add_option("--mu-surrogate", f.mu_surrogate,
                  "surrogate curvature for general-sc (default: the problem's mu)");
  app->add_option("--c", f.c, "accelerated step-size constant")->capture_default_str();
  app->add_option("--seed,--seeds", f.seeds, "seed, list (0,3,7) or range (0-99)")
      ->capture_default_str();
  app->add_option("--problem-seed", f.problem_seed, "seed of the problem instance")
      ->capture_default_str();
  app->add_option("--samples", f.samples, "logistic sample count")->capture_default_str();
  app->add_option("--ridge", f.ridge, "logistic ridge")->capture_default_str();
  app->add_option("--log-every", f.log_every, "log every k-th round (0: geometric grid)")
      ->capture_default_str();
  app->add_option("--grid-density", f.grid_density, "geometric grid points per doubling")
      ->capture_default_str();
  app->add_option("--tail-frac", f.tail_frac, "rate-fit tail fraction")->capture_default_str();
  app->add_option("--delta", f.delta, "failure probability of the high-probability bound")
      ->capture_default_str();
}

ExperimentConfig to_config(const Flags& f) {
  ExperimentConfig cfg;
  cfg.algo = parse_algorithm(f.algo);
  if (!f.learner.empty()) {
    cfg.learner = f.learner;
  } else {
    cfg.learner = cfg.algo == Algorithm::kOptimistic  ? "optimistic-ogd"
                  : cfg.algo == Algorithm::kGeneralSc ? "ftl-sc"
                                                      : "adaptive-ogd";
  }
  std::string schedule = f.schedule;
  if (schedule.empty()) {
    const bool linear = cfg.algo == Algorithm::kOptimistic ||
                        cfg.algo == Algorithm::kAccelerated || cfg.algo == Algorithm::kGeneralSc;
    schedule = linear ? "linear" : "constant";
  }
  try {
    cfg.schedule = WeightSchedule::parse(schedule);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  cfg.problem.kind = f.problem;
  cfg.problem.dim = f.dim;
  cfg.problem.spectrum_lo = f.spectrum_lo;
  cfg.problem.spectrum_hi = f.spectrum_hi;
  cfg.problem.xstar_norm = f.xstar_norm;
  cfg.problem.B = f.B;
  cfg.problem.noise = f.noise.empty() ? (f.sigma > 0.0 ? "sphere" : "none") : f.noise;
  cfg.problem.sigma = f.sigma;
  cfg.problem.problem_seed = f.problem_seed;
  cfg.problem.samples = f.samples;
  cfg.problem.ridge = f.ridge;
  cfg.T = f.T;
  cfg.seeds = parse_seed_list(f.seeds);
  cfg.c = f.c;
  cfg.mu_surrogate = f.mu_surrogate;
  cfg.out = f.out;
  cfg.log_every = f.log_every;
  cfg.grid_density = f.grid_density;
  cfg.tail_frac = f.tail_frac;
  cfg.delta = f.delta;
  cfg.validate();
  return cfg;
}

// out.csv -> out.seed7.csv when several seeds share one --out.
std::string per_seed_path(const std::string& out, std::uint64_t seed) {
  const std::filesystem::path p(out);
  std::filesystem::path q = p.parent_path() / p.stem();
  q += ".seed" + std::to_string(seed) + p.extension().string();
  return q.string();
}

void print_summary(const RunResult& r, const ExperimentConfig& cfg) {
  std::cerr << "seed " << r.seed << ": " << r.diagnostics.rounds_completed << " rounds";
  if (!r.rows.empty()) {
    std::cerr << ", final subopt " << format_double(r.rows.back().primary_subopt());
    try {
      const RateFit fit = fit_rate(r.rows, cfg.tail_frac);
      std::cerr << ", tail slope " << format_double(fit.slope);
    } catch (const AnalysisError&) {
    }
  }
  std::cerr << '\n';
}

int cmd_run(const Flags& f) {
  const ExperimentConfig cfg = to_config(f);
  if (cfg.out.empty() && cfg.seeds.size() > 1) {
    throw ConfigError("several seeds need --out (one file per seed)");
  }
  const auto results = run_experiment(cfg);
  int rc = 0;
  for (const auto& r : results) {
    if (cfg.out.empty()) {
      write_trajectory_csv(std::cout, r.rows);
    } else {
      const std::string path =
          cfg.seeds.size() > 1 ? per_seed_path(cfg.out, r.seed) : cfg.out;
      write_trajectory_csv(path, r.rows);
      print_summary(r, cfg);
    }
    if (r.aborted) {
      std::cerr << "seed " << r.seed << " aborted at " << r.abort_reason << '\n';
      rc = kExitData;
    }
  }
  return rc;
}

int cmd_sweep(const Flags& f) {
  const ExperimentConfig cfg = to_config(f);
  if (cfg.seeds.size() < 2) throw ConfigError("sweep needs at least two seeds");
  const auto results = run_experiment(cfg);
  const auto rows = aggregate(results);
  if (cfg.out.empty()) {
    write_aggregate_csv(std::cout, rows);
  } else {
    write_aggregate_csv(cfg.out, rows);
  }
  int rc = 0;
  for (const auto& r : results) {
    if (r.aborted) {
      std::cerr << "seed " << r.seed << " aborted at " << r.abort_reason << '\n';
      rc = kExitData;
    }
  }
  return rc;
}

int cmd_ratefit(const std::string& in, std::string column, double tail_frac) {
  if (column.empty()) {
    // Trajectories: subopt_y when the file has it, else subopt_x. Aggregates: mean.
    std::ifstream is(in);
    std::string header;
    if (!is || !std::getline(is, header)) throw ConfigError("cannot read '" + in + "'");
    if (header.rfind("t,mean,", 0) == 0) {
      column = "mean";
    } else {
      column = read_csv_column(in, "subopt_y").empty() ? "subopt_x" : "subopt_y";
    }
  }
  const auto points = read_csv_column(in, column);
  const RateFit fit = fit_rate(points, tail_frac);
  std::cout << "column=" << column << '\n'
            << "slope=" << format_double(fit.slope) << '\n'
            << "intercept=" << format_double(fit.intercept) << '\n'
            << "r_squared=" << format_double(fit.r_squared) << '\n'
            << "tail_fraction=" << format_double(fit.tail_fraction) << '\n'
            << "n_points=" << fit.n_points << '\n';
  return 0;
}

int cmd_bounds(const Flags& f, std::optional<double> regret) {
  ExperimentConfig cfg = to_config(f);
  const Problem problem = build_problem(cfg.problem);
  const Objective& obj = *problem.objective;
  const double B = problem.domain.diameter();
  const Round T = cfg.T;
  if (T == 0) throw ConfigError("bounds need --T >= 1");
  auto line = [](const char* key, double v) { std::cout << key << '=' << format_double(v) << '\n'; };

  line("B", B);
  if (obj.smoothness()) line("L", *obj.smoothness());
  if (obj.strong_convexity()) line("mu", *obj.strong_convexity());
  line("sigma", problem.noise.sigma);
  std::optional<double> G;
  if (problem.noise.almost_sure_bound()) {
    G = gradient_bound(obj, problem.domain, problem.noise);
    line("G", *G);
  }
  line("regret_log_factor", weighted_regret_log_factor(cfg.schedule, T));
  if (G) {
    // Without --regret, the anytime bound uses the adaptive learner's worst case
    // B sqrt(2 sum ||alpha_t g_t||^2) <= B G sqrt(2 sum alpha_t^2).
    const double R = regret.value_or(B * *G * std::sqrt(2.0 * sum_sq_weights(cfg.schedule, T)));
    line("anytime_high_probability", anytime_high_probability_bound(R, B, *G, cfg.schedule, T,
                                                                    cfg.delta));
    const double mu = cfg.mu_surrogate.value_or(obj.strong_convexity().value_or(0.0));
    if (mu > 0.0) {
      line("strongly_convex_unit_weights", strongly_convex_unit_weight_bound(mu, B, *G, T));
      line("strongly_convex_linear_weights", strongly_convex_linear_weight_bound(mu, B, *G, T));
    }
  }
  if (obj.smoothness()) {
    line("optimistic", optimistic_rate_bound(*obj.smoothness(), B, problem.noise.sigma, T));
    if (G) {
      line("accelerated",
           accelerated_rate_bound(B, *obj.smoothness(), *G, problem.noise.sigma, T));
    }
  }
  return 0;
}

// Replaces "--config FILE" (or --config=FILE) with the file's entries as
// "--key value" pairs placed right after the subcommand, ahead of every
// explicit flag.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::vector<std::string> rest;
  std::optional<std::string> path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  std::vector<std::string> out{args[0]};
  if (!path || rest.empty()) {
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
  }
  out.push_back(rest.front());  // subcommand
  for (const auto& [key, value] : read_config_file(*path)) {
    out.push_back("--" + key);
    out.push_back(value);
  }
  out.insert(out.end(), rest.begin() + 1, rest.end());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anytime online-to-batch conversions: experiments, rate fits and bounds"};
  app.require_subcommand(1);

  Flags run_flags, sweep_flags, bounds_flags;
  auto* run = app.add_subcommand("run", "run one conversion per seed, write trajectory CSVs");
  add_experiment_flags(run, run_flags);
  run->add_option("--out", run_flags.out, "trajectory CSV (per-seed suffix when several seeds)");

  auto* sweep = app.add_subcommand("sweep", "run many seeds, write per-t mean/median/p95");
  add_experiment_flags(sweep, sweep_flags);
  sweep->add_option("--out", sweep_flags.out, "aggregate CSV (default stdout)");

  std::string in, column;
  double fit_tail = 0.5;
  auto* ratefit = app.add_subcommand("ratefit", "fit log-log slope of a CSV column");
  ratefit->add_option("--in", in, "trajectory or aggregate CSV")->required();
  ratefit->add_option("--column", column, "column to fit (default: primary suboptimality)");
  ratefit->add_option("--tail-frac", fit_tail, "fraction of the log-t range to fit")
      ->capture_default_str();

  std::optional<double> regret;
  auto* bounds = app.add_subcommand("bounds", "evaluate the closed-form bounds for a config");
  add_experiment_flags(bounds, bounds_flags);
  bounds->add_option("--regret", regret, "measured regret for the anytime high-probability bound");

  try {
    std::vector<std::string> args;
    try {
      args = expand_config(argc, argv);
    } catch (const ConfigError& e) {
      std::cerr << "configuration error: " << e.what() << '\n';
      return kExitConfig;
    }
    // CLI11 wants the arguments reversed, without the program name.
    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return cmd_run(run_flags);
    if (*sweep) return cmd_sweep(sweep_flags);
    if (*ratefit) return cmd_ratefit(in, column, fit_tail);
    if (*bounds) return cmd_bounds(bounds_flags, regret);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const AnalysisError& e) {
    std::cerr << "analysis error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
