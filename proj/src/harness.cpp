#include "anytime/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "anytime/errors.hpp"
#include "anytime/learners.hpp"

namespace anytime {

Algorithm parse_algorithm(const std::string& name) {
  if (name == "classic") return Algorithm::kClassic;
  if (name == "anytime") return Algorithm::kAnytime;
  if (name == "general-sc") return Algorithm::kGeneralSc;
  if (name == "optimistic") return Algorithm::kOptimistic;
  if (name == "accelerated") return Algorithm::kAccelerated;
  throw ConfigError("unknown algorithm '" + name +
                    "' (expected classic, anytime, general-sc, optimistic or accelerated)");
}

std::string algorithm_name(Algorithm algo) {
  switch (algo) {
    case Algorithm::kClassic:
      return "classic";
    case Algorithm::kAnytime:
      return "anytime";
    case Algorithm::kGeneralSc:
      return "general-sc";
    case Algorithm::kOptimistic:
      return "optimistic";
    case Algorithm::kAccelerated:
      return "accelerated";
  }
  return "?";
}

Problem build_problem(const ProblemSpec& spec) {
  if (spec.dim < 1) throw ConfigError("problem dimension must be >= 1");
  if (!(spec.B > 0.0) || !std::isfinite(spec.B)) throw ConfigError("B must be positive");
  if (!(spec.sigma >= 0.0) || !std::isfinite(spec.sigma)) throw ConfigError("sigma must be >= 0");
  const double radius = spec.B / 2.0;
  const double xnorm = spec.xstar_norm.value_or(spec.B / 4.0);
  if (!(xnorm >= 0.0) || xnorm > radius) {
    throw ConfigError("||x*|| must lie in [0, B/2] so that x* is in the domain");
  }
  Philox rng = Philox::for_purpose(spec.problem_seed, "problem");
  Domain domain = Domain::centered_ball(spec.dim, radius);
  NoiseModel noise;
  try {
    noise = NoiseModel::parse(spec.noise, spec.sigma);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  std::shared_ptr<const Objective> objective;
  if (spec.kind == "quadratic") {
    if (!(spec.spectrum_lo >= 0.0) || !(spec.spectrum_hi >= spec.spectrum_lo) ||
        !(spec.spectrum_hi > 0.0)) {
      throw ConfigError("quadratic spectrum needs 0 <= lo <= hi, hi > 0");
    }
    const Vector x_star = xnorm * rng.unit_sphere(spec.dim);
    objective = std::make_shared<const Objective>(make_quadratic(
        linear_spectrum(spec.dim, spec.spectrum_lo, spec.spectrum_hi), x_star, rng));
  } else if (spec.kind == "absdev") {
    objective = std::make_shared<const Objective>(
        Objective::abs_deviation(xnorm * rng.unit_sphere(spec.dim)));
  } else if (spec.kind == "logistic") {
    if (spec.samples < 1 || !(spec.ridge > 0.0)) {
      throw ConfigError("logistic problem needs samples >= 1 and ridge > 0");
    }
    objective =
        std::make_shared<const Objective>(make_logistic(spec.samples, spec.dim, spec.ridge, rng));
  } else {
    throw ConfigError("unknown problem '" + spec.kind +
                      "' (expected quadratic, logistic or absdev)");
  }
  return Problem{std::move(objective), std::move(domain), noise};
}

void ExperimentConfig::validate() const {
  make_learner(learner);  // throws on unknown names
  const std::string a = algorithm_name(algo);
  auto need = [&](const char* expected) {
    if (learner != expected) {
      throw ConfigError("algorithm '" + a + "' requires learner '" + expected + "', got '" +
                        learner + "'");
    }
  };
  switch (algo) {
    case Algorithm::kClassic:
    case Algorithm::kAnytime:
      need("adaptive-ogd");
      break;
    case Algorithm::kOptimistic:
      need("optimistic-ogd");
      break;
    case Algorithm::kGeneralSc:
      need("ftl-sc");
      if (mu_surrogate && !(*mu_surrogate > 0.0)) {
        throw ConfigError("general-sc needs --mu-surrogate > 0");
      }
      break;
    case Algorithm::kAccelerated:
      need("adaptive-ogd");
      if (schedule.kind() != WeightSchedule::Kind::kLinear) {
        throw ConfigError("algorithm 'accelerated' fixes alpha_t = t; use --schedule linear");
      }
      if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("--c must be > 0");
      break;
  }
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  if (!(tail_frac > 0.0 && tail_frac <= 1.0)) throw ConfigError("--tail-frac must be in (0, 1]");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("--delta must be in (0, 1)");
  if (grid_density < 1) throw ConfigError("grid density must be >= 1");
  if (problem.dim < 1) throw ConfigError("--dim must be >= 1");
  if (!(problem.B > 0.0)) throw ConfigError("--B must be > 0");
  if (!(problem.sigma >= 0.0)) throw ConfigError("--sigma must be >= 0");
}

std::vector<Round> logging_grid(Round T, Round log_every, int density) {
  std::vector<Round> grid;
  if (T == 0) return grid;
  if (log_every > 0) {
    grid.push_back(1);
    for (Round t = log_every; t <= T; t += log_every) {
      if (t > grid.back()) grid.push_back(t);
    }
  } else {
    if (density < 1) throw std::invalid_argument("grid density must be >= 1");
    for (int k = 0;; ++k) {
      const auto t = static_cast<Round>(std::llround(std::exp2(static_cast<double>(k) / density)));
      if (t > T) break;
      if (grid.empty() || t > grid.back()) grid.push_back(t);
    }
  }
  if (grid.back() != T) grid.push_back(T);
  return grid;
}

namespace {

double identity_error(const Vector& x_prev, const Vector& x, const Vector& w, double alpha,
                      double cum_prev, double cum) {
  const Vector residual = alpha * (x - w) - cum_prev * (x_prev - x);
  const double scale = cum * std::max({x_prev.norm(), x.norm(), w.norm()});
  if (scale == 0.0) return residual.norm() == 0.0 ? 0.0 : INFINITY;
  return residual.norm() / scale;
}

}  // namespace

RunResult run_single(const ExperimentConfig& config, const Problem& problem, std::uint64_t seed,
                     const StepObserver& observer) {
  config.validate();
  const Objective& obj = *problem.objective;
  const double B = problem.domain.diameter();
  const auto L = obj.smoothness();
  const auto noise_bound = problem.noise.almost_sure_bound();
  // Gradient bound for the rate formulas; only exists for bounded noise.
  const bool has_G = noise_bound.has_value();
  const double G_domain = has_G ? gradient_bound(obj, problem.domain, problem.noise) : 0.0;

  std::shared_ptr<OnlineLearner> learner = make_learner(config.learner);
  learner->init(problem.domain);
  StochasticOracle oracle(problem.objective, problem.noise, Philox::for_purpose(seed, "noise"));
  const GradientOracle gradient_oracle = [&oracle](const Vector& x) { return oracle(x); };

  double mu = 0.0;
  std::unique_ptr<Conversion> conversion;
  std::function<StepRecord()> step;
  switch (config.algo) {
    case Algorithm::kClassic: {
      auto c = std::make_unique<ClassicConverter>(learner, config.schedule);
      step = [p = c.get(), &gradient_oracle] { return p->step(gradient_oracle); };
      conversion = std::move(c);
      break;
    }
    case Algorithm::kAnytime: {
      auto c = std::make_unique<AnytimeConverter>(learner, config.schedule);
      step = [p = c.get(), &gradient_oracle] { return p->step(gradient_oracle); };
      conversion = std::move(c);
      break;
    }
    case Algorithm::kGeneralSc: {
      mu = config.mu_surrogate.value_or(obj.strong_convexity().value_or(0.0));
      if (!(mu > 0.0)) {
        throw ConfigError("general-sc needs a strongly convex problem or --mu-surrogate > 0");
      }
      auto c = std::make_unique<GeneralAnytimeConverter>(learner, config.schedule);
      step = [p = c.get(), &oracle, mu] {
        return p->step([&oracle, mu](const Vector& x) { return SurrogateReport{oracle(x), mu}; });
      };
      conversion = std::move(c);
      break;
    }
    case Algorithm::kOptimistic: {
      auto c = std::make_unique<OptimisticConverter>(learner, config.schedule);
      step = [p = c.get(), &gradient_oracle] { return p->step(gradient_oracle); };
      conversion = std::move(c);
      break;
    }
    case Algorithm::kAccelerated: {
      auto c = std::make_unique<AcceleratedConverter>(learner, config.c);
      step = [p = c.get(), &gradient_oracle] { return p->step(gradient_oracle); };
      conversion = std::move(c);
      break;
    }
  }

  const bool averaging = config.algo == Algorithm::kAnytime ||
                         config.algo == Algorithm::kGeneralSc ||
                         config.algo == Algorithm::kOptimistic;
  const std::vector<Round> grid = logging_grid(config.T, config.log_every, config.grid_density);
  std::size_t next_log = 0;

  RunResult result;
  result.seed = seed;
  result.rows.reserve(grid.size());
  RunDiagnostics& diag = result.diagnostics;
  Vector x_prev;
  double cum_prev = 0.0;

  for (Round t = 1; t <= config.T; ++t) {
    StepRecord rec;
    try {
      rec = step();
    } catch (const DataError& e) {
      result.aborted = true;
      result.abort_reason = "round " + std::to_string(t) + ": " + e.what();
      break;
    }
    if (observer) observer(rec);

    diag.max_oracle_grad_norm = std::max(diag.max_oracle_grad_norm, rec.report.g.norm());
    if (averaging && t > 1) {
      diag.max_identity_error =
          std::max(diag.max_identity_error,
                   identity_error(x_prev, rec.x, rec.w, rec.alpha, cum_prev, rec.alpha_cum));
    }
    x_prev = rec.x;
    cum_prev = rec.alpha_cum;

    const bool log_now = next_log < grid.size() && grid[next_log] == t;
    const bool need_regret = log_now || config.algo == Algorithm::kAnytime;
    if (!log_now && !need_regret) continue;

    const Vector& x_point = config.algo == Algorithm::kAccelerated ? rec.x : rec.output;
    TrajectoryRecord row;
    row.t = t;
    row.alpha = rec.alpha;
    row.alpha_cum = rec.alpha_cum;
    row.subopt_x = obj.suboptimality(x_point);
    if (rec.y) row.subopt_y = obj.suboptimality(*rec.y);
    row.grad_norm_true = rec.report.true_grad_norm;
    row.measured_regret = learner->ledger().regret_against(obj.x_star());
    if (!std::isfinite(row.subopt_x) || (row.subopt_y && !std::isfinite(*row.subopt_y)) ||
        !std::isfinite(row.measured_regret)) {
      result.aborted = true;
      result.abort_reason = "round " + std::to_string(t) + ": non-finite loss";
      break;
    }
    if (config.algo == Algorithm::kAnytime) {
      diag.max_anytime_bound_violation =
          std::max(diag.max_anytime_bound_violation,
                   row.subopt_x - row.measured_regret / row.alpha_cum);
    }
    if (!log_now) continue;
    ++next_log;

    switch (config.algo) {
      case Algorithm::kClassic:
      case Algorithm::kAnytime:
        row.bound = row.measured_regret / row.alpha_cum;
        break;
      case Algorithm::kGeneralSc:
        if (has_G) {
          if (config.schedule.kind() == WeightSchedule::Kind::kConstant) {
            row.bound = strongly_convex_unit_weight_bound(mu, B, G_domain, t);
          } else if (config.schedule.kind() == WeightSchedule::Kind::kLinear) {
            row.bound = strongly_convex_linear_weight_bound(mu, B, G_domain, t);
          }
        }
        break;
      case Algorithm::kOptimistic:
        if (L) row.bound = optimistic_rate_bound(*L, B, problem.noise.sigma, t);
        break;
      case Algorithm::kAccelerated:
        if (L && has_G) {
          const double G = std::max(G_domain, diag.max_oracle_grad_norm);
          row.bound = accelerated_rate_bound(B, *L, G, problem.noise.sigma, t);
        }
        break;
    }
    result.rows.push_back(row);
  }

  diag.rounds_completed = conversion->round();
  diag.final_measured_regret =
      diag.rounds_completed > 0 ? learner->ledger().regret_against(obj.x_star()) : 0.0;
  diag.learner_regret_bound = learner->regret_bound();
  diag.alpha_cum = conversion->cumulative_weight();
  diag.sum_sq_weights = conversion->sum_sq_weights();
  if (const auto* acc = dynamic_cast<const AcceleratedConverter*>(conversion.get())) {
    diag.step_size_sums = acc->step_size_sums();
  }
  return result;
}

std::vector<RunResult> run_experiment(const ExperimentConfig& config) {
  config.validate();
  const Problem problem = build_problem(config.problem);
  std::vector<RunResult> results(config.seeds.size());
  const std::size_t workers = std::max<std::size_t>(
      1, std::min<std::size_t>(std::thread::hardware_concurrency(), config.seeds.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (std::size_t i = next++; i < config.seeds.size(); i = next++) {
      try {
        results[i] = run_single(config, problem, config.seeds[i]);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t k = 0; k < workers; ++k) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

// ---------------------------------------------------------------------------

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_trajectory_csv(std::ostream& os, std::span<const TrajectoryRecord> rows) {
  os << kTrajectoryHeader << '\n';
  for (const auto& r : rows) {
    os << r.t << ',' << format_double(r.alpha) << ',' << format_double(r.alpha_cum) << ','
       << format_double(r.subopt_x) << ',' << (r.subopt_y ? format_double(*r.subopt_y) : "")
       << ',' << format_double(r.grad_norm_true) << ',' << format_double(r.measured_regret)
       << ',' << (r.bound ? format_double(*r.bound) : "") << '\n';
  }
}

void write_trajectory_csv(const std::string& path, std::span<const TrajectoryRecord> rows) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write '" + path + "'");
  write_trajectory_csv(os, rows);
  if (!os) throw ConfigError("failed writing '" + path + "'");
}

namespace {

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& s, const std::string& where) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw DataError("bad number '" + s + "' in " + where);
  }
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<std::pair<Round, double>> read_csv_column(const std::string& path,
                                                      const std::string& column) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(is, line)) throw DataError("'" + path + "' is empty");
  const auto header = split_commas(trim(line));
  const auto find = [&](const std::string& name) -> std::size_t {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ConfigError("'" + path + "' has no column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t t_col = find("t");
  const std::size_t v_col = find(column);
  std::vector<std::pair<Round, double>> out;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    const auto cells = split_commas(line);
    const std::string where = path + ":" + std::to_string(lineno);
    if (cells.size() != header.size()) throw DataError("wrong number of cells at " + where);
    if (cells[v_col].empty()) continue;
    const double t = parse_number(cells[t_col], where);
    if (!(t >= 1.0) || t != std::floor(t)) throw DataError("bad round index at " + where);
    out.emplace_back(static_cast<Round>(t), parse_number(cells[v_col], where));
  }
  return out;
}

// ---------------------------------------------------------------------------

RateFit fit_rate(std::span<const std::pair<Round, double>> points, double tail_fraction) {
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw std::invalid_argument("tail fraction must be in (0, 1]");
  }
  std::vector<std::pair<Round, double>> pos;
  for (const auto& [t, v] : points) {
    if (t >= 1 && v > 0.0 && std::isfinite(v)) pos.emplace_back(t, v);
  }
  std::sort(pos.begin(), pos.end());
  if (pos.empty()) throw AnalysisError("no positive suboptimality values to fit");
  const double lt_min = std::log(static_cast<double>(pos.front().first));
  const double lt_max = std::log(static_cast<double>(pos.back().first));
  const double cutoff = lt_max - tail_fraction * (lt_max - lt_min) - 1e-12;

  std::vector<double> xs, ys;
  for (const auto& [t, v] : pos) {
    const double lt = std::log(static_cast<double>(t));
    if (lt >= cutoff) {
      xs.push_back(lt);
      ys.push_back(std::log(v));
    }
  }
  if (xs.size() < 10) {
    throw AnalysisError("rate fit needs >= 10 positive points in the tail window, got " +
                        std::to_string(xs.size()));
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw AnalysisError("rate fit needs at least two distinct rounds");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  const double ss_res = std::max(0.0, syy - fit.slope * sxy);
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  fit.tail_fraction = tail_fraction;
  fit.n_points = xs.size();
  return fit;
}

RateFit fit_rate(std::span<const TrajectoryRecord> rows, double tail_fraction) {
  std::vector<std::pair<Round, double>> pts;
  pts.reserve(rows.size());
  for (const auto& r : rows) pts.emplace_back(r.t, r.primary_subopt());
  return fit_rate(pts, tail_fraction);
}

// ---------------------------------------------------------------------------

double sum_sq_weights(const WeightSchedule& schedule, Round T) {
  const double n = static_cast<double>(T);
  switch (schedule.kind()) {
    case WeightSchedule::Kind::kConstant:
      return n;
    case WeightSchedule::Kind::kLinear:
      return n * (n + 1.0) * (2.0 * n + 1.0) / 6.0;
    case WeightSchedule::Kind::kPolynomial: {
      CompensatedSum s;
      for (Round t = 1; t <= T; ++t) {
        const double a = schedule.weight(t);
        s.add(a * a);
      }
      return s.value();
    }
  }
  return n;
}

double anytime_high_probability_bound(double regret, double B, double G,
                                      const WeightSchedule& schedule, Round T, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must be in (0, 1)");
  if (T == 0) throw std::invalid_argument("T must be >= 1");
  const double spread = 2.0 * B * G * std::sqrt(sum_sq_weights(schedule, T) * std::log(2.0 / delta));
  return (regret + spread) / schedule.cumulative(T);
}

double strongly_convex_unit_weight_bound(double mu, double B, double G, Round T) {
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be > 0");
  if (T == 0) throw std::invalid_argument("T must be >= 1");
  const double lip = mu * B + G;
  const double n = static_cast<double>(T);
  return lip * lip * (std::log(n) + 1.0) / (2.0 * mu * n);
}

double strongly_convex_linear_weight_bound(double mu, double B, double G, Round T) {
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be > 0");
  if (T == 0) throw std::invalid_argument("T must be >= 1");
  const double lip = mu * B + G;
  return 2.0 * lip * lip / (mu * (static_cast<double>(T) + 1.0));
}

double optimistic_rate_bound(double L, double B, double sigma, Round T) {
  if (T == 0) throw std::invalid_argument("T must be >= 1");
  const double n = static_cast<double>(T);
  return 4.0 * std::sqrt(10.0) * (L * B * B / std::pow(n, 1.5) + sigma * B / std::sqrt(n));
}

double accelerated_rate_bound(double B, double L, double G, double sigma, Round T) {
  if (T == 0) throw std::invalid_argument("T must be >= 1");
  const double n = static_cast<double>(T);
  const double lg = std::log1p(G * G * n * n * n);
  return (4.0 * B + 8.0 * L * B * B * lg) / (n * n) + 4.0 * B * sigma * std::sqrt(lg) / std::sqrt(n);
}

double weighted_regret_log_factor(const WeightSchedule& schedule, Round T) {
  if (T == 0) throw std::invalid_argument("T must be >= 1");
  return 1.0 + std::log(schedule.cumulative(T) / schedule.weight(1));
}

// ---------------------------------------------------------------------------

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw AnalysisError("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile level must be in [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::vector<AggregateRow> aggregate(std::span<const RunResult> runs) {
  std::map<Round, std::vector<double>> by_t;
  for (const auto& run : runs) {
    for (const auto& row : run.rows) by_t[row.t].push_back(row.primary_subopt());
  }
  std::vector<AggregateRow> out;
  out.reserve(by_t.size());
  for (auto& [t, vals] : by_t) {
    AggregateRow r;
    r.t = t;
    r.n_seeds = vals.size();
    CompensatedSum s;
    for (double v : vals) s.add(v);
    r.mean = s.value() / static_cast<double>(vals.size());
    r.median = quantile(vals, 0.5);
    r.p95 = quantile(std::move(vals), 0.95);
    out.push_back(r);
  }
  return out;
}

void write_aggregate_csv(std::ostream& os, std::span<const AggregateRow> rows) {
  os << kAggregateHeader << '\n';
  for (const auto& r : rows) {
    os << r.t << ',' << format_double(r.mean) << ',' << format_double(r.median) << ','
       << format_double(r.p95) << ',' << r.n_seeds << '\n';
  }
}

void write_aggregate_csv(const std::string& path, std::span<const AggregateRow> rows) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write '" + path + "'");
  write_aggregate_csv(os, rows);
  if (!os) throw ConfigError("failed writing '" + path + "'");
}

// ---------------------------------------------------------------------------

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    if (key.empty()) throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
    out.emplace_back(key, trim(line.substr(eq + 1)));
  }
  return out;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  auto parse_one = [&](const std::string& s) -> std::uint64_t {
    std::uint64_t v = 0;
    const std::string t = trim(s);
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
      throw ConfigError("bad seed list '" + text + "'");
    }
    return v;
  };
  std::vector<std::uint64_t> seeds;
  std::istringstream is(text);
  std::string part;
  while (std::getline(is, part, ',')) {
    const auto dash = part.find('-');
    if (dash == std::string::npos) {
      seeds.push_back(parse_one(part));
      continue;
    }
    const std::uint64_t lo = parse_one(part.substr(0, dash));
    const std::uint64_t hi = parse_one(part.substr(dash + 1));
    if (hi < lo) throw ConfigError("bad seed range '" + part + "'");
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  if (seeds.empty()) throw ConfigError("empty seed list");
  return seeds;
}

}  // namespace anytime
