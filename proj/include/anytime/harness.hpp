#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "anytime/conversions.hpp"
#include "anytime/core.hpp"
#include "anytime/problems.hpp"

namespace anytime {

enum class Algorithm { kClassic, kAnytime, kGeneralSc, kOptimistic, kAccelerated };

Algorithm parse_algorithm(const std::string& name);
std::string algorithm_name(Algorithm algo);

/// What to optimize. Every run uses the origin-centered ball of diameter B as
/// the learner's domain.
struct ProblemSpec {
  std::string kind = "quadratic";  ///< quadratic | logistic | absdev
  int dim = 10;
  double spectrum_lo = 0.1;  ///< quadratic eigenvalues, evenly spaced
  double spectrum_hi = 1.0;
  std::optional<double> xstar_norm;  ///< ||x*|| for quadratic/absdev; default B/4
  double B = 4.0;
  std::string noise = "none";  ///< none | gaussian | sphere
  double sigma = 0.0;
  std::uint64_t problem_seed = 0;
  int samples = 200;    ///< logistic only
  double ridge = 0.1;   ///< logistic only
};

struct Problem {
  std::shared_ptr<const Objective> objective;
  Domain domain;
  NoiseModel noise;
};

/// Builds the objective from the problem stream of spec.problem_seed.
Problem build_problem(const ProblemSpec& spec);

struct ExperimentConfig {
  Algorithm algo = Algorithm::kAnytime;
  std::string learner = "adaptive-ogd";
  WeightSchedule schedule = WeightSchedule::constant();
  ProblemSpec problem;
  Round T = 1000;
  std::vector<std::uint64_t> seeds{0};
  double c = 2.0;                      ///< accelerated only
  std::optional<double> mu_surrogate;  ///< general-sc; defaults to the problem's mu
  std::string out;
  Round log_every = 0;   ///< 0: geometric grid
  int grid_density = 8;  ///< geometric grid points per doubling of t
  double tail_frac = 0.5;
  double delta = 0.05;

  /// Throws ConfigError naming the offending combination.
  void validate() const;
};

/// One logged round.
struct TrajectoryRecord {
  Round t = 0;
  double alpha = 0.0;
  double alpha_cum = 0.0;
  double subopt_x = 0.0;
  std::optional<double> subopt_y;
  double grad_norm_true = 0.0;
  double measured_regret = 0.0;
  std::optional<double> bound;

  /// subopt_y when present (the accelerated conversion's guaranteed output),
  /// subopt_x otherwise.
  double primary_subopt() const { return subopt_y ? *subopt_y : subopt_x; }
};

/// Per-run quantities evaluated at every round, not only logged ones.
struct RunDiagnostics {
  /// max_t ||alpha_t (x_t - w_t) - alpha_{1:t-1} (x_{t-1} - x_t)|| / scale_t with
  /// scale_t = alpha_{1:t} max(||x_{t-1}||, ||x_t||, ||w_t||). Averaging conversions only.
  double max_identity_error = 0.0;
  /// max_t of subopt(x_t) - regret_t / alpha_{1:t} (anytime conversion only).
  double max_anytime_bound_violation = -1e300;
  double final_measured_regret = 0.0;
  std::optional<double> learner_regret_bound;
  double alpha_cum = 0.0;
  double sum_sq_weights = 0.0;
  double max_oracle_grad_norm = 0.0;
  /// Accelerated conversion only.
  std::optional<AcceleratedConverter::StepSizeSums> step_size_sums;
  Round rounds_completed = 0;
};

struct RunResult {
  std::uint64_t seed = 0;
  std::vector<TrajectoryRecord> rows;
  RunDiagnostics diagnostics;
  bool aborted = false;
  std::string abort_reason;
};

using StepObserver = std::function<void(const StepRecord&)>;

/// Rounds at which a trajectory is logged: geometric (density points per
/// doubling, starting at 1) when log_every == 0, else every log_every-th round;
/// always including 1 and T.
std::vector<Round> logging_grid(Round T, Round log_every, int density);

/// Runs one seed of the configured conversion. Deterministic in (config, seed).
/// A non-finite oracle answer or loss ends the run early with aborted = true.
RunResult run_single(const ExperimentConfig& config, const Problem& problem,
                     std::uint64_t seed, const StepObserver& observer = {});

/// Runs every seed (in parallel) and returns results in seed order.
std::vector<RunResult> run_experiment(const ExperimentConfig& config);

// --- trajectory files ------------------------------------------------------

inline constexpr const char* kTrajectoryHeader =
    "t,alpha,alpha_cum,subopt_x,subopt_y,grad_norm_true,measured_regret,bound";
inline constexpr const char* kAggregateHeader = "t,mean,median,p95,n_seeds";

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

void write_trajectory_csv(std::ostream& os, std::span<const TrajectoryRecord> rows);
void write_trajectory_csv(const std::string& path, std::span<const TrajectoryRecord> rows);

/// Reads (t, value) pairs of one named column from any CSV with a header
/// line. Empty cells are skipped.
std::vector<std::pair<Round, double>> read_csv_column(const std::string& path,
                                                      const std::string& column);

// --- rate fitting ----------------------------------------------------------

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double tail_fraction = 0.5;
  std::size_t n_points = 0;
};

/// Least-squares line through (log t, log value) over the points with value > 0
/// whose log t lies in the last tail_fraction of their log-t range. Throws
/// AnalysisError with fewer than 10 such points.
RateFit fit_rate(std::span<const std::pair<Round, double>> points, double tail_fraction = 0.5);
RateFit fit_rate(std::span<const TrajectoryRecord> rows, double tail_fraction = 0.5);

// --- closed-form bounds ----------------------------------------------------

/// sum_{t<=T} alpha_t^2.
double sum_sq_weights(const WeightSchedule& schedule, Round T);

/// (R + 2 B G sqrt(sum alpha_t^2 log(2/delta))) / alpha_{1:T}: the
/// high-probability last-iterate bound of the anytime conversion.
double anytime_high_probability_bound(double regret, double B, double G,
                                      const WeightSchedule& schedule, Round T, double delta);
/// (mu B + G)^2 (log T + 1) / (2 mu T): strongly convex rate with alpha_t = 1.
double strongly_convex_unit_weight_bound(double mu, double B, double G, Round T);
/// 2 (mu B + G)^2 / (mu (T + 1)): strongly convex rate with alpha_t = t.
double strongly_convex_linear_weight_bound(double mu, double B, double G, Round T);
/// 4 sqrt(10) (L B^2 / T^{3/2} + sigma B / sqrt(T)): optimistic conversion rate.
double optimistic_rate_bound(double L, double B, double sigma, Round T);
/// (4B + 8 L B^2 log(1 + G^2 T^3)) / T^2 + 4 B sigma sqrt(log(1 + G^2 T^3)) / sqrt(T).
double accelerated_rate_bound(double B, double L, double G, double sigma, Round T);
/// 1 + log(alpha_{1:T} / alpha_1): regret inflation of the conversion's own iterates.
double weighted_regret_log_factor(const WeightSchedule& schedule, Round T);

// --- sweeps ----------------------------------------------------------------

struct AggregateRow {
  Round t = 0;
  double mean = 0.0;
  double median = 0.0;
  double p95 = 0.0;
  std::size_t n_seeds = 0;
};

/// Linear-interpolation quantile (q in [0, 1]) of an unsorted sample.
double quantile(std::vector<double> values, double q);

/// Per logged t, statistics of primary_subopt across the runs that reached t.
std::vector<AggregateRow> aggregate(std::span<const RunResult> runs);

void write_aggregate_csv(std::ostream& os, std::span<const AggregateRow> rows);
void write_aggregate_csv(const std::string& path, std::span<const AggregateRow> rows);

// --- config files ----------------------------------------------------------

/// Parses a flat "key = value" file ('#' starts a comment, blank lines ignored,
/// a leading "--" on keys is dropped). Throws ConfigError on malformed lines.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

/// Parses a seed list: "3", "0,1,5" or a range "0-99".
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

}  // namespace anytime
