// Desk-scale acceptance suite. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "anytime/errors.hpp"
#include "anytime/harness.hpp"
#include "anytime/learners.hpp"
#include "anytime/problems.hpp"
#include "anytime/rng.hpp"

using namespace anytime;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// Suite-wide trackers fed by every run below.
double g_worst_identity = 0.0;   // averaging conversions
double g_worst_step_sum = -INFINITY;  // accelerated conversions, max over rounds of lhs - rhs
int g_averaging_runs = 0;
int g_accelerated_runs = 0;

// Checks both step-size sum inequalities after every accelerated round, from
// the raw (alpha_{1:t}, g_t, eta_t) stream rather than the converter's sums.
struct StepSumChecker {
  double c, B;
  double weighted = 0.0, with_eta = 0.0, with_eta_sq = 0.0;
  void operator()(const StepRecord& rec) {
    const double term = rec.alpha_cum * rec.report.g.squaredNorm();
    weighted += term;
    with_eta += term * rec.eta;
    with_eta_sq += term * rec.eta * rec.eta;
    g_worst_step_sum = std::max(g_worst_step_sum,
                                with_eta - 2.0 * c * B * std::sqrt(1.0 + weighted));
    g_worst_step_sum = std::max(g_worst_step_sum,
                                with_eta_sq - c * c * B * B * std::log1p(weighted));
  }
};

RunResult run_tracked(const ExperimentConfig& cfg, const Problem& problem, std::uint64_t seed) {
  RunResult r;
  if (cfg.algo == Algorithm::kAccelerated) {
    StepSumChecker check{cfg.c, problem.domain.diameter()};
    r = run_single(cfg, problem, seed, std::ref(check));
    ++g_accelerated_runs;
  } else {
    r = run_single(cfg, problem, seed);
  }
  if (cfg.algo == Algorithm::kAnytime || cfg.algo == Algorithm::kGeneralSc ||
      cfg.algo == Algorithm::kOptimistic) {
    g_worst_identity = std::max(g_worst_identity, r.diagnostics.max_identity_error);
    ++g_averaging_runs;
  }
  if (r.aborted) throw DataError("run aborted: " + r.abort_reason);
  return r;
}

std::vector<RunResult> run_seeds(const ExperimentConfig& cfg, int n_seeds) {
  const Problem p = build_problem(cfg.problem);
  std::vector<RunResult> out;
  for (int s = 0; s < n_seeds; ++s) out.push_back(run_tracked(cfg, p, static_cast<std::uint64_t>(s)));
  return out;
}

ExperimentConfig base_config(Algorithm algo, Round T) {
  ExperimentConfig cfg;
  cfg.algo = algo;
  cfg.learner = algo == Algorithm::kOptimistic  ? "optimistic-ogd"
                : algo == Algorithm::kGeneralSc ? "ftl-sc"
                                                : "adaptive-ogd";
  cfg.schedule = (algo == Algorithm::kOptimistic || algo == Algorithm::kAccelerated)
                     ? WeightSchedule::linear()
                     : WeightSchedule::constant();
  cfg.T = T;
  cfg.problem.kind = "quadratic";
  cfg.problem.dim = 10;
  cfg.problem.spectrum_lo = 0.1;
  cfg.problem.spectrum_hi = 1.0;
  cfg.problem.B = 4.0;
  return cfg;
}

double mean_final(const std::vector<RunResult>& runs) {
  double s = 0.0;
  for (const auto& r : runs) s += r.rows.back().primary_subopt();
  return s / static_cast<double>(runs.size());
}

// ---------------------------------------------------------------------------

Verdict anytime_pathwise() {
  const auto cfg = base_config(Algorithm::kAnytime, 10000);
  const auto runs = run_seeds(cfg, 1);
  double worst_logged = -INFINITY;
  for (const auto& row : runs[0].rows) {
    worst_logged = std::max(worst_logged, row.subopt_x - row.measured_regret / row.alpha_cum);
  }
  const double worst_all = runs[0].diagnostics.max_anytime_bound_violation;
  return {worst_logged <= 1e-8 && worst_all <= 1e-8,
          "max subopt - regret/alpha_cum: logged rounds " + fmt(worst_logged) + ", all rounds " +
              fmt(worst_all) + " (<= 1e-8)"};
}

Verdict learner_regret() {
  Philox rng(2025);
  double worst[2] = {-INFINITY, -INFINITY};
  for (int kind = 0; kind < 2; ++kind) {
    for (int seq = 0; seq < 20; ++seq) {
      const Eigen::Index d = 5;
      const Domain dom = seq % 2 ? Domain::centered_ball(d, 0.5 + rng.uniform())
                                 : Domain::box(-Vector::Ones(d), (0.5 + rng.uniform()) * Vector::Ones(d));
      auto learner = make_learner(kind == 0 ? "adaptive-ogd" : "optimistic-ogd");
      learner->init(dom);
      std::vector<Vector> ws, gs;
      Vector prev = Vector::Zero(d);
      double sum_sq = 0.0;
      for (int t = 1; t <= 200; ++t) {
        const Vector g = 0.8 * prev + (0.2 + rng.uniform()) * rng.normal_vector(d);
        if (kind == 1) learner->observe_hint(prev);
        ws.push_back(learner->current_iterate());
        gs.push_back(g);
        learner->observe_gradient(g);
        sum_sq += (kind == 1 ? (g - prev) : g).squaredNorm();
        prev = g;
      }
      const double bound = dom.diameter() * std::sqrt(2.0 * sum_sq);
      // 1000 comparators: half on the boundary, half inside.
      for (int k = 0; k < 1000; ++k) {
        Vector u = dom.project(dom.center() + (k < 500 ? 1e3 : rng.uniform()) *
                                                  rng.unit_sphere(d));
        double regret = 0.0;
        for (std::size_t t = 0; t < ws.size(); ++t) regret += gs[t].dot(ws[t] - u);
        worst[kind] = std::max(worst[kind], regret - bound);
      }
    }
  }
  return {worst[0] <= 1e-8 && worst[1] <= 1e-8,
          "max regret - bound: adaptive " + fmt(worst[0]) + ", optimistic " + fmt(worst[1]) +
              " (<= 1e-8)"};
}

Verdict strongly_convex_weights() {
  auto cfg = base_config(Algorithm::kGeneralSc, 10000);
  cfg.problem.spectrum_lo = 1.0;
  cfg.problem.spectrum_hi = 1.0;
  cfg.problem.B = 2.0;
  cfg.problem.noise = "sphere";
  cfg.problem.sigma = 0.5;
  cfg.mu_surrogate = 1.0;
  const Problem p = build_problem(cfg.problem);
  const double G = gradient_bound(*p.objective, p.domain, p.noise);
  const double mu = 1.0, B = 2.0;

  cfg.schedule = WeightSchedule::constant();
  const double mean_unit = mean_final(run_seeds(cfg, 100));
  cfg.schedule = WeightSchedule::linear();
  const double mean_linear = mean_final(run_seeds(cfg, 100));
  const double b_unit = strongly_convex_unit_weight_bound(mu, B, G, cfg.T);
  const double b_linear = strongly_convex_linear_weight_bound(mu, B, G, cfg.T);
  return {mean_unit <= b_unit && mean_linear <= b_linear && mean_linear < mean_unit,
          "alpha=1 mean " + fmt(mean_unit) + " <= " + fmt(b_unit) + "; alpha=t mean " +
              fmt(mean_linear) + " <= " + fmt(b_linear) + "; alpha=t below alpha=1"};
}

Verdict rate_exponents() {
  const Round T = 1 << 16;
  auto slope_of = [&](Algorithm algo) {
    const auto runs = run_seeds(base_config(algo, T), 1);
    return fit_rate(runs[0].rows, 0.5).slope;
  };
  const double classic = slope_of(Algorithm::kClassic);
  const double anytime = slope_of(Algorithm::kAnytime);
  const double optimistic = slope_of(Algorithm::kOptimistic);
  const double accelerated = slope_of(Algorithm::kAccelerated);
  const bool thresholds = classic <= -0.9 && anytime <= -0.9 && optimistic <= -1.35 &&
                          accelerated <= -1.7;
  const bool ordering = accelerated < optimistic && optimistic < anytime + 0.05;
  return {thresholds && ordering,
          "slopes classic " + fmt(classic) + ", anytime " + fmt(anytime) + " (<= -0.9); optimistic " +
              fmt(optimistic) + " (<= -1.35); accelerated " + fmt(accelerated) +
              " (<= -1.7); ordering accelerated < optimistic < anytime + 0.05: " +
              (ordering ? "yes" : "no")};
}

Verdict stochastic_floor() {
  const Round T = 100000;
  auto opt_cfg = base_config(Algorithm::kOptimistic, T);
  auto acc_cfg = base_config(Algorithm::kAccelerated, T);
  for (auto* c : {&opt_cfg, &acc_cfg}) {
    c->problem.noise = "sphere";
    c->problem.sigma = 1.0;
  }
  const Problem p = build_problem(opt_cfg.problem);
  const double L = *p.objective->smoothness();
  const double B = p.domain.diameter();
  double G = gradient_bound(*p.objective, p.domain, p.noise);

  const auto opt_runs = run_seeds(opt_cfg, 100);
  const auto acc_runs = run_seeds(acc_cfg, 100);
  // Unprojected y can carry x_t outside the ball; G must cover what was queried.
  for (const auto& r : acc_runs) G = std::max(G, r.diagnostics.max_oracle_grad_norm);

  const double opt_mean = mean_final(opt_runs);
  const double acc_mean = mean_final(acc_runs);
  const double opt_bound = optimistic_rate_bound(L, B, 1.0, T);
  const double acc_bound = accelerated_rate_bound(B, L, G, 1.0, T);
  auto mean_slope = [](const std::vector<RunResult>& runs) {
    std::vector<std::pair<Round, double>> pts;
    for (const auto& row : aggregate(runs)) pts.emplace_back(row.t, row.mean);
    return fit_rate(pts, 0.5).slope;
  };
  const double opt_slope = mean_slope(opt_runs);
  const double acc_slope = mean_slope(acc_runs);
  auto in_band = [](double s) { return s >= -0.7 && s <= -0.35; };
  return {opt_mean <= opt_bound && acc_mean <= acc_bound && in_band(opt_slope) &&
              in_band(acc_slope),
          "optimistic mean " + fmt(opt_mean) + " <= " + fmt(opt_bound) + ", slope " +
              fmt(opt_slope) + "; accelerated mean " + fmt(acc_mean) + " <= " + fmt(acc_bound) +
              ", slope " + fmt(acc_slope) + " (slopes in [-0.7, -0.35])"};
}

Verdict high_probability() {
  auto cfg = base_config(Algorithm::kAnytime, 10000);
  cfg.problem.noise = "sphere";
  cfg.problem.sigma = 1.0;
  const double delta = 0.05;
  const Problem p = build_problem(cfg.problem);
  const double G = gradient_bound(*p.objective, p.domain, p.noise);
  const double B = p.domain.diameter();
  const auto runs = run_seeds(cfg, 200);
  std::vector<double> finals;
  double min_bound = INFINITY;
  int covered = 0;
  for (const auto& r : runs) {
    const double bound = anytime_high_probability_bound(*r.diagnostics.learner_regret_bound, B,
                                                        G, cfg.schedule, cfg.T, delta);
    min_bound = std::min(min_bound, bound);
    finals.push_back(r.rows.back().subopt_x);
    if (r.rows.back().subopt_x <= bound) ++covered;
  }
  const double p95 = quantile(finals, 0.95);
  return {p95 <= min_bound,
          "p95 suboptimality " + fmt(p95) + " <= smallest per-seed bound " + fmt(min_bound) +
              "; seeds within their own bound: " + std::to_string(covered) + "/200"};
}

Verdict universality() {
  auto cfg = base_config(Algorithm::kAccelerated, 1 << 16);
  cfg.problem.kind = "absdev";
  const auto runs = run_seeds(cfg, 1);
  const double slope = fit_rate(runs[0].rows, 0.5).slope;
  return {slope <= -0.85, "non-smooth accelerated slope " + fmt(slope) + " (<= -0.85)"};
}

Verdict oracle_moments() {
  // Gaussian noise: 10^5 draws at a fixed point.
  const Eigen::Index d = 10;
  const double sigma = 1.0;
  const auto q = Objective::quadratic(Matrix::Identity(d, d), Vector::Zero(d));
  const Vector x = Vector::LinSpaced(d, -1.0, 1.0);
  Philox rng = Philox::for_purpose(0, "acceptance");
  const int n = 100000;
  Vector mean = Vector::Zero(d);
  double sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto r = stochastic_gradient(q, NoiseModel::gaussian(sigma), x, rng);
    mean += r.g;
    sq += (r.g - x).squaredNorm();
  }
  mean /= n;
  const double worst_mean = (mean - x).cwiseAbs().maxCoeff();
  const double mean_tol = 4.0 * sigma / std::sqrt(static_cast<double>(n) * d);
  const double var_err = std::abs(sq / n - sigma * sigma) / (sigma * sigma);

  // Central finite differences on the smooth objectives.
  double worst_fd = 0.0;
  ProblemSpec spec;
  for (const char* kind : {"quadratic", "logistic"}) {
    spec.kind = kind;
    const Problem p = build_problem(spec);
    const Objective& f = *p.objective;
    for (int i = 0; i < 100; ++i) {
      const Vector at = f.x_star() + rng.normal_vector(f.dim());
      const Vector g = f.gradient(at);
      Vector fd(f.dim());
      for (Eigen::Index j = 0; j < f.dim(); ++j) {
        Vector a = at, b = at;
        a[j] += 1e-5;
        b[j] -= 1e-5;
        fd[j] = (f.value(a) - f.value(b)) / 2e-5;
      }
      worst_fd = std::max(worst_fd, (g - fd).norm() / std::max(g.norm(), 1e-3));
    }
  }
  return {worst_mean <= mean_tol && var_err <= 0.05 && worst_fd <= 1e-6,
          "gaussian mean error " + fmt(worst_mean) + " <= " + fmt(mean_tol) +
              ", second-moment error " + fmt(100 * var_err) + "% (<= 5%); finite-difference rel. "
              "error " + fmt(worst_fd) + " (<= 1e-6)"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Verdict()> run;
  };
  // The two suite-wide criteria read trackers filled by the runs of the
  // others, so they come last.
  const std::vector<Criterion> criteria = {
      {"anytime-pathwise-bound", anytime_pathwise},
      {"learner-regret-compliance", learner_regret},
      {"strongly-convex-weighting", strongly_convex_weights},
      {"deterministic-rate-exponents", rate_exponents},
      {"stochastic-noise-floor", stochastic_floor},
      {"high-probability-bound", high_probability},
      {"non-smooth-universality", universality},
      {"oracle-moments", oracle_moments},
      {"averaging-identity",
       [] {
         return Verdict{g_worst_identity <= 1e-9,
                        "max relative error " + fmt(g_worst_identity) + " over " +
                            std::to_string(g_averaging_runs) + " averaging runs (<= 1e-9)"};
       }},
      {"accelerated-step-size-sums",
       [] {
         return Verdict{g_accelerated_runs > 0 && g_worst_step_sum <= 1e-8,
                        "max lhs - rhs " + fmt(g_worst_step_sum) + " over every round of " +
                            std::to_string(g_accelerated_runs) + " accelerated runs (<= 1e-8)"};
       }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (v.pass ? "PASS " : "FAIL ") << c.name << ": " << v.detail << " [" << fmt(secs)
              << " s]" << std::endl;
    if (!v.pass) ++failures;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
