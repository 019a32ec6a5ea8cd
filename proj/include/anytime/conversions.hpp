#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "anytime/core.hpp"
#include "anytime/learners.hpp"

namespace anytime {

/// One answer of a stochastic first-order oracle. Only g drives the
/// algorithms; the exact value and gradient norm are carried for logging.
struct GradientOracleReport {
  Vector g;
  double true_value = 0.0;
  double true_grad_norm = 0.0;
};

/// A strongly convex surrogate l_t(x) = <g, x> + (mu/2) ||x - x_t||^2 that lower
/// bounds the objective's progress in expectation; mu = 0 is the linear loss.
struct SurrogateReport {
  GradientOracleReport report;
  double mu = 0.0;
};

using GradientOracle = std::function<GradientOracleReport(const Vector&)>;
using SurrogateOracle = std::function<SurrogateReport(const Vector&)>;

/// Everything that happened in one round of a conversion.
struct StepRecord {
  Round t = 0;
  double alpha = 0.0;
  double alpha_cum = 0.0;
  Vector x;       ///< point the oracle was queried at (w_t for the classic conversion)
  Vector w;       ///< learner iterate for this round
  Vector output;  ///< the conversion's estimate after this round
  std::optional<Vector> hint;  ///< optimistic conversion only
  std::optional<Vector> y;     ///< accelerated conversion only
  double eta = 0.0;            ///< accelerated conversion only
  GradientOracleReport report;
};

struct ConversionRegretReport {
  /// sum alpha_t <g_t, q_t - u> over the points q_t the oracle was queried at.
  double measured_regret = 0.0;
  /// 1 + log(alpha_{1:T} / alpha_1).
  double log_factor = 1.0;
};

/// State shared by all conversions: the learner, the weight stream, the
/// current estimate, and the regret of the queried points.
class Conversion {
 public:
  virtual ~Conversion() = default;

  Round round() const { return weights_.round(); }
  const WeightSchedule& schedule() const { return weights_.schedule(); }
  double cumulative_weight() const { return weights_.cumulative(); }
  double sum_sq_weights() const { return weights_.sum_of_squares(); }

  /// The conversion's current output (x_t, the running average for the
  /// classic conversion, y_t for the accelerated one). Throws StateError
  /// before the first step.
  const Vector& output() const;

  const OnlineLearner& learner() const { return *learner_; }
  std::shared_ptr<OnlineLearner> learner_ptr() const { return learner_; }

  ConversionRegretReport regret_report(const Vector& comparator) const;

 protected:
  Conversion(std::shared_ptr<OnlineLearner> learner, WeightSchedule schedule);

  OnlineLearner& mutable_learner() { return *learner_; }
  WeightAccumulator::Step next_weights() { return weights_.advance(); }
  void record_query(double alpha, const Vector& q, const Vector& g);
  static void require_finite(const GradientOracleReport& r);

  Vector output_;
  bool started_ = false;

 private:
  std::shared_ptr<OnlineLearner> learner_;
  WeightAccumulator weights_;
  double first_alpha_ = 0.0;
  double sum_inner_gq_ = 0.0;  // sum alpha <g, q>
  Vector sum_weighted_grad_;   // sum alpha g
};

/// Anytime online-to-batch: query the oracle at the weighted average of the
/// learner's iterates and feed the learner alpha_t g_t.
class AnytimeConverter final : public Conversion {
 public:
  AnytimeConverter(std::shared_ptr<OnlineLearner> learner, WeightSchedule schedule);
  StepRecord step(const GradientOracle& oracle);
};

/// The same averaging driven by a surrogate-loss oracle; the learner sees the
/// surrogate through its LossContext.
class GeneralAnytimeConverter final : public Conversion {
 public:
  GeneralAnytimeConverter(std::shared_ptr<OnlineLearner> learner, WeightSchedule schedule);
  StepRecord step(const SurrogateOracle& oracle);
};

/// Anytime averaging over an optimistic learner, with hint alpha_t g_{t-1}
/// (g_0 = 0) delivered before each round's iterate is read.
class OptimisticConverter final : public Conversion {
 public:
  OptimisticConverter(std::shared_ptr<OnlineLearner> learner, WeightSchedule schedule);
  StepRecord step(const GradientOracle& oracle);

 private:
  Vector prev_grad_;
};

/// Adaptive stochastic acceleration by linear coupling.
///
/// alpha_t = t, tau_t = alpha_t / alpha_{1:t}; plays
/// x_t = (1 - tau_t) y_{t-1} + tau_t w_t, then takes the unprojected step
/// y_t = x_t - eta_t g_t with eta_t = c B / sqrt(1 + sum_{i<=t} alpha_{1:i} ||g_i||^2).
/// The learner must live on the origin-centered ball of radius B/2. The
/// reported output is y_t.
class AcceleratedConverter final : public Conversion {
 public:
  AcceleratedConverter(std::shared_ptr<OnlineLearner> learner, double c = 2.0);
  StepRecord step(const GradientOracle& oracle);

  double bound_B() const { return B_; }
  double c() const { return c_; }
  const Vector& x() const { return x_; }
  const Vector& y() const { return output(); }

  /// Running sums over rounds of beta_t ||g_t||^2 (beta_t = alpha_{1:t}), and
  /// of the same terms times eta_t and eta_t^2.
  struct StepSizeSums {
    double weighted_sq = 0.0;
    double times_eta = 0.0;
    double times_eta_sq = 0.0;
  };
  const StepSizeSums& step_size_sums() const { return sums_; }

 private:
  double B_;
  double c_;
  Vector x_;
  CompensatedSum weighted_sq_;
  StepSizeSums sums_;
};

/// The classic online-to-batch conversion: query at the learner's own
/// iterate and output the weighted average of the iterates.
class ClassicConverter final : public Conversion {
 public:
  ClassicConverter(std::shared_ptr<OnlineLearner> learner, WeightSchedule schedule);
  StepRecord step(const GradientOracle& oracle);
};

}  // namespace anytime
