#include "anytime/conversions.hpp"

#include <cmath>
#include <stdexcept>

#include "anytime/errors.hpp"

namespace anytime {
namespace {

void require_plain_learner(const OnlineLearner& learner, const char* conversion) {
  if (learner.accepts_hints()) {
    throw ConfigError(std::string(conversion) + " cannot drive " + learner.name() +
                      ": it expects hints");
  }
  if (learner.accepts_surrogates()) {
    throw ConfigError(std::string(conversion) + " cannot drive " + learner.name() +
                      ": it needs strongly convex surrogate losses");
  }
}

}  // namespace

Conversion::Conversion(std::shared_ptr<OnlineLearner> learner, WeightSchedule schedule)
    : learner_(std::move(learner)), weights_(schedule) {
  if (!learner_) throw std::invalid_argument("conversion needs a learner");
  if (!learner_->initialized()) throw StateError("conversion needs an initialized learner");
  sum_weighted_grad_ = Vector::Zero(learner_->domain().dim());
}

const Vector& Conversion::output() const {
  if (!started_) throw StateError("conversion has not taken a step yet");
  return output_;
}

void Conversion::record_query(double alpha, const Vector& q, const Vector& g) {
  if (round() == 1) first_alpha_ = alpha;
  sum_inner_gq_ += alpha * g.dot(q);
  sum_weighted_grad_ += alpha * g;
}

void Conversion::require_finite(const GradientOracleReport& r) {
  if (!all_finite(r.g)) throw DataError("oracle returned a non-finite gradient");
}

ConversionRegretReport Conversion::regret_report(const Vector& comparator) const {
  ConversionRegretReport out;
  if (round() == 0) return out;
  out.measured_regret = sum_inner_gq_ - sum_weighted_grad_.dot(comparator);
  out.log_factor = 1.0 + std::log(cumulative_weight() / first_alpha_);
  return out;
}

// ---------------------------------------------------------------------------

AnytimeConverter::AnytimeConverter(std::shared_ptr<OnlineLearner> learner,
                                   WeightSchedule schedule)
    : Conversion(std::move(learner), schedule) {
  require_plain_learner(this->learner(), "anytime conversion");
}

StepRecord AnytimeConverter::step(const GradientOracle& oracle) {
  const auto wt = next_weights();
  StepRecord rec;
  rec.t = wt.t;
  rec.alpha = wt.alpha;
  rec.alpha_cum = wt.cumulative;
  rec.w = learner().current_iterate();
  rec.x = running_average_update(started_ ? output_ : rec.w, rec.w, wt.alpha, wt.cumulative);
  rec.report = oracle(rec.x);
  require_finite(rec.report);
  mutable_learner().observe_gradient(wt.alpha * rec.report.g, LossContext{wt.alpha, 0.0, {}});
  record_query(wt.alpha, rec.x, rec.report.g);
  output_ = rec.x;
  started_ = true;
  rec.output = output_;
  return rec;
}

// ---------------------------------------------------------------------------

GeneralAnytimeConverter::GeneralAnytimeConverter(std::shared_ptr<OnlineLearner> learner,
                                                 WeightSchedule schedule)
    : Conversion(std::move(learner), schedule) {
  if (this->learner().accepts_hints()) {
    throw ConfigError("general anytime conversion cannot drive " + this->learner().name() +
                      ": it expects hints");
  }
}

StepRecord GeneralAnytimeConverter::step(const SurrogateOracle& oracle) {
  const auto wt = next_weights();
  StepRecord rec;
  rec.t = wt.t;
  rec.alpha = wt.alpha;
  rec.alpha_cum = wt.cumulative;
  rec.w = learner().current_iterate();
  rec.x = running_average_update(started_ ? output_ : rec.w, rec.w, wt.alpha, wt.cumulative);
  SurrogateReport s = oracle(rec.x);
  if (s.mu < 0.0 || !std::isfinite(s.mu)) {
    throw std::invalid_argument("surrogate curvature mu must be finite and >= 0");
  }
  rec.report = std::move(s.report);
  require_finite(rec.report);
  mutable_learner().observe_gradient(wt.alpha * rec.report.g,
                                     LossContext{wt.alpha, s.mu, rec.x});
  record_query(wt.alpha, rec.x, rec.report.g);
  output_ = rec.x;
  started_ = true;
  rec.output = output_;
  return rec;
}

// ---------------------------------------------------------------------------

OptimisticConverter::OptimisticConverter(std::shared_ptr<OnlineLearner> learner,
                                         WeightSchedule schedule)
    : Conversion(std::move(learner), schedule) {
  if (!this->learner().accepts_hints()) {
    throw ConfigError("optimistic conversion needs a learner that accepts hints, got " +
                      this->learner().name());
  }
  prev_grad_ = Vector::Zero(this->learner().domain().dim());
}

StepRecord OptimisticConverter::step(const GradientOracle& oracle) {
  const auto wt = next_weights();
  StepRecord rec;
  rec.t = wt.t;
  rec.alpha = wt.alpha;
  rec.alpha_cum = wt.cumulative;
  rec.hint = wt.alpha * prev_grad_;
  mutable_learner().observe_hint(*rec.hint);
  rec.w = learner().current_iterate();
  rec.x = running_average_update(started_ ? output_ : rec.w, rec.w, wt.alpha, wt.cumulative);
  rec.report = oracle(rec.x);
  require_finite(rec.report);
  mutable_learner().observe_gradient(wt.alpha * rec.report.g, LossContext{wt.alpha, 0.0, {}});
  record_query(wt.alpha, rec.x, rec.report.g);
  prev_grad_ = rec.report.g;
  output_ = rec.x;
  started_ = true;
  rec.output = output_;
  return rec;
}

// ---------------------------------------------------------------------------

AcceleratedConverter::AcceleratedConverter(std::shared_ptr<OnlineLearner> learner, double c)
    : Conversion(std::move(learner), WeightSchedule::linear()), c_(c) {
  require_plain_learner(this->learner(), "accelerated conversion");
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw ConfigError("accelerated conversion needs a finite c > 0");
  }
  const Domain& d = this->learner().domain();
  if (!d.is_ball() || d.as_ball().center.norm() != 0.0) {
    throw ConfigError("accelerated conversion needs a learner on an origin-centered ball, got " +
                      d.describe());
  }
  B_ = 2.0 * d.as_ball().radius;
}

StepRecord AcceleratedConverter::step(const GradientOracle& oracle) {
  const auto wt = next_weights();
  StepRecord rec;
  rec.t = wt.t;
  rec.alpha = wt.alpha;
  rec.alpha_cum = wt.cumulative;
  rec.w = learner().current_iterate();
  const double tau = wt.alpha / wt.cumulative;
  // y_0 = w_1 and tau_1 = 1, so the first round plays w_1.
  rec.x = started_ ? Vector((1.0 - tau) * output_ + tau * rec.w) : rec.w;
  rec.report = oracle(rec.x);
  require_finite(rec.report);

  const double term = wt.cumulative * rec.report.g.squaredNorm();
  weighted_sq_.add(term);
  sums_.weighted_sq = weighted_sq_.value();
  rec.eta = c_ * B_ / std::sqrt(1.0 + sums_.weighted_sq);
  sums_.times_eta += term * rec.eta;
  sums_.times_eta_sq += term * rec.eta * rec.eta;
  rec.y = rec.x - rec.eta * rec.report.g;

  mutable_learner().observe_gradient(wt.alpha * rec.report.g, LossContext{wt.alpha, 0.0, {}});
  record_query(wt.alpha, rec.x, rec.report.g);
  x_ = rec.x;
  output_ = *rec.y;
  started_ = true;
  rec.output = output_;
  return rec;
}

// ---------------------------------------------------------------------------

ClassicConverter::ClassicConverter(std::shared_ptr<OnlineLearner> learner,
                                   WeightSchedule schedule)
    : Conversion(std::move(learner), schedule) {
  require_plain_learner(this->learner(), "classic conversion");
}

StepRecord ClassicConverter::step(const GradientOracle& oracle) {
  const auto wt = next_weights();
  StepRecord rec;
  rec.t = wt.t;
  rec.alpha = wt.alpha;
  rec.alpha_cum = wt.cumulative;
  rec.w = learner().current_iterate();
  rec.x = rec.w;
  rec.report = oracle(rec.x);
  require_finite(rec.report);
  mutable_learner().observe_gradient(wt.alpha * rec.report.g, LossContext{wt.alpha, 0.0, {}});
  record_query(wt.alpha, rec.x, rec.report.g);
  output_ = running_average_update(started_ ? output_ : rec.w, rec.w, wt.alpha, wt.cumulative);
  started_ = true;
  rec.output = output_;
  return rec;
}

}  // namespace anytime
