#include "anytime/learners.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "anytime/errors.hpp"

namespace anytime {

void RegretLedger::record(const Vector& g_weighted, const Vector& w, const LossContext& ctx,
                          const std::optional<Vector>& hint) {
  if (rounds_ == 0) {
    sum_grad_ = Vector::Zero(w.size());
    sum_curv_anchor_ = Vector::Zero(w.size());
  }
  ++rounds_;
  sum_inner_gw_ += g_weighted.dot(w);
  sum_grad_ += g_weighted;
  if (ctx.mu > 0.0) {
    const double c = ctx.alpha * ctx.mu;
    sum_quad_at_w_ += 0.5 * c * (w - ctx.anchor).squaredNorm();
    sum_curv_ += c;
    sum_curv_anchor_ += c * ctx.anchor;
    sum_curv_anchor_sq_ += c * ctx.anchor.squaredNorm();
  }
  const double gsq = g_weighted.squaredNorm();
  sum_sq_grad_ += gsq;
  sum_sq_hint_err_ += hint ? (g_weighted - *hint).squaredNorm() : gsq;
  max_grad_norm_ = std::max(max_grad_norm_, std::sqrt(gsq));
}

double RegretLedger::regret_against(const Vector& u) const {
  if (rounds_ == 0) return 0.0;
  if (u.size() != sum_grad_.size()) {
    throw std::invalid_argument("regret_against: comparator dimension mismatch");
  }
  const double loss_w = sum_inner_gw_ + sum_quad_at_w_;
  const double loss_u = sum_grad_.dot(u) + 0.5 * sum_curv_ * u.squaredNorm() -
                        sum_curv_anchor_.dot(u) + 0.5 * sum_curv_anchor_sq_;
  return loss_w - loss_u;
}

// ---------------------------------------------------------------------------

void OnlineLearner::init(const Domain& domain, const std::optional<Vector>& start) {
  if (start && start->size() != domain.dim()) {
    throw std::invalid_argument("learner start point has the wrong dimension");
  }
  domain_ = domain;
  iterate_ = start ? domain.project(*start) : domain.center();
  pending_hint_.reset();
  ledger_ = RegretLedger{};
  on_init();
}

const Domain& OnlineLearner::domain() const {
  if (!domain_) throw StateError(name() + ": learner used before init()");
  return *domain_;
}

const Vector& OnlineLearner::current_iterate() const {
  if (!domain_) throw StateError(name() + ": learner used before init()");
  return iterate_;
}

Vector OnlineLearner::on_hint(const Vector&) { return iterate_; }

void OnlineLearner::observe_hint(const Vector& hint) {
  if (!domain_) throw StateError(name() + ": learner used before init()");
  if (!accepts_hints()) throw ConfigError(name() + " does not accept hints");
  if (hint.size() != domain_->dim()) throw std::invalid_argument("hint dimension mismatch");
  if (!all_finite(hint)) throw DataError("non-finite hint");
  if (pending_hint_) throw ProtocolError(name() + ": two hints in one round");
  iterate_ = on_hint(hint);
  pending_hint_ = hint;
}

void OnlineLearner::observe_gradient(const Vector& g_weighted, const LossContext& ctx) {
  if (!domain_) throw StateError(name() + ": learner used before init()");
  if (accepts_hints() && !pending_hint_) {
    throw ProtocolError(name() + ": gradient delivered before the round's hint");
  }
  if (g_weighted.size() != domain_->dim()) {
    throw std::invalid_argument("gradient dimension mismatch");
  }
  if (!all_finite(g_weighted)) throw DataError("non-finite gradient");
  if (!(ctx.alpha > 0.0)) throw std::invalid_argument("loss weight alpha must be > 0");
  if (ctx.mu < 0.0) throw std::invalid_argument("surrogate curvature mu must be >= 0");
  if (ctx.mu > 0.0) {
    if (!accepts_surrogates()) {
      throw ConfigError(name() + " does not accept strongly convex surrogate losses");
    }
    if (ctx.anchor.size() != domain_->dim()) {
      throw std::invalid_argument("surrogate anchor dimension mismatch");
    }
  } else if (accepts_surrogates()) {
    throw std::invalid_argument(name() + " needs a surrogate with mu > 0");
  }
  ledger_.record(g_weighted, iterate_, ctx, pending_hint_);
  iterate_ = on_gradient(g_weighted, ctx);
  pending_hint_.reset();
}

// ---------------------------------------------------------------------------

Vector AdaptiveOgd::on_gradient(const Vector& g_weighted, const LossContext&) {
  sum_sq_ += g_weighted.squaredNorm();
  if (sum_sq_ == 0.0) return iterate();
  const double eta = dom().diameter() / std::sqrt(2.0 * sum_sq_);
  return dom().project(iterate() - eta * g_weighted);
}

std::optional<double> AdaptiveOgd::regret_bound() const {
  return dom().diameter() * std::sqrt(2.0 * sum_sq_);
}

// ---------------------------------------------------------------------------

void OptimisticOgd::on_init() {
  base_ = iterate();
  last_hint_ = Vector::Zero(base_.size());
  sum_sq_err_ = 0.0;
}

Vector OptimisticOgd::step_from_base(const Vector& direction) const {
  if (sum_sq_err_ == 0.0) return dom().project_limit(base_, direction);
  const double eta = dom().diameter() / std::sqrt(2.0 * sum_sq_err_);
  return dom().project(base_ - eta * direction);
}

Vector OptimisticOgd::on_hint(const Vector& hint) {
  last_hint_ = hint;
  return step_from_base(hint);
}

Vector OptimisticOgd::on_gradient(const Vector& g_weighted, const LossContext&) {
  sum_sq_err_ += (g_weighted - last_hint_).squaredNorm();
  base_ = step_from_base(g_weighted);
  return base_;
}

std::optional<double> OptimisticOgd::regret_bound() const {
  return dom().diameter() * std::sqrt(2.0 * sum_sq_err_);
}

// ---------------------------------------------------------------------------

void FtlStronglyConvex::on_init() {
  curvature_ = 0.0;
  pull_ = Vector::Zero(iterate().size());
  max_grad_ = 0.0;
  mu_ = 0.0;
  constant_mu_ = unit_weights_ = linear_weights_ = true;
}

Vector FtlStronglyConvex::on_gradient(const Vector& g_weighted, const LossContext& ctx) {
  const Round t = rounds();  // already counts this round
  if (t == 1) mu_ = ctx.mu;
  constant_mu_ = constant_mu_ && ctx.mu == mu_;
  unit_weights_ = unit_weights_ && ctx.alpha == 1.0;
  linear_weights_ = linear_weights_ && ctx.alpha == static_cast<double>(t);
  max_grad_ = std::max(max_grad_, g_weighted.norm() / ctx.alpha);

  curvature_ += ctx.alpha * ctx.mu;
  pull_ += (ctx.alpha * ctx.mu) * ctx.anchor - g_weighted;
  return dom().project(pull_ / curvature_);
}

std::optional<double> FtlStronglyConvex::regret_bound() const {
  const Round t = rounds();
  if (t == 0) return 0.0;
  if (!constant_mu_) return std::nullopt;
  const double B = dom().diameter();
  if (unit_weights_) return ftl_regret_bound_unit_weights(mu_, B, max_grad_, t);
  if (linear_weights_) return ftl_regret_bound_linear_weights(mu_, B, max_grad_, t);
  return std::nullopt;
}

double ftl_regret_bound_unit_weights(double mu, double diameter, double grad_bound, Round T) {
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be > 0");
  const double lip = mu * diameter + grad_bound;
  return lip * lip * (std::log(static_cast<double>(T)) + 1.0) / (2.0 * mu);
}

double ftl_regret_bound_linear_weights(double mu, double diameter, double grad_bound, Round T) {
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be > 0");
  const double lip = mu * diameter + grad_bound;
  return static_cast<double>(T) * lip * lip / mu;
}

std::unique_ptr<OnlineLearner> make_learner(const std::string& name) {
  if (name == "adaptive-ogd") return std::make_unique<AdaptiveOgd>();
  if (name == "optimistic-ogd") return std::make_unique<OptimisticOgd>();
  if (name == "ftl-sc") return std::make_unique<FtlStronglyConvex>();
  throw ConfigError("unknown learner '" + name +
                    "' (expected adaptive-ogd, optimistic-ogd or ftl-sc)");
}

}  // namespace anytime
