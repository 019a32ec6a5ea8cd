#pragma once

#include <memory>
#include <optional>
#include <string>

#include "anytime/core.hpp"

namespace anytime {

/// Side information accompanying the round-t loss.
///
/// The loss handed to the learner is
///   alpha * ( <g, w> + (mu/2) ||w - anchor||^2 ),
/// where alpha * g is the weighted gradient passed alongside. mu = 0 is the
/// purely linear loss and anchor is ignored in that case.
struct LossContext {
  double alpha = 1.0;
  double mu = 0.0;
  Vector anchor;
};

/// Running sums that make the realized regret of a learner computable against
/// any comparator after the fact:
///
///   regret(u) = sum_t alpha_t l_t(w_t) - alpha_t l_t(u)
///
/// for the (possibly quadratic) losses described by LossContext.
class RegretLedger {
 public:
  void record(const Vector& g_weighted, const Vector& w, const LossContext& ctx,
              const std::optional<Vector>& hint);

  double regret_against(const Vector& u) const;

  Round rounds() const { return rounds_; }
  /// sum ||g~_t||^2 over the weighted gradients received.
  double sum_sq_gradients() const { return sum_sq_grad_; }
  /// sum ||g~_t - h_t||^2, missing hints counted as zero.
  double sum_sq_hint_errors() const { return sum_sq_hint_err_; }
  double max_gradient_norm() const { return max_grad_norm_; }
  const Vector& sum_gradients() const { return sum_grad_; }

 private:
  Round rounds_ = 0;
  double sum_inner_gw_ = 0.0;  // sum <g~_t, w_t>
  Vector sum_grad_;            // sum g~_t
  double sum_quad_at_w_ = 0.0; // sum alpha mu/2 ||w_t - x_t||^2
  double sum_curv_ = 0.0;      // sum alpha mu
  Vector sum_curv_anchor_;     // sum alpha mu x_t
  double sum_curv_anchor_sq_ = 0.0;
  double sum_sq_grad_ = 0.0;
  double sum_sq_hint_err_ = 0.0;
  double max_grad_norm_ = 0.0;
};

/// Stateful regret minimizer consumed by every conversion.
///
/// Round protocol: optionally observe_hint(h_t) (learners that accept hints
/// require it), read current_iterate() = w_t, then observe_gradient(alpha_t g_t).
/// Every received loss is written to the ledger together with the iterate it
/// was charged against.
class OnlineLearner {
 public:
  virtual ~OnlineLearner() = default;

  /// Resets the learner onto `domain`. The first iterate is `start` projected
  /// onto the domain, or the domain center.
  void init(const Domain& domain, const std::optional<Vector>& start = std::nullopt);
  bool initialized() const { return domain_.has_value(); }

  const Domain& domain() const;
  const Vector& current_iterate() const;

  void observe_hint(const Vector& hint);
  void observe_gradient(const Vector& g_weighted, const LossContext& ctx = {});

  virtual bool accepts_hints() const { return false; }
  virtual bool accepts_surrogates() const { return false; }
  virtual std::string name() const = 0;

  /// The learner's own worst-case regret guarantee for the losses seen so
  /// far, when it has a closed form.
  virtual std::optional<double> regret_bound() const { return std::nullopt; }

  const RegretLedger& ledger() const { return ledger_; }
  Round rounds() const { return ledger_.rounds(); }

 protected:
  virtual void on_init() {}
  virtual Vector on_hint(const Vector& hint);
  /// Consumes the loss and returns the next iterate.
  virtual Vector on_gradient(const Vector& g_weighted, const LossContext& ctx) = 0;

  const Domain& dom() const { return *domain_; }
  const Vector& iterate() const { return iterate_; }

 private:
  std::optional<Domain> domain_;
  Vector iterate_;
  std::optional<Vector> pending_hint_;
  RegretLedger ledger_;
};

/// Projected online gradient descent with the adaptive step
/// eta_t = B / sqrt(2 sum_{i<=t} ||g~_i||^2), B the domain diameter.
/// Guarantees regret <= B sqrt(2 sum ||g~_t||^2).
class AdaptiveOgd final : public OnlineLearner {
 public:
  AdaptiveOgd() = default;
  explicit AdaptiveOgd(const Domain& domain, const std::optional<Vector>& start = std::nullopt) {
    init(domain, start);
  }

  std::string name() const override { return "adaptive-ogd"; }
  std::optional<double> regret_bound() const override;
  double sum_sq() const { return sum_sq_; }

 protected:
  void on_init() override { sum_sq_ = 0.0; }
  Vector on_gradient(const Vector& g_weighted, const LossContext& ctx) override;

 private:
  double sum_sq_ = 0.0;
};

/// Optimistic projected OGD (two-point scheme).
///
/// Keeps a base point z. A hint h exposes w = project(z - eta h); a gradient
/// g~ moves z <- project(z - eta g~), where eta = B / sqrt(2 sum ||g~_i - h_i||^2)
/// is refreshed with every gradient. While that sum is still zero the step is
/// the eta -> infinity limit of the projection, which is what makes exactly
/// predicted rounds cost nothing. Target regret: B sqrt(2 sum ||g~_t - h_t||^2).
class OptimisticOgd final : public OnlineLearner {
 public:
  OptimisticOgd() = default;
  explicit OptimisticOgd(const Domain& domain,
                         const std::optional<Vector>& start = std::nullopt) {
    init(domain, start);
  }

  bool accepts_hints() const override { return true; }
  std::string name() const override { return "optimistic-ogd"; }
  std::optional<double> regret_bound() const override;
  const Vector& base_point() const { return base_; }

 protected:
  void on_init() override;
  Vector on_hint(const Vector& hint) override;
  Vector on_gradient(const Vector& g_weighted, const LossContext& ctx) override;

 private:
  Vector step_from_base(const Vector& direction) const;

  Vector base_;
  Vector last_hint_;
  double sum_sq_err_ = 0.0;
};

/// Follow-the-Leader on the strongly convex surrogate losses
///   l_t(w) = <g_t, w> + (mu_t/2) ||w - x_t||^2.
/// The leader over the domain is the projection of the unconstrained leader
/// sum(alpha mu x - alpha g) / sum(alpha mu), because the cumulative loss is a
/// scaled squared distance to that point plus a constant.
class FtlStronglyConvex final : public OnlineLearner {
 public:
  FtlStronglyConvex() = default;
  explicit FtlStronglyConvex(const Domain& domain,
                             const std::optional<Vector>& start = std::nullopt) {
    init(domain, start);
  }

  bool accepts_surrogates() const override { return true; }
  std::string name() const override { return "ftl-sc"; }

  /// Closed-form FTL regret for constant (alpha_t = 1) or linear
  /// (alpha_t = t) weights and a constant mu, with G the largest unweighted
  /// gradient norm seen. nullopt for any other weighting.
  std::optional<double> regret_bound() const override;

 protected:
  void on_init() override;
  Vector on_gradient(const Vector& g_weighted, const LossContext& ctx) override;

 private:
  double curvature_ = 0.0;  // sum alpha mu
  Vector pull_;             // sum alpha (mu x - g)
  double max_grad_ = 0.0;
  double mu_ = 0.0;
  bool constant_mu_ = true;
  bool unit_weights_ = true;
  bool linear_weights_ = true;
};

/// (mu B + G)^2 (log T + 1) / (2 mu): FTL regret with unit weights.
double ftl_regret_bound_unit_weights(double mu, double diameter, double grad_bound, Round T);
/// T (mu B + G)^2 / mu: FTL regret with alpha_t = t.
double ftl_regret_bound_linear_weights(double mu, double diameter, double grad_bound, Round T);

/// Factory for the names used on the command line.
std::unique_ptr<OnlineLearner> make_learner(const std::string& name);

}  // namespace anytime
