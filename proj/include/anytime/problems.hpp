#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "anytime/conversions.hpp"
#include "anytime/core.hpp"
#include "anytime/rng.hpp"

namespace anytime {

/// Synthetic convex objective with a known minimizer and known curvature data.
class Objective {
 public:
  /// L(x) = 1/2 (x - x*)^T A (x - x*), A symmetric positive semidefinite.
  /// Smoothness and strong convexity are read off the spectrum of A.
  static Objective quadratic(Matrix A, Vector x_star);
  /// Mean logistic loss of labels y in {-1, +1} plus (ridge/2) ||x||^2.
  /// The minimizer is computed by Newton's method at construction.
  static Objective logistic(Matrix features, Vector labels, double ridge);
  /// L(x) = sum_i |x_i - t_i| / d. Non-smooth.
  static Objective abs_deviation(Vector targets);

  enum class Kind { kQuadratic, kLogistic, kAbsDeviation };
  Kind kind() const;
  std::string name() const;
  Eigen::Index dim() const { return x_star_.size(); }

  double value(const Vector& x) const;
  /// Exact gradient; for abs_deviation the subgradient with sign(0) = 0.
  Vector gradient(const Vector& x) const;

  /// value(x) - f*, with differences below the evaluation resolution at x
  /// reported as exactly 0.
  double suboptimality(const Vector& x) const;
  /// Magnitude below which value(x) - f* cannot be told apart from zero in
  /// double precision.
  double resolution(const Vector& x) const;

  const Vector& x_star() const { return x_star_; }
  double f_star() const { return f_star_; }
  std::optional<double> smoothness() const { return smoothness_; }
  std::optional<double> strong_convexity() const { return strong_convexity_; }

  /// max ||grad L(x)|| over the domain (an upper bound of that closed form
  /// for quadratics and logistic; exact for abs_deviation).
  double max_gradient_norm(const Domain& domain) const;

 private:
  struct Quadratic {
    Matrix A;
  };
  struct Logistic {
    Matrix features;
    Vector labels;
    double ridge;
  };
  struct AbsDeviation {};

  Objective(std::variant<Quadratic, Logistic, AbsDeviation> body, Vector x_star)
      : body_(std::move(body)), x_star_(std::move(x_star)) {}
  void check_dim(const Vector& x) const;

  std::variant<Quadratic, Logistic, AbsDeviation> body_;
  Vector x_star_;
  double f_star_ = 0.0;
  std::optional<double> smoothness_;
  std::optional<double> strong_convexity_;
};

/// Evenly spaced eigenvalues lo..hi (d of them).
Vector linear_spectrum(Eigen::Index dim, double lo, double hi);

/// Quadratic with exactly the given eigenvalues and a seeded random rotation.
Objective make_quadratic(const Vector& spectrum, const Vector& x_star, Philox& rng);

/// Random logistic-regression instance (n samples, Gaussian features, labels
/// from a planted direction with 10% flips).
Objective make_logistic(Eigen::Index n, Eigen::Index dim, double ridge, Philox& rng);

/// Additive gradient noise zeta with E zeta = 0 and E ||zeta||^2 = sigma^2.
struct NoiseModel {
  enum class Kind { kNone, kGaussian, kSphere };
  Kind kind = Kind::kNone;
  double sigma = 0.0;

  static NoiseModel none() { return {}; }
  /// N(0, (sigma^2 / d) I).
  static NoiseModel gaussian(double sigma);
  /// Uniform on the radius-sigma sphere; ||zeta|| = sigma surely.
  static NoiseModel sphere(double sigma);
  static NoiseModel parse(const std::string& kind, double sigma);

  std::string name() const;
  /// Almost-sure bound on ||zeta||, if one exists.
  std::optional<double> almost_sure_bound() const;
  Vector draw(Eigen::Index dim, Philox& rng) const;
};

/// Exact (sub)gradient plus one fresh noise draw from a private stream.
class StochasticOracle {
 public:
  StochasticOracle(std::shared_ptr<const Objective> objective, NoiseModel noise, Philox rng);

  GradientOracleReport operator()(const Vector& x);

  const Objective& objective() const { return *objective_; }
  const NoiseModel& noise() const { return noise_; }

 private:
  std::shared_ptr<const Objective> objective_;
  NoiseModel noise_;
  Philox rng_;
};

GradientOracleReport stochastic_gradient(const Objective& objective, const NoiseModel& noise,
                                         const Vector& x, Philox& rng);

/// G with ||g|| <= G almost surely for every query inside the domain.
/// Throws ConfigError for Gaussian noise, which has no such bound.
double gradient_bound(const Objective& objective, const Domain& domain,
                      const NoiseModel& noise);

}  // namespace anytime
