#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include <Eigen/Dense>

namespace anytime {

/// Dense real coordinate vector; iterates, gradients and hints all live here.
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Round index. Rounds are numbered from 1; 0 means "before the first round".
using Round = std::uint64_t;

bool all_finite(const Vector& v);

/// Convex feasible set with exact Euclidean projection.
///
/// Either a Euclidean ball or an axis-aligned box. Construction validates the
/// geometry (positive radius, lower < upper coordinatewise, finite entries).
class Domain {
 public:
  struct Ball {
    Vector center;
    double radius;
  };
  struct Box {
    Vector lower;
    Vector upper;
  };

  static Domain ball(Vector center, double radius);
  /// Ball of the given radius centered at the origin.
  static Domain centered_ball(Eigen::Index dim, double radius);
  static Domain box(Vector lower, Vector upper);

  Eigen::Index dim() const;
  /// sup ||x - y|| over the set.
  double diameter() const;
  Vector center() const;

  bool is_ball() const { return std::holds_alternative<Ball>(shape_); }
  const Ball& as_ball() const;
  const Box& as_box() const;

  /// Euclidean-nearest point of the set. Throws std::invalid_argument on a
  /// dimension mismatch.
  Vector project(const Vector& p) const;

  /// lim_{eta -> inf} project(from - eta * direction). This is the step taken
  /// when an adaptive step size is formally infinite.
  Vector project_limit(const Vector& from, const Vector& direction) const;

  bool contains(const Vector& p, double tol = 1e-12) const;

  std::string describe() const;

 private:
  explicit Domain(std::variant<Ball, Box> shape) : shape_(std::move(shape)) {}
  void check_dim(const Vector& p) const;

  std::variant<Ball, Box> shape_;
};

/// The per-round weights alpha_t of a conversion.
class WeightSchedule {
 public:
  enum class Kind { kConstant, kLinear, kPolynomial };

  static WeightSchedule constant() { return WeightSchedule(Kind::kConstant, 0.0); }
  static WeightSchedule linear() { return WeightSchedule(Kind::kLinear, 1.0); }
  /// alpha_t = t^k, k > 0.
  static WeightSchedule polynomial(double k);
  /// Parses "constant", "linear" or "poly:<k>".
  static WeightSchedule parse(const std::string& text);

  Kind kind() const { return kind_; }
  double exponent() const { return exponent_; }

  /// alpha_t for t >= 1; t = 0 throws std::invalid_argument.
  double weight(Round t) const;

  /// alpha_{1:t}, with alpha_{1:0} = 0. Closed forms for constant and linear
  /// weights; compensated summation otherwise (O(t)).
  double cumulative(Round t) const;

  std::string name() const;

  bool operator==(const WeightSchedule&) const = default;

 private:
  WeightSchedule(Kind kind, double exponent) : kind_(kind), exponent_(exponent) {}

  Kind kind_;
  double exponent_;
};

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// Streams (alpha_t, alpha_{1:t}) round by round in O(1) per round, also
/// tracking sum alpha_t^2 (needed by the high-probability bound).
class WeightAccumulator {
 public:
  explicit WeightAccumulator(WeightSchedule schedule) : schedule_(schedule) {}

  struct Step {
    Round t;
    double alpha;
    double cumulative;
  };

  Step advance();

  Round round() const { return t_; }
  double cumulative() const;
  double sum_of_squares() const { return squares_.value(); }
  const WeightSchedule& schedule() const { return schedule_; }

 private:
  WeightSchedule schedule_;
  Round t_ = 0;
  CompensatedSum sum_;
  CompensatedSum squares_;
};

/// x_t = (alpha_{1:t-1} x_{t-1} + alpha_t w_t) / alpha_{1:t}.
///
/// alpha_cum is alpha_{1:t}. When alpha_cum == alpha_t (the first round) the
/// result is w_new exactly and x_prev is ignored.
Vector running_average_update(const Vector& x_prev, const Vector& w_new, double alpha_t,
                              double alpha_cum);

}  // namespace anytime
