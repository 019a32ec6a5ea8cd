#include "anytime/core.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace anytime {

bool all_finite(const Vector& v) { return v.allFinite(); }

Domain Domain::ball(Vector center, double radius) {
  if (center.size() < 1) throw std::invalid_argument("ball: dimension must be >= 1");
  if (!all_finite(center)) throw std::invalid_argument("ball: center must be finite");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("ball: radius must be positive and finite");
  }
  return Domain(Ball{std::move(center), radius});
}

Domain Domain::centered_ball(Eigen::Index dim, double radius) {
  return ball(Vector::Zero(dim), radius);
}

Domain Domain::box(Vector lower, Vector upper) {
  if (lower.size() < 1 || lower.size() != upper.size()) {
    throw std::invalid_argument("box: bounds must have equal dimension >= 1");
  }
  if (!all_finite(lower) || !all_finite(upper)) {
    throw std::invalid_argument("box: bounds must be finite");
  }
  if (!(lower.array() < upper.array()).all()) {
    throw std::invalid_argument("box: lower must be < upper coordinatewise");
  }
  return Domain(Box{std::move(lower), std::move(upper)});
}

Eigen::Index Domain::dim() const {
  return std::visit([](const auto& s) -> Eigen::Index {
    if constexpr (std::is_same_v<std::decay_t<decltype(s)>, Ball>) {
      return s.center.size();
    } else {
      return s.lower.size();
    }
  }, shape_);
}

double Domain::diameter() const {
  if (is_ball()) return 2.0 * as_ball().radius;
  const auto& b = as_box();
  return (b.upper - b.lower).norm();
}

Vector Domain::center() const {
  if (is_ball()) return as_ball().center;
  const auto& b = as_box();
  return 0.5 * (b.lower + b.upper);
}

const Domain::Ball& Domain::as_ball() const {
  if (!is_ball()) throw std::logic_error("domain is not a ball");
  return std::get<Ball>(shape_);
}

const Domain::Box& Domain::as_box() const {
  if (is_ball()) throw std::logic_error("domain is not a box");
  return std::get<Box>(shape_);
}

void Domain::check_dim(const Vector& p) const {
  if (p.size() != dim()) {
    std::ostringstream os;
    os << "dimension mismatch: domain has d=" << dim() << ", point has d=" << p.size();
    throw std::invalid_argument(os.str());
  }
}

namespace {

// center + radius * offset / |offset|, shrunk by ulps until the rounded result
// really lies in the ball; this makes projection exactly idempotent.
Vector onto_sphere(const Vector& center, double radius, const Vector& offset, double norm) {
  double scale = radius / norm;
  Vector q = center + scale * offset;
  while ((q - center).norm() > radius) {
    scale = std::nextafter(scale, 0.0);
    q = center + scale * offset;
  }
  return q;
}

}  // namespace

Vector Domain::project(const Vector& p) const {
  check_dim(p);
  if (is_ball()) {
    const auto& b = as_ball();
    Vector offset = p - b.center;
    const double dist = offset.norm();
    if (dist <= b.radius) return p;
    return onto_sphere(b.center, b.radius, offset, dist);
  }
  const auto& b = as_box();
  return p.cwiseMax(b.lower).cwiseMin(b.upper);
}

Vector Domain::project_limit(const Vector& from, const Vector& direction) const {
  check_dim(from);
  check_dim(direction);
  if (is_ball()) {
    const auto& b = as_ball();
    const double n = direction.norm();
    if (n == 0.0) return project(from);
    return onto_sphere(b.center, b.radius, -direction, n);
  }
  const auto& b = as_box();
  Vector out = project(from);
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (direction[i] > 0.0) {
      out[i] = b.lower[i];
    } else if (direction[i] < 0.0) {
      out[i] = b.upper[i];
    }
  }
  return out;
}

bool Domain::contains(const Vector& p, double tol) const {
  check_dim(p);
  if (is_ball()) {
    const auto& b = as_ball();
    return (p - b.center).norm() <= b.radius * (1.0 + tol) + tol;
  }
  const auto& b = as_box();
  return ((p.array() >= b.lower.array() - tol) && (p.array() <= b.upper.array() + tol)).all();
}

std::string Domain::describe() const {
  std::ostringstream os;
  if (is_ball()) {
    os << "ball(d=" << dim() << ", radius=" << as_ball().radius << ")";
  } else {
    os << "box(d=" << dim() << ")";
  }
  return os.str();
}

// ---------------------------------------------------------------------------

WeightSchedule WeightSchedule::polynomial(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw std::invalid_argument("polynomial schedule needs a finite exponent k > 0");
  }
  return WeightSchedule(Kind::kPolynomial, k);
}

WeightSchedule WeightSchedule::parse(const std::string& text) {
  if (text == "constant") return constant();
  if (text == "linear") return linear();
  const std::string prefix = "poly:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string rest = text.substr(prefix.size());
    std::size_t used = 0;
    double k = 0.0;
    try {
      k = std::stod(rest, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != rest.size()) {
      throw std::invalid_argument("bad polynomial exponent in schedule '" + text + "'");
    }
    return polynomial(k);
  }
  throw std::invalid_argument("unknown schedule '" + text +
                              "' (expected constant, linear or poly:<k>)");
}

double WeightSchedule::weight(Round t) const {
  if (t == 0) throw std::invalid_argument("weight: rounds start at t=1");
  switch (kind_) {
    case Kind::kConstant:
      return 1.0;
    case Kind::kLinear:
      return static_cast<double>(t);
    case Kind::kPolynomial:
      return std::pow(static_cast<double>(t), exponent_);
  }
  return 1.0;
}

double WeightSchedule::cumulative(Round t) const {
  const double td = static_cast<double>(t);
  switch (kind_) {
    case Kind::kConstant:
      return td;
    case Kind::kLinear:
      return td * (td + 1.0) / 2.0;
    case Kind::kPolynomial: {
      CompensatedSum s;
      for (Round i = 1; i <= t; ++i) s.add(weight(i));
      return s.value();
    }
  }
  return td;
}

std::string WeightSchedule::name() const {
  switch (kind_) {
    case Kind::kConstant:
      return "constant";
    case Kind::kLinear:
      return "linear";
    case Kind::kPolynomial: {
      std::ostringstream os;
      os << "poly:" << exponent_;
      return os.str();
    }
  }
  return "?";
}

void CompensatedSum::add(double v) {
  const double t = sum_ + v;
  if (std::abs(sum_) >= std::abs(v)) {
    compensation_ += (sum_ - t) + v;
  } else {
    compensation_ += (v - t) + sum_;
  }
  sum_ = t;
}

WeightAccumulator::Step WeightAccumulator::advance() {
  ++t_;
  const double alpha = schedule_.weight(t_);
  sum_.add(alpha);
  squares_.add(alpha * alpha);
  return Step{t_, alpha, cumulative()};
}

double WeightAccumulator::cumulative() const {
  // Closed forms are exact in double for every t reachable here.
  switch (schedule_.kind()) {
    case WeightSchedule::Kind::kConstant:
    case WeightSchedule::Kind::kLinear:
      return schedule_.cumulative(t_);
    case WeightSchedule::Kind::kPolynomial:
      return sum_.value();
  }
  return sum_.value();
}

Vector running_average_update(const Vector& x_prev, const Vector& w_new, double alpha_t,
                              double alpha_cum) {
  if (!(alpha_t > 0.0)) throw std::invalid_argument("running average: alpha_t must be > 0");
  if (!(alpha_cum >= alpha_t)) {
    throw std::invalid_argument("running average: alpha_cum must be >= alpha_t");
  }
  if (alpha_cum == alpha_t) return w_new;
  if (x_prev.size() != w_new.size()) {
    throw std::invalid_argument("running average: dimension mismatch");
  }
  const double keep = (alpha_cum - alpha_t) / alpha_cum;
  const double take = alpha_t / alpha_cum;
  return keep * x_prev + take * w_new;
}

}  // namespace anytime
