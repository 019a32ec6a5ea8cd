#include "anytime/problems.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "anytime/errors.hpp"

namespace anytime {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double softplus(double z) {
  // log(1 + e^z) without overflow.
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double logistic_value(const Matrix& X, const Vector& y, double ridge, const Vector& x) {
  const Vector margins = y.cwiseProduct(X * x);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < margins.size(); ++i) sum += softplus(-margins[i]);
  return sum / static_cast<double>(X.rows()) + 0.5 * ridge * x.squaredNorm();
}

Vector logistic_gradient(const Matrix& X, const Vector& y, double ridge, const Vector& x) {
  const Vector margins = y.cwiseProduct(X * x);
  Vector coeff(margins.size());
  for (Eigen::Index i = 0; i < margins.size(); ++i) coeff[i] = -y[i] * sigmoid(-margins[i]);
  return X.transpose() * coeff / static_cast<double>(X.rows()) + ridge * x;
}

}  // namespace

Objective Objective::quadratic(Matrix A, Vector x_star) {
  const Eigen::Index d = x_star.size();
  if (d < 1 || A.rows() != d || A.cols() != d) {
    throw std::invalid_argument("quadratic: A must be d x d with d = dim(x*) >= 1");
  }
  if (!A.allFinite() || !all_finite(x_star)) {
    throw std::invalid_argument("quadratic: non-finite data");
  }
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + A.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("quadratic: A must be symmetric");
  }
  Matrix sym = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (lo < -1e-12 * std::max(1.0, hi)) {
    throw std::invalid_argument("quadratic: A must be positive semidefinite");
  }
  Objective obj(Quadratic{std::move(sym)}, std::move(x_star));
  obj.f_star_ = 0.0;
  obj.smoothness_ = hi;
  obj.strong_convexity_ = std::max(lo, 0.0);
  return obj;
}

Objective Objective::logistic(Matrix features, Vector labels, double ridge) {
  const Eigen::Index n = features.rows();
  const Eigen::Index d = features.cols();
  if (n < 1 || d < 1 || labels.size() != n) {
    throw std::invalid_argument("logistic: need n x d features and n labels");
  }
  if (!(ridge > 0.0)) throw std::invalid_argument("logistic: ridge must be > 0");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (labels[i] != 1.0 && labels[i] != -1.0) {
      throw std::invalid_argument("logistic: labels must be +1 or -1");
    }
  }
  // Newton's method; the objective is ridge-strongly convex so this converges
  // to full precision in a handful of steps from the origin.
  Vector x = Vector::Zero(d);
  for (int it = 0; it < 100; ++it) {
    const Vector g = logistic_gradient(features, labels, ridge, x);
    if (g.norm() <= 4.0 * kEps) break;
    const Vector margins = labels.cwiseProduct(features * x);
    Vector curv(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double s = sigmoid(margins[i]);
      curv[i] = s * (1.0 - s);
    }
    Matrix H = features.transpose() * curv.asDiagonal() * features / static_cast<double>(n);
    H.diagonal().array() += ridge;
    const Vector step = H.ldlt().solve(g);
    x -= step;
    if (step.norm() <= kEps * (1.0 + x.norm())) break;
  }
  const double L = Eigen::SelfAdjointEigenSolver<Matrix>(
                       features.transpose() * features, Eigen::EigenvaluesOnly)
                           .eigenvalues()
                           .maxCoeff() /
                       (4.0 * static_cast<double>(n)) +
                   ridge;
  Objective obj(Logistic{std::move(features), std::move(labels), ridge}, x);
  const auto& body = std::get<Logistic>(obj.body_);
  obj.f_star_ = logistic_value(body.features, body.labels, ridge, x);
  obj.smoothness_ = L;
  obj.strong_convexity_ = ridge;
  return obj;
}

Objective Objective::abs_deviation(Vector targets) {
  if (targets.size() < 1) throw std::invalid_argument("abs_deviation: dimension must be >= 1");
  if (!all_finite(targets)) throw std::invalid_argument("abs_deviation: non-finite targets");
  Objective obj(AbsDeviation{}, std::move(targets));
  obj.f_star_ = 0.0;
  return obj;
}

Objective::Kind Objective::kind() const {
  if (std::holds_alternative<Quadratic>(body_)) return Kind::kQuadratic;
  if (std::holds_alternative<Logistic>(body_)) return Kind::kLogistic;
  return Kind::kAbsDeviation;
}

std::string Objective::name() const {
  switch (kind()) {
    case Kind::kQuadratic:
      return "quadratic";
    case Kind::kLogistic:
      return "logistic";
    case Kind::kAbsDeviation:
      return "absdev";
  }
  return "?";
}

void Objective::check_dim(const Vector& x) const {
  if (x.size() != dim()) {
    std::ostringstream os;
    os << name() << ": dimension mismatch (objective d=" << dim() << ", point d=" << x.size()
       << ")";
    throw std::invalid_argument(os.str());
  }
}

double Objective::value(const Vector& x) const {
  check_dim(x);
  if (const auto* q = std::get_if<Quadratic>(&body_)) {
    const Vector e = x - x_star_;
    return 0.5 * e.dot(q->A * e);
  }
  if (const auto* l = std::get_if<Logistic>(&body_)) {
    return logistic_value(l->features, l->labels, l->ridge, x);
  }
  return (x - x_star_).cwiseAbs().sum() / static_cast<double>(dim());
}

Vector Objective::gradient(const Vector& x) const {
  check_dim(x);
  if (const auto* q = std::get_if<Quadratic>(&body_)) return q->A * (x - x_star_);
  if (const auto* l = std::get_if<Logistic>(&body_)) {
    return logistic_gradient(l->features, l->labels, l->ridge, x);
  }
  const Vector e = x - x_star_;
  Vector g(e.size());
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    g[i] = e[i] > 0.0 ? 1.0 : (e[i] < 0.0 ? -1.0 : 0.0);
  }
  return g / static_cast<double>(dim());
}

double Objective::resolution(const Vector& x) const {
  check_dim(x);
  const double scale = x.cwiseAbs().maxCoeff() + x_star_.cwiseAbs().maxCoeff();
  switch (kind()) {
    case Kind::kQuadratic: {
      // Rounding in x - x* is ~eps * scale per coordinate; the quadratic form
      // of that perturbation is the floor.
      const double delta = kEps * scale;
      return 2.0 * *smoothness_ * static_cast<double>(dim()) * delta * delta;
    }
    case Kind::kLogistic:
      return 64.0 * kEps * (1.0 + std::abs(f_star_));
    case Kind::kAbsDeviation:
      return 4.0 * kEps * scale;
  }
  return 0.0;
}

double Objective::suboptimality(const Vector& x) const {
  const double gap = value(x) - f_star_;
  return std::abs(gap) <= resolution(x) ? 0.0 : gap;
}

double Objective::max_gradient_norm(const Domain& domain) const {
  if (domain.dim() != dim()) throw std::invalid_argument("gradient bound: dimension mismatch");
  // Largest distance from x* to a point of the domain (upper bound for balls).
  double reach = 0.0;
  double max_norm = 0.0;
  if (domain.is_ball()) {
    const auto& b = domain.as_ball();
    reach = b.radius + (x_star_ - b.center).norm();
    max_norm = b.radius + b.center.norm();
  } else {
    const auto& b = domain.as_box();
    reach = (b.lower - x_star_).cwiseAbs().cwiseMax((b.upper - x_star_).cwiseAbs()).norm();
    max_norm = b.lower.cwiseAbs().cwiseMax(b.upper.cwiseAbs()).norm();
  }
  switch (kind()) {
    case Kind::kQuadratic:
      return *smoothness_ * reach;
    case Kind::kLogistic: {
      const auto& l = std::get<Logistic>(body_);
      return l.features.rowwise().norm().mean() + l.ridge * max_norm;
    }
    case Kind::kAbsDeviation:
      return 1.0 / std::sqrt(static_cast<double>(dim()));
  }
  return 0.0;
}

Vector linear_spectrum(Eigen::Index dim, double lo, double hi) {
  if (dim < 1) throw std::invalid_argument("spectrum: dimension must be >= 1");
  if (!(lo >= 0.0) || !(hi >= lo)) throw std::invalid_argument("spectrum: need 0 <= lo <= hi");
  if (dim == 1) return Vector::Constant(1, hi);
  return Vector::LinSpaced(dim, lo, hi);
}

Objective make_quadratic(const Vector& spectrum, const Vector& x_star, Philox& rng) {
  const Eigen::Index d = spectrum.size();
  if (x_star.size() != d) throw std::invalid_argument("make_quadratic: dimension mismatch");
  Matrix gauss(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) gauss(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Matrix> qr(gauss);
  Matrix Q = qr.householderQ();
  // Sign fix makes Q Haar-distributed.
  const Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j) {
    if (R(j, j) < 0.0) Q.col(j) *= -1.0;
  }
  Matrix A = Q * spectrum.asDiagonal() * Q.transpose();
  A = 0.5 * (A + A.transpose());
  Objective obj = Objective::quadratic(A, x_star);
  return obj;
}

Objective make_logistic(Eigen::Index n, Eigen::Index dim, double ridge, Philox& rng) {
  Matrix X(n, dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) X(i, j) = rng.normal();
  }
  const Vector planted = rng.unit_sphere(dim);
  Vector y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sign = X.row(i).dot(planted) >= 0.0 ? 1.0 : -1.0;
    y[i] = rng.uniform() < 0.1 ? -sign : sign;
  }
  return Objective::logistic(std::move(X), std::move(y), ridge);
}

// ---------------------------------------------------------------------------

NoiseModel NoiseModel::gaussian(double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("sigma must be >= 0");
  return {Kind::kGaussian, sigma};
}

NoiseModel NoiseModel::sphere(double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("sigma must be >= 0");
  return {Kind::kSphere, sigma};
}

NoiseModel NoiseModel::parse(const std::string& kind, double sigma) {
  if (kind == "none") return none();
  if (kind == "gaussian") return gaussian(sigma);
  if (kind == "sphere") return sphere(sigma);
  throw ConfigError("unknown noise '" + kind + "' (expected none, gaussian or sphere)");
}

std::string NoiseModel::name() const {
  switch (kind) {
    case Kind::kNone:
      return "none";
    case Kind::kGaussian:
      return "gaussian";
    case Kind::kSphere:
      return "sphere";
  }
  return "?";
}

std::optional<double> NoiseModel::almost_sure_bound() const {
  switch (kind) {
    case Kind::kNone:
      return 0.0;
    case Kind::kSphere:
      return sigma;
    case Kind::kGaussian:
      return sigma == 0.0 ? std::optional<double>(0.0) : std::nullopt;
  }
  return std::nullopt;
}

Vector NoiseModel::draw(Eigen::Index dim, Philox& rng) const {
  switch (kind) {
    case Kind::kNone:
      return Vector::Zero(dim);
    case Kind::kGaussian:
      return (sigma / std::sqrt(static_cast<double>(dim))) * rng.normal_vector(dim);
    case Kind::kSphere:
      return sigma * rng.unit_sphere(dim);
  }
  return Vector::Zero(dim);
}

GradientOracleReport stochastic_gradient(const Objective& objective, const NoiseModel& noise,
                                         const Vector& x, Philox& rng) {
  GradientOracleReport r;
  const Vector exact = objective.gradient(x);
  r.true_value = objective.value(x);
  r.true_grad_norm = exact.norm();
  r.g = exact + noise.draw(x.size(), rng);
  return r;
}

StochasticOracle::StochasticOracle(std::shared_ptr<const Objective> objective, NoiseModel noise,
                                   Philox rng)
    : objective_(std::move(objective)), noise_(noise), rng_(rng) {
  if (!objective_) throw std::invalid_argument("oracle needs an objective");
}

GradientOracleReport StochasticOracle::operator()(const Vector& x) {
  return stochastic_gradient(*objective_, noise_, x, rng_);
}

double gradient_bound(const Objective& objective, const Domain& domain,
                      const NoiseModel& noise) {
  const auto noise_bound = noise.almost_sure_bound();
  if (!noise_bound) {
    throw ConfigError("gradient bound: " + noise.name() +
                      " noise has no almost-sure norm bound");
  }
  return objective.max_gradient_norm(domain) + *noise_bound;
}

}  // namespace anytime
