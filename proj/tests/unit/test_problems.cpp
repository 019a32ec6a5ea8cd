#include <doctest.h>

#include <cmath>
#include <memory>

#include "anytime/errors.hpp"
#include "anytime/problems.hpp"
#include "anytime/rng.hpp"
#include "test_support.hpp"

using namespace anytime;
using testing_support::random_point_in;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

// Central differences with step h, computed coordinate by coordinate.
Vector finite_difference(const Objective& f, const Vector& x, double h) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f.value(xp) - f.value(xm)) / (2.0 * h);
  }
  return g;
}

Objective sample_quadratic(std::uint64_t seed) {
  Philox rng(seed);
  return make_quadratic(linear_spectrum(8, 0.1, 1.0), 0.7 * rng.unit_sphere(8), rng);
}

Objective sample_logistic(std::uint64_t seed) {
  Philox rng(seed);
  return make_logistic(120, 6, 0.05, rng);
}

}  // namespace

TEST_CASE("objective values") {
  const auto q = Objective::quadratic(Matrix::Identity(2, 2), Vector::Zero(2));
  CHECK(q.value(Vector::Zero(2)) == 0.0);
  CHECK(q.value(vec({3, 4})) == doctest::Approx(12.5));
  const auto a = Objective::abs_deviation(vec({0}));
  CHECK(a.value(vec({-2})) == 2.0);
  CHECK_THROWS_AS(q.value(vec({1, 2, 3})), std::invalid_argument);
}

TEST_CASE("objective metadata") {
  const auto q = Objective::quadratic(vec({1, 4}).asDiagonal(), vec({0.5, -0.5}));
  CHECK(*q.smoothness() == doctest::Approx(4.0));
  CHECK(*q.strong_convexity() == doctest::Approx(1.0));
  CHECK(q.f_star() == 0.0);
  CHECK(q.value(q.x_star()) == q.f_star());
  CHECK(q.gradient(q.x_star()).norm() == 0.0);
  CHECK(q.name() == "quadratic");

  const auto a = Objective::abs_deviation(vec({1, -1}));
  CHECK_FALSE(a.smoothness().has_value());
  CHECK(a.name() == "absdev");
  CHECK(a.f_star() == 0.0);
  CHECK(a.gradient(vec({1, 0})) == vec({0, 0.5}));

  const auto l = sample_logistic(1);
  CHECK(l.name() == "logistic");
  CHECK(l.value(l.x_star()) == doctest::Approx(l.f_star()));
  CHECK(l.gradient(l.x_star()).norm() <= 1e-12);
  CHECK(*l.strong_convexity() == 0.05);
}

TEST_CASE("quadratic construction is validated") {
  Matrix nonsym(2, 2);
  nonsym << 1, 2, 0, 1;
  CHECK_THROWS_AS(Objective::quadratic(nonsym, Vector::Zero(2)), std::invalid_argument);
  CHECK_THROWS_AS(Objective::quadratic(vec({1, -1}).asDiagonal(), Vector::Zero(2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(Objective::quadratic(Matrix::Identity(3, 3), Vector::Zero(2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(Objective::logistic(Matrix::Ones(3, 2), vec({1, -1, 0.5}), 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(Objective::logistic(Matrix::Ones(3, 2), vec({1, -1, 1}), 0.0),
                  std::invalid_argument);
}

TEST_CASE("generated quadratic has exactly the requested spectrum") {
  Philox rng(4);
  const Vector spec = linear_spectrum(10, 0.1, 1.0);
  CHECK(spec[0] == 0.1);
  CHECK(spec[9] == 1.0);
  const Vector xs = rng.unit_sphere(10);
  const auto q = make_quadratic(spec, xs, rng);
  CHECK(*q.smoothness() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*q.strong_convexity() == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(q.x_star() == xs);
  // Rayleigh quotients lie inside the spectrum, and the rotation is not trivial.
  for (int i = 0; i < 100; ++i) {
    const Vector v = rng.normal_vector(10);
    const double rq = 2.0 * q.value(xs + v) / v.squaredNorm();
    CHECK(rq >= 0.1 - 1e-12);
    CHECK(rq <= 1.0 + 1e-12);
  }
  const Vector e0 = Vector::Unit(10, 0);
  CHECK(std::abs(2.0 * q.value(xs + e0) - 0.1) > 1e-3);
}

TEST_CASE("same problem seed gives the same instance") {
  const auto a = sample_quadratic(9), b = sample_quadratic(9), c = sample_quadratic(10);
  const Vector x = Vector::Constant(8, 0.2);
  CHECK(a.value(x) == b.value(x));
  CHECK(a.value(x) != c.value(x));
}

TEST_CASE("analytic gradients match central finite differences") {
  Philox rng(5);
  for (const auto& obj : {sample_quadratic(1), sample_logistic(2)}) {
    const double scale = 1.0 + obj.x_star().norm();
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Vector x = obj.x_star() + scale * rng.normal_vector(obj.dim());
      const Vector g = obj.gradient(x);
      const Vector fd = finite_difference(obj, x, 1e-5);
      worst = std::max(worst, (g - fd).norm() / std::max(g.norm(), 1e-3));
    }
    INFO(obj.name());
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("self-bounding inequality |grad|^2 <= 2 L gap") {
  Philox rng(6);
  for (const auto& obj : {sample_quadratic(3), sample_logistic(4)}) {
    const double L = *obj.smoothness();
    for (int i = 0; i < 1000; ++i) {
      const Vector x = obj.x_star() + 2.0 * rng.normal_vector(obj.dim());
      const double lhs = obj.gradient(x).squaredNorm();
      const double gap = obj.value(x) - obj.f_star();
      CHECK(lhs <= 2.0 * L * gap * (1.0 + 1e-9) + 1e-12);
    }
  }
}

TEST_CASE("suboptimality flushes rounding noise and nothing more") {
  const auto q = sample_quadratic(7);
  CHECK(q.suboptimality(q.x_star()) == 0.0);
  Philox rng(8);
  for (int i = 0; i < 1000; ++i) {
    const Vector near = q.x_star() + 1e-9 * rng.uniform() * rng.normal_vector(8);
    CHECK(q.suboptimality(near) >= 0.0);
    CHECK(q.suboptimality(near) <= q.value(near) + q.resolution(near));
  }
  const Vector off = q.x_star() + Vector::Constant(8, 1e-4);
  CHECK(q.suboptimality(off) == doctest::Approx(q.value(off)));
  CHECK(q.resolution(off) < 1e-3 * q.value(off));
}

TEST_CASE("noiseless oracle returns the exact gradient") {
  const auto q = Objective::quadratic(Matrix::Identity(2, 2), Vector::Zero(2));
  Philox rng(0);
  const auto r = stochastic_gradient(q, NoiseModel::none(), vec({1, 2}), rng);
  CHECK(r.g == vec({1, 2}));
  CHECK(r.true_value == doctest::Approx(2.5));
  CHECK(r.true_grad_norm == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("gaussian noise moments") {
  const Eigen::Index d = 5;
  const double sigma = 1.3;
  const auto q = Objective::quadratic(Matrix::Identity(d, d), Vector::Zero(d));
  const Vector x = Vector::LinSpaced(d, -1.0, 1.0);
  Philox rng(123);
  const int n = 100000;
  Vector mean = Vector::Zero(d);
  double sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto r = stochastic_gradient(q, NoiseModel::gaussian(sigma), x, rng);
    mean += r.g;
    sq += (r.g - x).squaredNorm();
  }
  mean /= n;
  const double tol = 4.0 * sigma / std::sqrt(static_cast<double>(n * d));
  for (Eigen::Index i = 0; i < d; ++i) CHECK(std::abs(mean[i] - x[i]) <= tol);
  CHECK(std::abs(sq / n - sigma * sigma) <= 0.05 * sigma * sigma);
}

TEST_CASE("sphere noise has norm exactly sigma") {
  const auto q = sample_quadratic(8);
  Philox rng(77);
  const Vector x = Vector::Constant(8, 0.1);
  for (int i = 0; i < 1000; ++i) {
    const auto r = stochastic_gradient(q, NoiseModel::sphere(0.7), x, rng);
    CHECK(std::abs((r.g - q.gradient(x)).norm() - 0.7) <= 1e-12);
  }
}

TEST_CASE("replaying the noise stream reproduces gradients bit for bit") {
  auto obj = std::make_shared<const Objective>(sample_logistic(3));
  StochasticOracle a(obj, NoiseModel::gaussian(1.0), Philox::for_purpose(5, "noise"));
  StochasticOracle b(obj, NoiseModel::gaussian(1.0), Philox::for_purpose(5, "noise"));
  StochasticOracle c(obj, NoiseModel::gaussian(1.0), Philox::for_purpose(6, "noise"));
  const Vector x = Vector::Constant(6, 0.3);
  for (int i = 0; i < 50; ++i) {
    const Vector ga = a(x).g;
    CHECK(ga == b(x).g);
    CHECK(ga != c(x).g);
  }
}

TEST_CASE("gradient bounds") {
  const auto id = Objective::quadratic(Matrix::Identity(2, 2), vec({0.3, -0.2}));
  const Domain around = Domain::ball(vec({0.3, -0.2}), 1.0);
  CHECK(gradient_bound(id, around, NoiseModel::none()) == doctest::Approx(1.0));
  CHECK(gradient_bound(id, around, NoiseModel::sphere(0.5)) == doctest::Approx(1.5));
  CHECK_THROWS_AS(gradient_bound(id, around, NoiseModel::gaussian(0.5)), ConfigError);

  const auto diag = Objective::quadratic(vec({1, 4}).asDiagonal(), Vector::Zero(2));
  CHECK(gradient_bound(diag, Domain::centered_ball(2, 2.0), NoiseModel::none()) ==
        doctest::Approx(8.0));

  // The bound dominates the gradient norm everywhere in the domain.
  Philox rng(9);
  for (const auto& obj : {sample_quadratic(11), sample_logistic(12)}) {
    const Domain dom = Domain::centered_ball(obj.dim(), 2.0);
    const double G = gradient_bound(obj, dom, NoiseModel::none());
    for (int i = 0; i < 1000; ++i) {
      CHECK(obj.gradient(random_point_in(dom, rng)).norm() <= G * (1.0 + 1e-12));
    }
  }
  const auto ad = Objective::abs_deviation(Vector::Zero(4));
  CHECK(gradient_bound(ad, Domain::centered_ball(4, 1.0), NoiseModel::none()) ==
        doctest::Approx(0.5));
}

TEST_CASE("noise model parsing") {
  CHECK(NoiseModel::parse("none", 0.0).kind == NoiseModel::Kind::kNone);
  CHECK(NoiseModel::parse("sphere", 0.5).almost_sure_bound() == 0.5);
  CHECK_FALSE(NoiseModel::parse("gaussian", 0.5).almost_sure_bound().has_value());
  CHECK_THROWS_AS(NoiseModel::parse("laplace", 0.5), ConfigError);
  CHECK_THROWS_AS(NoiseModel::sphere(-1.0), std::invalid_argument);
}
