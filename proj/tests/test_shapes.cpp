#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "purodyn/qmath.hpp"
#include "purodyn/shapes.hpp"
#include "test_support.hpp"

using namespace purodyn;

TEST_SUITE_BEGIN("shapes");

TEST_CASE("envelope values") {
  CHECK(eval_envelope(ExponentialEnvelope{0.7}, 0.0) == doctest::Approx(1.0));
  CHECK(eval_envelope(SinSquaredEnvelope{}, 0.0) == doctest::Approx(0.0));
  CHECK(eval_envelope(ConstantEnvelope{0.25}, 17.0) == doctest::Approx(0.25));

  // Peak of a single Gaussian: a / (b sqrt(2 pi)).
  GaussianTrainEnvelope g;
  g.pulses.push_back({5.0, 2.0, 0.5});
  CHECK(eval_envelope(g, 5.0) ==
        doctest::Approx(2.0 / (0.5 * std::sqrt(2.0 * std::numbers::pi))));
  CHECK(eval_envelope(g, 5.0) == doctest::Approx(1.5957691216057308));
}

TEST_CASE("gaussian train is the sum of its pulses") {
  GaussianTrainEnvelope train;
  train.pulses.push_back({2.0, 1.5, 0.7});
  train.pulses.push_back({6.0, -0.4, 1.3});
  train.pulses.push_back({9.0, 2.2, 0.5});
  for (double t : {0.0, 2.0, 4.5, 8.0, 11.0}) {
    double sum = 0.0;
    for (const GaussianPulse& p : train.pulses) {
      GaussianTrainEnvelope single;
      single.pulses.push_back(p);
      sum += eval_envelope(single, t);
    }
    CHECK(std::abs(eval_envelope(train, t) - sum) < 1e-14);
  }
}

TEST_CASE("envelope derivatives match central differences") {
  const EnvelopeSpec exp_env = ExponentialEnvelope{0.8};
  GaussianTrainEnvelope train;
  train.pulses.push_back({3.0, 1.2, 0.6});
  train.pulses.push_back({7.0, 0.5, 1.5});
  const EnvelopeSpec train_env = train;

  const double h = 1e-5;
  for (double t : {0.5, 2.0, 3.0, 5.5}) {
    const double numeric_exp =
        (eval_envelope(exp_env, t + h) - eval_envelope(exp_env, t - h)) / (2 * h);
    const double analytic_exp = -0.8 * std::exp(-0.8 * t);
    CHECK(std::abs(numeric_exp - analytic_exp) < 1e-6);

    const double numeric_train =
        (eval_envelope(train_env, t + h) - eval_envelope(train_env, t - h)) / (2 * h);
    double analytic_train = 0.0;
    for (const GaussianPulse& p : train.pulses) {
      const double u = (t - p.center) / p.width;
      analytic_train += p.amplitude / (p.width * std::sqrt(2.0 * std::numbers::pi)) *
                        std::exp(-0.5 * u * u) * (-u / p.width);
    }
    CHECK(std::abs(numeric_train - analytic_train) < 1e-6);
  }
}

TEST_CASE("params_to_hermitian layout") {
  RealVector zero = RealVector::Zero(4);
  CHECK(params_to_hermitian(zero, 2).norm() == 0.0);

  RealVector v(4);
  v << 0.0, 0.0, 1.0, 0.0;  // diagonal (0, 0), upper (re=1, im=0)
  const ComplexMatrix h = params_to_hermitian(v, 2);
  ComplexMatrix sx(2, 2);
  sx << 0, 1, 1, 0;
  CHECK((h - sx).norm() == 0.0);
}

TEST_CASE("hermitian parameterization is a bijection") {
  std::mt19937_64 rng(401);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (Index n : {2, 3, 4}) {
    RealVector v(n * n);
    for (Index i = 0; i < v.size(); ++i) v[i] = dist(rng);
    const ComplexMatrix h = params_to_hermitian(v, n);
    CHECK(hermiticity_residual(h) == 0.0);
    const RealVector round = hermitian_to_params(h);
    CHECK((round - v).norm() < 1e-15);
  }
}

TEST_CASE("parameterization errors") {
  CHECK_THROWS_AS(params_to_hermitian(RealVector::Zero(5), 2), LengthMismatch);
  ComplexMatrix bad(2, 2);
  bad << 0, 1, 0, 0;
  CHECK_THROWS_AS(hermitian_to_params(bad), NonHermitianInput);
}

TEST_CASE("build_interaction") {
  InteractionSpec zero{ConstantEnvelope{0.0}, RealVector::Zero(16), 4};
  CHECK(build_interaction(zero, 3.7).norm() == 0.0);

  std::mt19937_64 rng(402);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  RealVector v(16);
  for (Index i = 0; i < 16; ++i) v[i] = dist(rng);
  InteractionSpec spec{ExponentialEnvelope{1.0}, v, 4};

  // envelope(0) = 1 recovers the decoded generator
  CHECK((build_interaction(spec, 0.0) - params_to_hermitian(v, 4)).norm() == 0.0);

  // far tail is numerically gone
  CHECK(build_interaction(spec, 100.0).norm() <=
        std::exp(-100.0) * params_to_hermitian(v, 4).norm() + 1e-300);

  // Hermitian at every time for random parameters
  for (double t : {0.3, 1.7, 9.0}) {
    CHECK(hermiticity_residual(build_interaction(spec, t)) < 1e-14);
  }
}

TEST_SUITE_END();
