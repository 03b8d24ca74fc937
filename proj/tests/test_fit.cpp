#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "purodyn/fit.hpp"
#include "test_support.hpp"

using namespace purodyn;

TEST_SUITE_BEGIN("fit");

TEST_CASE("quadratic bowl converges quickly") {
  RealVector c(3);
  c << 0.4, -1.1, 2.0;
  const Objective objective = [&](const RealVector& x) { return (x - c).squaredNorm(); };
  std::mt19937_64 rng(601);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  RealVector x0(3);
  for (Index i = 0; i < 3; ++i) x0[i] = dist(rng);

  OptimizerConfig cfg;
  cfg.restarts = 1;
  cfg.max_iterations = 50;
  cfg.gradient_tolerance = 1e-9;
  const FitResult fit = optimize(objective, x0, cfg);
  CHECK(fit.best_value < 1e-12);
  CHECK((fit.best_params - c).norm() < 1e-6);
  CHECK(fit.iterations < 50);
}

TEST_CASE("rosenbrock reaches the global minimum") {
  const Objective rosenbrock = [](const RealVector& x) {
    const double a = 1.0 - x[0];
    const double b = x[1] - x[0] * x[0];
    return a * a + 100.0 * b * b;
  };
  RealVector x0(2);
  x0 << -1.2, 1.0;
  OptimizerConfig cfg;
  cfg.restarts = 1;
  cfg.max_iterations = 500;
  cfg.gradient_tolerance = 1e-10;
  cfg.fd_step = 1e-7;
  const FitResult fit = optimize(rosenbrock, x0, cfg);
  CHECK(fit.best_value < 1e-6);
  CHECK(std::abs(fit.best_params[0] - 1.0) < 1e-3);
  CHECK(std::abs(fit.best_params[1] - 1.0) < 1e-3);
}

TEST_CASE("bounds clip the optimum to the box corner") {
  RealVector c(2);
  c << 2.0, 2.0;
  const Objective objective = [&](const RealVector& x) { return (x - c).squaredNorm(); };
  OptimizerConfig cfg;
  cfg.restarts = 2;
  cfg.max_iterations = 100;
  cfg.bounds = std::vector<std::pair<double, double>>{{0.0, 1.0}, {0.0, 1.0}};
  const FitResult fit = optimize(objective, RealVector::Zero(2), cfg);
  CHECK(std::abs(fit.best_params[0] - 1.0) < 1e-8);
  CHECK(std::abs(fit.best_params[1] - 1.0) < 1e-8);
}

TEST_CASE("value history never increases and never exceeds f(x0)") {
  std::mt19937_64 rng(602);
  const ComplexMatrix target = testsupport::random_hermitian(3, rng);
  const Objective objective = [&](const RealVector& x) {
    return (params_to_hermitian(x, 3) - target).squaredNorm();
  };
  const RealVector x0 = RealVector::Zero(9);
  OptimizerConfig cfg;
  cfg.restarts = 3;
  cfg.max_iterations = 60;
  const FitResult fit = optimize(objective, x0, cfg);
  CHECK(fit.best_value <= objective(x0));
  for (std::size_t k = 1; k < fit.value_history.size(); ++k) {
    CHECK(fit.value_history[k] <= fit.value_history[k - 1]);
  }
}

TEST_CASE("fixed seed gives bit-identical results") {
  const Objective objective = [](const RealVector& x) {
    return std::pow(x[0] - 0.3, 2) * (1.0 + std::sin(3.0 * x[1]) * 0.2) +
           std::pow(x[1] + 0.7, 2);
  };
  OptimizerConfig cfg;
  cfg.restarts = 4;
  cfg.max_iterations = 80;
  cfg.seed = 42;
  RealVector x0(2);
  x0 << 0.9, 0.9;
  const FitResult a = optimize(objective, x0, cfg);
  const FitResult b = optimize(objective, x0, cfg);
  REQUIRE(a.best_params.size() == b.best_params.size());
  CHECK(std::memcmp(a.best_params.data(), b.best_params.data(),
                    sizeof(double) * a.best_params.size()) == 0);
  CHECK(std::memcmp(&a.best_value, &b.best_value, sizeof(double)) == 0);
  CHECK(a.iterations == b.iterations);
  CHECK(a.value_history == b.value_history);
}

TEST_CASE("non-finite objectives are reported") {
  const Objective objective = [](const RealVector& x) { return std::sqrt(x[0]); };
  RealVector x0(1);
  x0 << -1.0;
  OptimizerConfig cfg;
  CHECK_THROWS_AS(optimize(objective, x0, cfg), ObjectiveNonFinite);
}

TEST_CASE("central differences show second-order Richardson behavior") {
  const Objective objective = [](const RealVector& x) {
    return std::sin(x[0]) * std::exp(0.5 * x[1]) + x[0] * x[1];
  };
  RealVector x(2);
  x << 0.7, -0.4;
  RealVector exact(2);
  exact << std::cos(0.7) * std::exp(-0.2) + (-0.4),
      0.5 * std::sin(0.7) * std::exp(-0.2) + 0.7;

  const double h = 1e-3;
  const double err_h = (fd_gradient(objective, x, h) - exact).norm();
  const double err_h2 = (fd_gradient(objective, x, h / 2.0) - exact).norm();
  const double factor = err_h / err_h2;
  CHECK(factor > 3.0);
  CHECK(factor < 6.0);
}

TEST_CASE("dissipator match vanishes for a matched pair") {
  LindbladModel model = decay_channel_model();
  model.channels.clear();  // no dissipation
  const std::vector<DensityMatrix> probes = {DensityMatrix(0.5 * identity(2))};
  CHECK(objective_dissipator_match(RealVector::Zero(16), model, probes) ==
        doctest::Approx(0.0));
}

TEST_CASE("dissipator match equals the plain dissipator norm for empty channels") {
  std::mt19937_64 rng(603);
  LindbladModel model = decay_channel_model();
  model.channels.clear();
  ComplexMatrix diag(2, 2);
  diag << 0.7, 0, 0, 0.3;
  const std::vector<DensityMatrix> probes = {DensityMatrix(diag)};
  const RealVector params = hermitian_to_params(testsupport::random_hermitian(4, rng));
  const double value = objective_dissipator_match(params, model, probes);
  const double direct =
      effective_dissipator(params_to_hermitian(params, 4), probes[0]).squaredNorm();
  CHECK(value == doctest::Approx(direct));
}

TEST_CASE("decay-channel dissipator match optimizes to the regression baseline") {
  const LindbladModel model = decay_channel_model();
  ComplexMatrix d1(2, 2), d2(2, 2);
  d1 << 0.7, 0, 0, 0.3;
  d2 << 0.3, 0, 0, 0.7;
  const std::vector<DensityMatrix> probes = {DensityMatrix(0.5 * identity(2)),
                                             DensityMatrix(d1), DensityMatrix(d2)};
  const Objective objective = [&](const RealVector& p) {
    return objective_dissipator_match(p, model, probes);
  };
  OptimizerConfig cfg;
  cfg.restarts = 4;
  cfg.max_iterations = 300;
  cfg.gradient_tolerance = 1e-12;
  cfg.seed = 9;
  const FitResult fit = optimize(objective, RealVector::Zero(16), cfg);
  // The maximally mixed probe pins its sector's coupling to zero, so the
  // probe family admits no exact static solution; the reachable floor is
  // 0.0032/1.84 = 1.73913e-3, frozen here as the regression baseline.
  CHECK(fit.best_value < 1.7395e-3);
  CHECK(fit.best_value < objective(RealVector::Zero(16)));
}

TEST_CASE("terminal objective of the orthogonal target is 2") {
  const ComplexMatrix h = [] {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(1, 1) = 1.0;
    return m;
  }();
  ComplexVector psi0 = ComplexVector::Zero(4);
  psi0[2] = 1.0;  // |1>(x)|0>
  const PropagationProblem problem{
      [&](const RealVector& p) {
        return TotalHamiltonian::make(h, h, InteractionSpec{ConstantEnvelope{0.0}, p, 4});
      },
      PureState(psi0),
      {0.0, 20.0},
      {0.01}};
  ComplexMatrix ground = ComplexMatrix::Zero(2, 2);
  ground(0, 0) = 1.0;
  const double value =
      objective_terminal(RealVector::Zero(16), DensityMatrix(ground), 20.0, problem);
  CHECK(value == doctest::Approx(2.0));
}

TEST_CASE("trajectory objective is zero against itself and flags bad grids") {
  std::mt19937_64 rng(604);
  const ComplexMatrix h = testsupport::random_hermitian(2, rng);
  LindbladModel model;
  model.hamiltonian = h;
  const std::vector<double> grid = {0.0, 0.1, 0.2, 0.3};
  ComplexMatrix rho0m = testsupport::random_density(2, rng);
  const DensityMatrix rho0(rho0m);
  const Trajectory target = integrate(model, rho0, grid);

  const PropagationProblem problem{
      [&](const RealVector& p) {
        return TotalHamiltonian::make(h, ComplexMatrix::Zero(2, 2),
                                      InteractionSpec{ConstantEnvelope{0.0}, p, 4});
      },
      purify(rho0), grid, {1e-3}};
  const double self = objective_trajectory(RealVector::Zero(16), target, problem);
  CHECK(self < 1e-10);

  Trajectory off_grid = target;
  off_grid.times[1] = 0.15;
  CHECK_THROWS_AS(objective_trajectory(RealVector::Zero(16), off_grid, problem),
                  GridMismatch);
}

TEST_CASE("unitary infidelity is phase invariant and bounded") {
  std::mt19937_64 rng(605);
  const ComplexMatrix u = testsupport::random_unitary(4, rng);
  CHECK(unitary_infidelity(u, u) == doctest::Approx(0.0));
  const ComplexMatrix phased = std::exp(Complex(0.0, 0.83)) * u;
  CHECK(unitary_infidelity(u, phased) == doctest::Approx(0.0));

  const ComplexMatrix v = testsupport::random_unitary(4, rng);
  const double inf = unitary_infidelity(u, v);
  CHECK(inf > 0.0);
  CHECK(inf <= 1.0);

  CHECK_THROWS_AS(unitary_infidelity(u, (2.0 * v).eval()), NonUnitaryTarget);
}

TEST_SUITE_END();
