#include <doctest.h>

#include <random>

#include "purodyn/states.hpp"
#include "test_support.hpp"

using namespace purodyn;
using testsupport::random_density;
using testsupport::random_unitary;

TEST_SUITE_BEGIN("states");

TEST_CASE("density matrix validation") {
  CHECK_NOTHROW(DensityMatrix(0.5 * identity(2)));

  ComplexMatrix bad_trace = identity(2);
  CHECK_THROWS_AS(DensityMatrix{bad_trace}, InvalidDensityMatrix);

  ComplexMatrix not_herm = 0.5 * identity(2);
  not_herm(0, 1) = Complex(0.0, 1e-3);
  CHECK_THROWS_AS(DensityMatrix{not_herm}, InvalidDensityMatrix);

  ComplexMatrix negative(2, 2);
  negative << 1.5, 0, 0, -0.5;
  CHECK_THROWS_AS(DensityMatrix{negative}, InvalidDensityMatrix);
}

TEST_CASE("spectral_decompose basics") {
  const SpectralDecomposition mixed = spectral_decompose(DensityMatrix(0.5 * identity(2)));
  CHECK(mixed.weights[0] == doctest::Approx(0.5));
  CHECK(mixed.weights[1] == doctest::Approx(0.5));

  ComplexMatrix excited = ComplexMatrix::Zero(2, 2);
  excited(1, 1) = 1.0;
  const SpectralDecomposition pure = spectral_decompose(DensityMatrix(excited));
  CHECK(pure.weights[0] == doctest::Approx(1.0));
  CHECK(pure.weights[1] == doctest::Approx(0.0));
  CHECK(std::abs(pure.states[0].amplitudes()[1]) == doctest::Approx(1.0));

  ComplexMatrix diag(2, 2);
  diag << 0.7, 0, 0, 0.3;
  const SpectralDecomposition d = spectral_decompose(DensityMatrix(diag));
  CHECK(d.weights[0] == doctest::Approx(0.7));
  CHECK(d.weights[1] == doctest::Approx(0.3));
}

TEST_CASE("spectral weights form a probability vector and reconstruct") {
  std::mt19937_64 rng(201);
  for (int rep = 0; rep < 25; ++rep) {
    const Index n = rep % 2 ? 2 : 4;
    const DensityMatrix rho(random_density(n, rng));
    const SpectralDecomposition spec = spectral_decompose(rho);
    CHECK(spec.weights.sum() == doctest::Approx(1.0).epsilon(1e-10));
    ComplexMatrix rebuilt = ComplexMatrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
      CHECK(spec.weights[i] > -1e-10);
      CHECK(spec.weights[i] < 1.0 + 1e-10);
      rebuilt += spec.weights[i] * spec.states[static_cast<std::size_t>(i)].outer();
    }
    CHECK((rebuilt - rho.matrix()).norm() < 1e-10);
  }
}

TEST_CASE("purify of the maximally mixed state is maximally entangled") {
  const PureState psi = purify(DensityMatrix(0.5 * identity(2)));
  REQUIRE(psi.dim() == 4);
  const ComplexMatrix reduced = partial_trace(psi.outer(), 2, 2, Subsystem::A);
  CHECK((reduced - 0.5 * identity(2)).norm() < 1e-12);
}

TEST_CASE("purify of a pure state is a product with the first bath vector") {
  ComplexMatrix excited = ComplexMatrix::Zero(2, 2);
  excited(1, 1) = 1.0;
  const PureState psi = purify(DensityMatrix(excited));
  ComplexVector expected = ComplexVector::Zero(4);
  expected[2] = 1.0;  // |1> (x) |b0>
  CHECK(std::abs(std::abs(psi.amplitudes().dot(expected)) - 1.0) < 1e-12);
}

TEST_CASE("purification round trip for random states of dims 2 and 4") {
  std::mt19937_64 rng(202);
  for (int rep = 0; rep < 100; ++rep) {
    const Index n = rep % 2 ? 2 : 4;
    const DensityMatrix rho(random_density(n, rng));
    const PureState psi = purify(rho);
    const ComplexMatrix reduced = partial_trace(psi.outer(), n, n, Subsystem::A);
    CHECK((reduced - rho.matrix()).norm() < 1e-12);
  }
}

TEST_CASE("purify is bath-basis gauge invariant on the reduced state") {
  std::mt19937_64 rng(203);
  for (int rep = 0; rep < 10; ++rep) {
    const DensityMatrix rho(random_density(2, rng));
    const ComplexMatrix basis = random_unitary(2, rng);
    const PureState psi = purify(rho, basis);
    const ComplexMatrix reduced = partial_trace(psi.outer(), 2, 2, Subsystem::A);
    CHECK((reduced - rho.matrix()).norm() < 1e-12);
  }
}

TEST_CASE("purify rejects a non-unitary bath basis") {
  ComplexMatrix basis = identity(2);
  basis(0, 0) = 2.0;
  CHECK_THROWS_AS(purify(DensityMatrix(0.5 * identity(2)), basis), NonUnitaryBasis);
}

TEST_CASE("extend_product") {
  ComplexMatrix excited = ComplexMatrix::Zero(2, 2);
  excited(1, 1) = 1.0;
  ComplexMatrix ground = ComplexMatrix::Zero(2, 2);
  ground(0, 0) = 1.0;
  const DensityMatrix joint = extend_product(DensityMatrix(excited), DensityMatrix(ground));
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(2, 2) = 1.0;  // |10><10|
  CHECK((joint.matrix() - expected).norm() < 1e-14);

  const DensityMatrix mixed =
      extend_product(DensityMatrix(0.5 * identity(2)), DensityMatrix(0.5 * identity(2)));
  CHECK((mixed.matrix() - 0.25 * identity(4)).norm() < 1e-14);

  std::mt19937_64 rng(204);
  const ComplexMatrix rho = random_density(2, rng);
  const ComplexMatrix sigma = random_density(2, rng);
  const DensityMatrix prod = extend_product(DensityMatrix(rho), DensityMatrix(sigma));
  CHECK((partial_trace(prod.matrix(), 2, 2, Subsystem::A) - rho).norm() < 1e-13);
}

TEST_CASE("bloch conversions") {
  ComplexMatrix ground = ComplexMatrix::Zero(2, 2);
  ground(0, 0) = 1.0;
  const BlochVector g = density_to_bloch(DensityMatrix(ground));
  CHECK(g.x == doctest::Approx(0.0));
  CHECK(g.y == doctest::Approx(0.0));
  CHECK(g.z == doctest::Approx(1.0));

  const BlochVector center = density_to_bloch(DensityMatrix(0.5 * identity(2)));
  CHECK(center.norm() < 1e-14);

  const BlochVector v{0.3, -0.4, 0.5};
  const BlochVector round = density_to_bloch(bloch_to_density(v));
  CHECK(std::abs(round.x - v.x) < 1e-14);
  CHECK(std::abs(round.y - v.y) < 1e-14);
  CHECK(std::abs(round.z - v.z) < 1e-14);

  CHECK_THROWS_AS(bloch_to_density({1.0, 1.0, 1.0}), BlochNormExceeded);
  CHECK_THROWS_AS(density_to_bloch(DensityMatrix(0.25 * identity(4))), DimensionMismatch);
}

TEST_CASE("trace_distance values") {
  const DensityMatrix mixed(0.5 * identity(2));
  CHECK(trace_distance(mixed, mixed) == doctest::Approx(0.0));

  ComplexMatrix g = ComplexMatrix::Zero(2, 2);
  g(0, 0) = 1.0;
  ComplexMatrix e = ComplexMatrix::Zero(2, 2);
  e(1, 1) = 1.0;
  CHECK(trace_distance(DensityMatrix(g), DensityMatrix(e)) == doctest::Approx(1.0));
  CHECK(trace_distance(mixed, DensityMatrix(g)) == doctest::Approx(0.5));
}

TEST_CASE("trace_distance triangle inequality on random triples") {
  std::mt19937_64 rng(205);
  for (int rep = 0; rep < 30; ++rep) {
    const DensityMatrix a(random_density(2, rng));
    const DensityMatrix b(random_density(2, rng));
    const DensityMatrix c(random_density(2, rng));
    CHECK(trace_distance(a, c) <= trace_distance(a, b) + trace_distance(b, c) + 1e-10);
  }
}

TEST_CASE("state_fidelity range and extremes") {
  std::mt19937_64 rng(206);
  ComplexMatrix g = ComplexMatrix::Zero(2, 2);
  g(0, 0) = 1.0;
  ComplexMatrix e = ComplexMatrix::Zero(2, 2);
  e(1, 1) = 1.0;
  CHECK(state_fidelity(DensityMatrix(g), DensityMatrix(g)) == doctest::Approx(1.0));
  CHECK(state_fidelity(DensityMatrix(g), DensityMatrix(e)) == doctest::Approx(0.0));
  for (int rep = 0; rep < 10; ++rep) {
    const DensityMatrix a(random_density(2, rng));
    const DensityMatrix b(random_density(2, rng));
    const double f = state_fidelity(a, b);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
  }
}

TEST_SUITE_END();
