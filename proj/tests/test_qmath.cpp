#include <doctest.h>

#include <numbers>
#include <random>

#include "purodyn/qmath.hpp"
#include "test_support.hpp"

using namespace purodyn;
using testsupport::random_complex;
using testsupport::random_density;
using testsupport::random_hermitian;

TEST_SUITE_BEGIN("qmath");

TEST_CASE("kron identity cases") {
  CHECK((kron(identity(2), identity(2)) - identity(4)).norm() == 0.0);

  const ComplexMatrix zi = kron(pauli_z(), identity(2));
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(0, 0) = 1;
  expected(1, 1) = 1;
  expected(2, 2) = -1;
  expected(3, 3) = -1;
  CHECK((zi - expected).norm() == 0.0);
}

TEST_CASE("kron matches the index-formula oracle") {
  std::mt19937_64 rng(101);
  const ComplexMatrix a = random_complex(2, 2, rng);
  const ComplexMatrix b = random_complex(2, 2, rng);
  const ComplexMatrix k = kron(a, b);
  REQUIRE(k.rows() == 4);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j)
      for (Index r = 0; r < 2; ++r)
        for (Index c = 0; c < 2; ++c) {
          CHECK(k(i * 2 + r, j * 2 + c) == a(i, j) * b(r, c));
        }
}

TEST_CASE("kron mixed-product property") {
  std::mt19937_64 rng(102);
  for (int rep = 0; rep < 20; ++rep) {
    const ComplexMatrix a = random_complex(2, 2, rng);
    const ComplexMatrix b = random_complex(2, 2, rng);
    const ComplexMatrix c = random_complex(2, 2, rng);
    const ComplexMatrix d = random_complex(2, 2, rng);
    CHECK((kron(a, b) * kron(c, d) - kron((a * c).eval(), (b * d).eval())).norm() < 1e-12);
  }
}

TEST_CASE("hermitian_eig on diag(0,1)") {
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(1, 1) = 1.0;
  const EigenSystem eig = hermitian_eig(h);
  CHECK(eig.eigenvalues[0] == doctest::Approx(1.0));
  CHECK(eig.eigenvalues[1] == doctest::Approx(0.0));
  CHECK(std::abs(eig.eigenvectors(1, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(eig.eigenvectors(0, 1)) == doctest::Approx(1.0));
}

TEST_CASE("hermitian_eig on sigma_x") {
  const EigenSystem eig = hermitian_eig(pauli_x());
  CHECK(eig.eigenvalues[0] == doctest::Approx(1.0));
  CHECK(eig.eigenvalues[1] == doctest::Approx(-1.0));
  const double isq = 1.0 / std::numbers::sqrt2;
  CHECK(std::abs(eig.eigenvectors(0, 0) - isq) < 1e-12);
  CHECK(std::abs(eig.eigenvectors(1, 0) - isq) < 1e-12);
}

TEST_CASE("hermitian_eig reconstruction and unitarity on random input") {
  std::mt19937_64 rng(103);
  for (Index n : {2, 4, 8}) {
    const ComplexMatrix h = random_hermitian(n, rng);
    const EigenSystem eig = hermitian_eig(h);
    const ComplexMatrix rebuilt = eig.eigenvectors *
                                  eig.eigenvalues.cast<Complex>().asDiagonal() *
                                  eig.eigenvectors.adjoint();
    CHECK((rebuilt - h).norm() < 1e-10);
    CHECK((eig.eigenvectors.adjoint() * eig.eigenvectors - identity(n)).norm() < 1e-10);
    for (Index i = 1; i < n; ++i) CHECK(eig.eigenvalues[i - 1] >= eig.eigenvalues[i]);
  }
}

TEST_CASE("hermitian_eig phase convention is deterministic") {
  std::mt19937_64 rng(104);
  const ComplexMatrix h = random_hermitian(4, rng);
  const EigenSystem a = hermitian_eig(h);
  const EigenSystem b = hermitian_eig(h);
  CHECK((a.eigenvectors - b.eigenvectors).norm() == 0.0);
  for (Index j = 0; j < 4; ++j) {
    Index best = 0;
    for (Index i = 1; i < 4; ++i) {
      if (std::abs(a.eigenvectors(i, j)) > std::abs(a.eigenvectors(best, j))) best = i;
    }
    CHECK(a.eigenvectors(best, j).imag() == doctest::Approx(0.0));
    CHECK(a.eigenvectors(best, j).real() > 0.0);
  }
}

TEST_CASE("hermitian_eig rejects non-Hermitian input") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(hermitian_eig(m), NonHermitianInput);
}

TEST_CASE("herm_expm special values") {
  std::mt19937_64 rng(105);
  const ComplexMatrix h = random_hermitian(4, rng);
  CHECK((herm_expm(h, 0.0) - identity(4)).norm() < 1e-14);

  CHECK((herm_expm(pauli_z(), std::numbers::pi) + identity(2)).norm() < 1e-12);

  // Closed form exp(-i s sx) = cos(s) I - i sin(s) sx at s = pi/2.
  const ComplexMatrix u = herm_expm(pauli_x(), std::numbers::pi / 2.0);
  CHECK((u - (-kI * pauli_x())).norm() < 1e-12);
}

TEST_CASE("herm_expm is unitary for random generators and scales") {
  std::mt19937_64 rng(106);
  std::uniform_real_distribution<double> scale(-5.0, 5.0);
  for (int rep = 0; rep < 25; ++rep) {
    const Index n = 2 + 2 * (rep % 3);
    const ComplexMatrix h = random_hermitian(n, rng);
    const ComplexMatrix u = herm_expm(h, scale(rng));
    CHECK((u.adjoint() * u - identity(n)).norm() < 1e-12);
  }
}

TEST_CASE("partial_trace of a Bell state") {
  ComplexVector bell = ComplexVector::Zero(4);
  bell[0] = bell[3] = 1.0 / std::numbers::sqrt2;
  const ComplexMatrix rho = bell * bell.adjoint();
  const ComplexMatrix reduced = partial_trace(rho, 2, 2, Subsystem::A);
  CHECK((reduced - 0.5 * identity(2)).norm() < 1e-14);
}

TEST_CASE("partial_trace of a product state recovers the factors") {
  std::mt19937_64 rng(107);
  const ComplexMatrix rho = random_density(2, rng);
  const ComplexMatrix sigma = random_density(3, rng);
  const ComplexMatrix both = kron(rho, sigma);
  CHECK((partial_trace(both, 2, 3, Subsystem::A) - rho).norm() < 1e-13);
  CHECK((partial_trace(both, 2, 3, Subsystem::B) - sigma).norm() < 1e-13);
}

TEST_CASE("partial_trace matches the four-index summation oracle") {
  std::mt19937_64 rng(108);
  const ComplexMatrix m = random_density(4, rng);
  const ComplexMatrix reduced = partial_trace(m, 2, 2, Subsystem::A);
  for (Index i = 0; i < 2; ++i) {
    for (Index j = 0; j < 2; ++j) {
      Complex expected = 0.0;
      for (Index k = 0; k < 2; ++k) expected += m(i * 2 + k, j * 2 + k);
      CHECK(std::abs(reduced(i, j) - expected) < 1e-13);
    }
  }
}

TEST_CASE("partial_trace preserves trace and positivity") {
  std::mt19937_64 rng(109);
  for (int rep = 0; rep < 20; ++rep) {
    const ComplexMatrix m = random_density(8, rng);
    for (Subsystem keep : {Subsystem::A, Subsystem::B}) {
      const ComplexMatrix reduced = partial_trace(m, 2, 4, keep);
      CHECK(std::abs(reduced.trace() - m.trace()) < 1e-12);
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(reduced, Eigen::EigenvaluesOnly);
      CHECK(solver.eigenvalues().minCoeff() > -1e-10);
    }
  }
}

TEST_CASE("partial_trace rejects inconsistent dimensions") {
  CHECK_THROWS_AS(partial_trace(identity(4), 2, 3, Subsystem::A), DimensionMismatch);
}

TEST_SUITE_END();
