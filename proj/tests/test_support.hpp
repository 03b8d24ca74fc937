#pragma once

// Seeded random-matrix helpers shared by the test suites. Everything here is
// independent of the library's solver paths so it can serve as an oracle.

#include <random>

#include "purodyn/types.hpp"

namespace testsupport {

using purodyn::Complex;
using purodyn::ComplexMatrix;
using purodyn::ComplexVector;
using purodyn::Index;

inline ComplexMatrix random_complex(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = Complex(dist(rng), dist(rng));
  return m;
}

inline ComplexMatrix random_hermitian(Index n, std::mt19937_64& rng) {
  const ComplexMatrix a = random_complex(n, n, rng);
  return 0.5 * (a + a.adjoint());
}

// Ginibre construction: G G^+ normalized to unit trace is a valid density
// matrix for any G.
inline ComplexMatrix random_density(Index n, std::mt19937_64& rng) {
  const ComplexMatrix g = random_complex(n, n, rng);
  ComplexMatrix m = g * g.adjoint();
  m /= m.trace().real();
  return 0.5 * (m + m.adjoint());
}

inline ComplexMatrix random_unitary(Index n, std::mt19937_64& rng) {
  const ComplexMatrix a = random_complex(n, n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(a);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < n; ++i) {
    const Complex d = r(i, i);
    q.col(i) *= std::abs(d) > 0 ? d / std::abs(d) : Complex(1, 0);
  }
  return q;
}

inline ComplexVector random_state(Index n, std::mt19937_64& rng) {
  ComplexVector v = random_complex(n, 1, rng);
  return v / v.norm();
}

}  // namespace testsupport
