#pragma once

// Dense complex linear-algebra kernel: Hermitian eigendecomposition with a
// deterministic ordering/phase convention, unitary matrix exponentials,
// Kronecker products and partial traces.

#include <unsupported/Eigen/KroneckerProduct>

#include "purodyn/errors.hpp"
#include "purodyn/types.hpp"

namespace purodyn {

/// Eigendecomposition of a Hermitian matrix with eigenvalues sorted
/// descending. Each eigenvector is phase-fixed so its largest-magnitude
/// component is real and positive; exact eigenvalue ties are ordered
/// lexicographically by the phase-fixed columns.
struct EigenSystem {
  RealVector eigenvalues;      // descending
  ComplexMatrix eigenvectors;  // column i belongs to eigenvalues[i]
};

template <typename A, typename B>
ComplexMatrix kron(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  return Eigen::kroneckerProduct(a, b);
}

inline double hermiticity_residual(const ComplexMatrix& m) {
  return (m - m.adjoint()).norm();
}

inline bool is_hermitian(const ComplexMatrix& m, double tol = 1e-10) {
  return m.rows() == m.cols() && hermiticity_residual(m) <= tol;
}

EigenSystem hermitian_eig(const ComplexMatrix& h);

/// exp(-i s h) through the eigendecomposition of h, unitary to solver
/// precision for any real s.
ComplexMatrix herm_expm(const ComplexMatrix& h, double s);

enum class Subsystem { A, B };

/// Contract a (dim_a*dim_b) x (dim_a*dim_b) matrix over one tensor factor.
/// Index convention: row = i*dim_b + k with i on A and k on B.
ComplexMatrix partial_trace(const ComplexMatrix& m, Index dim_a, Index dim_b,
                            Subsystem keep);

}  // namespace purodyn
