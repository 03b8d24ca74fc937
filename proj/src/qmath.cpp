#include "purodyn/qmath.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

namespace purodyn {

namespace {

constexpr double kHermTol = 1e-10;

void require_hermitian(const ComplexMatrix& h, const char* who) {
  if (h.rows() != h.cols()) {
    std::ostringstream msg;
    msg << who << ": matrix is " << h.rows() << "x" << h.cols() << ", expected square";
    throw DimensionMismatch(msg.str());
  }
  const double res = hermiticity_residual(h);
  if (!(res <= kHermTol)) {
    std::ostringstream msg;
    msg << who << ": Hermiticity residual " << res << " exceeds " << kHermTol;
    throw NonHermitianInput(msg.str());
  }
}

// Multiplies each column by a unit phase so that its largest-magnitude
// component becomes real and positive (first such component on magnitude
// ties).
void fix_column_phases(ComplexMatrix& v) {
  for (Index j = 0; j < v.cols(); ++j) {
    Index best = 0;
    double best_mag = 0.0;
    for (Index i = 0; i < v.rows(); ++i) {
      const double mag = std::abs(v(i, j));
      if (mag > best_mag) {
        best_mag = mag;
        best = i;
      }
    }
    if (best_mag > 0.0) {
      v.col(j) *= std::conj(v(best, j)) / best_mag;
      v(best, j) = Complex(std::abs(v(best, j)), 0.0);
    }
  }
}

bool column_lex_less(const ComplexMatrix& v, Index a, Index b) {
  for (Index i = 0; i < v.rows(); ++i) {
    const Complex& x = v(i, a);
    const Complex& y = v(i, b);
    if (x.real() != y.real()) return x.real() < y.real();
    if (x.imag() != y.imag()) return x.imag() < y.imag();
  }
  return false;
}

}  // namespace

EigenSystem hermitian_eig(const ComplexMatrix& h) {
  require_hermitian(h, "hermitian_eig");
  const ComplexMatrix sym = Complex(0.5, 0.0) * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error("hermitian_eig: eigensolver did not converge");
  }

  ComplexMatrix vecs = solver.eigenvectors();
  const RealVector vals = solver.eigenvalues();
  fix_column_phases(vecs);

  std::vector<Index> order(static_cast<std::size_t>(vals.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (vals[a] != vals[b]) return vals[a] > vals[b];
    return column_lex_less(vecs, a, b);
  });

  EigenSystem out;
  out.eigenvalues.resize(vals.size());
  out.eigenvectors.resize(vecs.rows(), vecs.cols());
  for (Index j = 0; j < vals.size(); ++j) {
    out.eigenvalues[j] = vals[order[static_cast<std::size_t>(j)]];
    out.eigenvectors.col(j) = vecs.col(order[static_cast<std::size_t>(j)]);
  }
  return out;
}

ComplexMatrix herm_expm(const ComplexMatrix& h, double s) {
  require_hermitian(h, "herm_expm");
  // The exponential is gauge-invariant, so the raw solver basis is fine here.
  const ComplexMatrix sym = Complex(0.5, 0.0) * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error("herm_expm: eigensolver did not converge");
  }
  const Index n = h.rows();
  ComplexVector phases(n);
  for (Index i = 0; i < n; ++i) {
    phases[i] = std::exp(Complex(0.0, -s * solver.eigenvalues()[i]));
  }
  const ComplexMatrix& v = solver.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

ComplexMatrix partial_trace(const ComplexMatrix& m, Index dim_a, Index dim_b,
                            Subsystem keep) {
  const Index dim = dim_a * dim_b;
  if (dim_a <= 0 || dim_b <= 0 || m.rows() != dim || m.cols() != dim) {
    std::ostringstream msg;
    msg << "partial_trace: matrix is " << m.rows() << "x" << m.cols()
        << ", expected " << dim << "x" << dim;
    throw DimensionMismatch(msg.str());
  }
  if (keep == Subsystem::A) {
    ComplexMatrix out = ComplexMatrix::Zero(dim_a, dim_a);
    for (Index i = 0; i < dim_a; ++i)
      for (Index j = 0; j < dim_a; ++j)
        for (Index k = 0; k < dim_b; ++k)
          out(i, j) += m(i * dim_b + k, j * dim_b + k);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(dim_b, dim_b);
  for (Index k = 0; k < dim_b; ++k)
    for (Index l = 0; l < dim_b; ++l)
      for (Index i = 0; i < dim_a; ++i)
        out(k, l) += m(i * dim_b + k, i * dim_b + l);
  return out;
}

}  // namespace purodyn
