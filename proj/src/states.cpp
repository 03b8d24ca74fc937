#include "purodyn/states.hpp"

#include <cmath>
#include <sstream>

namespace purodyn {

namespace {

constexpr double kHermTol = 1e-10;
constexpr double kTraceTol = 1e-10;
constexpr double kPsdTol = -1e-9;  // absorbs integrator round-off

}  // namespace

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) {
    throw InvalidDensityMatrix("density matrix must be square and non-empty");
  }
  const double herm = hermiticity_residual(m_);
  if (!(herm <= kHermTol)) {
    std::ostringstream msg;
    msg << "density matrix not Hermitian (residual " << herm << ")";
    throw InvalidDensityMatrix(msg.str());
  }
  const double trace_err = std::abs(m_.trace() - Complex(1.0, 0.0));
  if (!(trace_err <= kTraceTol)) {
    std::ostringstream msg;
    msg << "density matrix trace deviates from 1 by " << trace_err;
    throw InvalidDensityMatrix(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m_, Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (!(min_eig >= kPsdTol)) {
    std::ostringstream msg;
    msg << "density matrix not positive semidefinite (min eigenvalue " << min_eig << ")";
    throw InvalidDensityMatrix(msg.str());
  }
}

PureState::PureState(ComplexVector amplitudes) : amps_(std::move(amplitudes)) {
  const double norm_err = std::abs(amps_.norm() - 1.0);
  if (!(norm_err <= 1e-12)) {
    std::ostringstream msg;
    msg << "pure state norm deviates from 1 by " << norm_err;
    throw StateInvariantViolated(msg.str());
  }
}

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

SpectralDecomposition spectral_decompose(const DensityMatrix& rho) {
  const EigenSystem eig = hermitian_eig(rho.matrix());
  SpectralDecomposition out;
  out.weights = eig.eigenvalues;
  out.states.reserve(static_cast<std::size_t>(rho.dim()));
  for (Index i = 0; i < rho.dim(); ++i) {
    ComplexVector col = eig.eigenvectors.col(i);
    out.states.emplace_back(col / col.norm());
  }
  return out;
}

PureState purify(const DensityMatrix& rho,
                 const std::optional<ComplexMatrix>& bath_basis) {
  const Index d = rho.dim();
  ComplexMatrix basis = bath_basis.value_or(identity(d));
  if (basis.rows() != d || basis.cols() != d) {
    throw NonUnitaryBasis("bath basis dimension does not match the system");
  }
  const double unitarity = (basis.adjoint() * basis - identity(d)).norm();
  if (!(unitarity <= 1e-10)) {
    std::ostringstream msg;
    msg << "bath basis not unitary (residual " << unitarity << ")";
    throw NonUnitaryBasis(msg.str());
  }

  const SpectralDecomposition spec = spectral_decompose(rho);
  ComplexVector psi = ComplexVector::Zero(d * d);
  for (Index i = 0; i < d; ++i) {
    const double w = spec.weights[i];
    if (w <= 0.0) continue;  // zero eigenvalues contribute nothing
    psi += std::sqrt(w) * kron(spec.states[static_cast<std::size_t>(i)].amplitudes(),
                               basis.col(i));
  }
  psi /= psi.norm();
  return PureState(psi);
}

DensityMatrix extend_product(const DensityMatrix& rho_s, const DensityMatrix& rho_e) {
  return DensityMatrix(kron(rho_s.matrix(), rho_e.matrix()));
}

BlochVector density_to_bloch(const DensityMatrix& rho) {
  if (rho.dim() != 2) {
    throw DimensionMismatch("density_to_bloch expects a qubit state");
  }
  const ComplexMatrix& m = rho.matrix();
  BlochVector v;
  v.x = (m * pauli_x()).trace().real();
  v.y = (m * pauli_y()).trace().real();
  v.z = (m * pauli_z()).trace().real();
  return v;
}

DensityMatrix bloch_to_density(const BlochVector& v) {
  const double r = v.norm();
  if (!(r <= 1.0 + 1e-10)) {
    std::ostringstream msg;
    msg << "Bloch vector norm " << r << " exceeds 1";
    throw BlochNormExceeded(msg.str());
  }
  ComplexMatrix m =
      0.5 * (identity(2) + v.x * pauli_x() + v.y * pauli_y() + v.z * pauli_z());
  return DensityMatrix(std::move(m));
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch("trace_distance: dimension mismatch");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix() - b.matrix(),
                                                      Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double state_fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch("state_fidelity: dimension mismatch");
  }
  const EigenSystem ea = hermitian_eig(a.matrix());
  RealVector sqrt_w = ea.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  const ComplexMatrix sqrt_a =
      ea.eigenvectors * sqrt_w.cast<Complex>().asDiagonal() * ea.eigenvectors.adjoint();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sqrt_a * b.matrix() * sqrt_a,
                                                      Eigen::EigenvaluesOnly);
  const double root_sum = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::min(1.0, root_sum * root_sum);
}

DensityMatrix reduced_system_state(const PureState& psi, Index dim_s, Index dim_b) {
  if (psi.dim() != dim_s * dim_b) {
    throw DimensionMismatch("reduced_system_state: dimensions do not factor the state");
  }
  ComplexMatrix rho = partial_trace(psi.outer(), dim_s, dim_b, Subsystem::A);
  rho = Complex(0.5, 0.0) * (rho + rho.adjoint());
  return DensityMatrix(std::move(rho));
}

}  // namespace purodyn
