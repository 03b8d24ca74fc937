#pragma once

// Density matrices, pure states, Bloch-vector conversion, and the two
// extension maps: product embedding and purification.

#include <optional>
#include <utility>
#include <vector>

#include "purodyn/qmath.hpp"

namespace purodyn {

/// Hermitian, unit-trace, positive-semidefinite matrix. Validated on
/// construction (Hermiticity 1e-10, trace 1e-10, min eigenvalue >= -1e-9).
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m);

  Index dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }

 private:
  ComplexMatrix m_;
};

/// Normalized complex state vector (norm 1 within 1e-12).
class PureState {
 public:
  explicit PureState(ComplexVector amplitudes);

  Index dim() const { return amps_.size(); }
  const ComplexVector& amplitudes() const { return amps_; }
  ComplexMatrix outer() const { return amps_ * amps_.adjoint(); }

 private:
  ComplexVector amps_;
};

struct BlochVector {
  double x = 0, y = 0, z = 0;
  double norm() const;
};

struct SpectralDecomposition {
  RealVector weights;             // descending, sums to 1
  std::vector<PureState> states;  // weights[i] pairs with states[i]
};

SpectralDecomposition spectral_decompose(const DensityMatrix& rho);

/// Purified state sum_i sqrt(w_i) |psi_i> (x) |b_i| on dimension dim^2,
/// with {|b_i>} the columns of bath_basis (canonical basis by default).
PureState purify(const DensityMatrix& rho,
                 const std::optional<ComplexMatrix>& bath_basis = {});

DensityMatrix extend_product(const DensityMatrix& rho_s, const DensityMatrix& rho_e);

BlochVector density_to_bloch(const DensityMatrix& rho);
DensityMatrix bloch_to_density(const BlochVector& v);

double trace_distance(const DensityMatrix& a, const DensityMatrix& b);
double state_fidelity(const DensityMatrix& a, const DensityMatrix& b);

/// Reduced system state of a purified vector: Tr_B(|psi><psi|).
DensityMatrix reduced_system_state(const PureState& psi, Index dim_s, Index dim_b);

}  // namespace purodyn
