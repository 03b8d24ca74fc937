#pragma once

// GKSL master-equation reference integrator; the oracle that purified
// dynamics are matched against.

#include <vector>

#include "purodyn/states.hpp"

namespace purodyn {

struct LindbladChannel {
  double rate = 0.0;   // 1/a.u., >= 0
  ComplexMatrix jump;  // L_k
};

struct LindbladModel {
  ComplexMatrix hamiltonian;  // Hermitian, a.u.
  std::vector<LindbladChannel> channels;

  Index dim() const { return hamiltonian.rows(); }
};

struct Trajectory {
  std::vector<double> times;  // strictly increasing, a.u.
  std::vector<DensityMatrix> states;
};

/// Full right-hand side -i[H, rho] + dissipator, evaluated on a raw matrix
/// (intermediate Runge-Kutta stages are not exact density matrices).
ComplexMatrix gksl_rhs_raw(const LindbladModel& model, const ComplexMatrix& rho);

/// Dissipator part alone: sum_k gamma_k (L rho L^+ - 1/2 {L^+ L, rho}).
ComplexMatrix gksl_dissipator(const LindbladModel& model, const ComplexMatrix& rho);

ComplexMatrix gksl_rhs(const LindbladModel& model, const DensityMatrix& rho);

/// Classical fixed-step RK4 over the given grid (step size <= 0.1 a.u.).
/// States are re-symmetrized each step; positivity is checked throughout.
Trajectory integrate(const LindbladModel& model, const DensityMatrix& rho0,
                     const std::vector<double>& t_grid);

/// Two-level decay channel: H = diag(0,1), single channel with rate 0.1 and
/// jump sigma_x.
LindbladModel decay_channel_model();

}  // namespace purodyn
