#pragma once

// Bounded limited-memory quasi-Newton optimization with central
// finite-difference gradients, plus the matching objectives used by the
// scenarios (dissipator match, trajectory match, terminal state, unitary
// fidelity).

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "purodyn/lindblad.hpp"
#include "purodyn/purified_dynamics.hpp"

namespace purodyn {

struct OptimizerConfig {
  int max_iterations = 500;
  double gradient_tolerance = 1e-8;
  double fd_step = 1e-6;
  std::optional<std::vector<std::pair<double, double>>> bounds;  // per coordinate
  int restarts = 8;
  std::uint64_t seed = 0;
  int memory = 10;  // quasi-Newton history depth
};

struct FitResult {
  RealVector best_params;
  double best_value = 0.0;
  int iterations = 0;
  std::vector<double> value_history;  // accepted iterates, non-increasing
  bool converged = false;
};

using Objective = std::function<double(const RealVector&)>;

/// Central finite-difference gradient with step h.
RealVector fd_gradient(const Objective& objective, const RealVector& x, double h);

/// Projected L-BFGS with Armijo backtracking along the clipped step path.
/// Restart 0 starts from x0 (projected into bounds); further restarts draw
/// uniform seeds in [-1, 1] per coordinate, intersected with the bounds.
/// The best restart by final value wins.
FitResult optimize(const Objective& objective, const RealVector& x0,
                   const OptimizerConfig& cfg);

/// Everything needed to map a parameter vector to a purified trajectory.
struct PropagationProblem {
  std::function<TotalHamiltonian(const RealVector&)> hamiltonian;
  PureState psi0;
  std::vector<double> grid;
  PropagationOptions options;
};

/// Sum over probes of || D_GKSL(rho) - effective dissipator ||_F^2 for the
/// static Hermitian interaction decoded from interaction_params.
double objective_dissipator_match(const RealVector& interaction_params,
                                  const LindbladModel& model,
                                  const std::vector<DensityMatrix>& probe_states);

/// Mean squared Frobenius deviation between the purified reduced states and
/// the target trajectory at the target's times (which must lie on the grid).
double objective_trajectory(const RealVector& interaction_params,
                            const Trajectory& target,
                            const PropagationProblem& problem);

/// Squared Frobenius distance of the reduced state at t_c from rho_target.
double objective_terminal(const RealVector& interaction_params,
                          const DensityMatrix& rho_target, double t_c,
                          const PropagationProblem& problem);

/// 1 - |Tr(u^+ v)| / N; throws NonUnitaryTarget when v is not unitary.
double unitary_infidelity(const ComplexMatrix& u, const ComplexMatrix& u_target);

}  // namespace purodyn
