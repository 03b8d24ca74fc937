#pragma once

// Assembly of the total system+effective-bath Hamiltonian, unitary
// propagation of the purified state, cumulative step propagators, and the
// effective dissipator of the traced equation of motion.

#include <functional>
#include <optional>
#include <vector>

#include "purodyn/shapes.hpp"
#include "purodyn/states.hpp"

namespace purodyn {

using TimeMatrixFn = std::function<ComplexMatrix(double)>;

struct TotalHamiltonian {
  Index dim_s = 0;
  Index dim_b = 0;
  TimeMatrixFn h_s;   // dim_s x dim_s
  TimeMatrixFn h_b;   // dim_b x dim_b
  TimeMatrixFn h_sb;  // (dim_s*dim_b) x (dim_s*dim_b)

  static TotalHamiltonian make(ComplexMatrix hs, ComplexMatrix hb, InteractionSpec hsb);
  static TotalHamiltonian make(ComplexMatrix hs, ComplexMatrix hb, TimeMatrixFn hsb);
};

/// H_S(t) (x) I_B + I_S (x) H_B(t) + H_SB(t).
ComplexMatrix assemble_total(const TotalHamiltonian& ht, double t);

struct PropagationOptions {
  double max_step = 1e-2;  // internal substep ceiling, a.u.
};

struct PurifiedTrajectory {
  std::vector<double> times;
  std::vector<PureState> purified_states;
  std::vector<DensityMatrix> reduced_states;  // Tr_B at the same times
};

/// Midpoint piecewise-constant exponential stepper. Each grid interval is
/// split into substeps bounded by options.max_step and by
/// dt * ||H_T||_F <= 0.5; every substep applies an exactly unitary
/// herm_expm, so the norm is preserved to solver precision.
PurifiedTrajectory propagate(const TotalHamiltonian& ht, const PureState& psi0,
                             const std::vector<double>& t_grid,
                             const PropagationOptions& options = {});

/// Cumulative unitaries U(t_k, t_0) over the grid, first element identity.
std::vector<ComplexMatrix> propagator_ode(const TotalHamiltonian& ht,
                                          const std::vector<double>& t_grid,
                                          const PropagationOptions& options = {});

/// -i Tr_B([h_sb, |psi><psi|]) with |psi> = purify(rho_s, bath_basis);
/// the purification is applied fresh at every evaluation.
ComplexMatrix effective_dissipator(const ComplexMatrix& h_sb_at_t,
                                   const DensityMatrix& rho_s,
                                   const std::optional<ComplexMatrix>& bath_basis = {});

}  // namespace purodyn
