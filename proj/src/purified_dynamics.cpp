#include "purodyn/purified_dynamics.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace purodyn {

namespace {

constexpr double kComponentHermTol = 1e-12;
constexpr double kStepNormBudget = 0.5;  // dt * ||H_T||_F per substep
constexpr long kMaxSubsteps = 1 << 22;

void require_grid(const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw Error("propagation grid is empty");
  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    if (!(t_grid[k] > t_grid[k - 1])) {
      throw Error("propagation grid must be strictly increasing");
    }
  }
}

// Substep count for one grid interval, honoring both the max_step ceiling
// and the dt*||H|| budget at the interval midpoint.
long substep_count(const TotalHamiltonian& ht, double t0, double t1,
                   const PropagationOptions& options) {
  const double dt = t1 - t0;
  long n = static_cast<long>(std::ceil(dt / options.max_step - 1e-12));
  if (n < 1) n = 1;
  const double norm = assemble_total(ht, 0.5 * (t0 + t1)).norm();
  if (!std::isfinite(norm)) {
    throw StepTooLarge("total Hamiltonian norm is not finite");
  }
  const long by_norm = static_cast<long>(std::ceil(dt * norm / kStepNormBudget));
  if (by_norm > n) n = by_norm;
  if (n > kMaxSubsteps) {
    std::ostringstream msg;
    msg << "interval [" << t0 << ", " << t1 << "] requires " << n
        << " substeps (||H_T|| = " << norm << ")";
    throw StepTooLarge(msg.str());
  }
  return n;
}

}  // namespace

TotalHamiltonian TotalHamiltonian::make(ComplexMatrix hs, ComplexMatrix hb,
                                        InteractionSpec hsb) {
  TotalHamiltonian ht;
  ht.dim_s = hs.rows();
  ht.dim_b = hb.rows();
  ht.h_s = [m = std::move(hs)](double) { return m; };
  ht.h_b = [m = std::move(hb)](double) { return m; };
  ht.h_sb = [spec = std::move(hsb)](double t) { return build_interaction(spec, t); };
  return ht;
}

TotalHamiltonian TotalHamiltonian::make(ComplexMatrix hs, ComplexMatrix hb,
                                        TimeMatrixFn hsb) {
  TotalHamiltonian ht;
  ht.dim_s = hs.rows();
  ht.dim_b = hb.rows();
  ht.h_s = [m = std::move(hs)](double) { return m; };
  ht.h_b = [m = std::move(hb)](double) { return m; };
  ht.h_sb = std::move(hsb);
  return ht;
}

ComplexMatrix assemble_total(const TotalHamiltonian& ht, double t) {
  const ComplexMatrix hs = ht.h_s(t);
  const ComplexMatrix hb = ht.h_b(t);
  const ComplexMatrix hsb = ht.h_sb(t);
  const Index dim = ht.dim_s * ht.dim_b;
  if (hs.rows() != ht.dim_s || hb.rows() != ht.dim_b || hsb.rows() != dim) {
    throw DimensionMismatch("assemble_total: component dimensions are inconsistent");
  }
  if (!is_hermitian(hs, kComponentHermTol) || !is_hermitian(hb, kComponentHermTol) ||
      !is_hermitian(hsb, kComponentHermTol)) {
    throw NonHermitianComponent("assemble_total: non-Hermitian component");
  }
  return kron(hs, identity(ht.dim_b)) + kron(identity(ht.dim_s), hb) + hsb;
}

PurifiedTrajectory propagate(const TotalHamiltonian& ht, const PureState& psi0,
                             const std::vector<double>& t_grid,
                             const PropagationOptions& options) {
  require_grid(t_grid);
  const Index dim = ht.dim_s * ht.dim_b;
  if (psi0.dim() != dim) {
    throw DimensionMismatch("propagate: state dimension does not match the Hamiltonian");
  }

  PurifiedTrajectory traj;
  traj.times = t_grid;
  traj.purified_states.reserve(t_grid.size());
  traj.reduced_states.reserve(t_grid.size());
  traj.purified_states.push_back(psi0);
  traj.reduced_states.push_back(reduced_system_state(psi0, ht.dim_s, ht.dim_b));

  ComplexVector psi = psi0.amplitudes();
  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    const double t0 = t_grid[k - 1];
    const double t1 = t_grid[k];
    const long n = substep_count(ht, t0, t1, options);
    const double dt = (t1 - t0) / static_cast<double>(n);
    for (long s = 0; s < n; ++s) {
      const double t_mid = t0 + (static_cast<double>(s) + 0.5) * dt;
      psi = herm_expm(assemble_total(ht, t_mid), dt) * psi;
    }
    psi /= psi.norm();  // shed substep round-off before emitting
    traj.purified_states.emplace_back(psi);
    traj.reduced_states.push_back(
        reduced_system_state(traj.purified_states.back(), ht.dim_s, ht.dim_b));
  }
  return traj;
}

std::vector<ComplexMatrix> propagator_ode(const TotalHamiltonian& ht,
                                          const std::vector<double>& t_grid,
                                          const PropagationOptions& options) {
  require_grid(t_grid);
  const Index dim = ht.dim_s * ht.dim_b;
  std::vector<ComplexMatrix> unitaries;
  unitaries.reserve(t_grid.size());
  unitaries.push_back(identity(dim));

  ComplexMatrix u = identity(dim);
  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    const double t0 = t_grid[k - 1];
    const double t1 = t_grid[k];
    const long n = substep_count(ht, t0, t1, options);
    const double dt = (t1 - t0) / static_cast<double>(n);
    for (long s = 0; s < n; ++s) {
      const double t_mid = t0 + (static_cast<double>(s) + 0.5) * dt;
      u = herm_expm(assemble_total(ht, t_mid), dt) * u;
    }
    unitaries.push_back(u);
  }
  return unitaries;
}

ComplexMatrix effective_dissipator(const ComplexMatrix& h_sb_at_t,
                                   const DensityMatrix& rho_s,
                                   const std::optional<ComplexMatrix>& bath_basis) {
  const Index d = rho_s.dim();
  if (h_sb_at_t.rows() != d * d || h_sb_at_t.cols() != d * d) {
    throw DimensionMismatch("effective_dissipator: interaction must act on dim^2");
  }
  const PureState psi = purify(rho_s, bath_basis);
  const ComplexMatrix p = psi.outer();
  const ComplexMatrix comm = h_sb_at_t * p - p * h_sb_at_t;
  ComplexMatrix out = -kI * partial_trace(comm, d, d, Subsystem::A);
  return Complex(0.5, 0.0) * (out + out.adjoint());  // clean round-off only
}

}  // namespace purodyn
