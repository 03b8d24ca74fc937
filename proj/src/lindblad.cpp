#include "purodyn/lindblad.hpp"

#include <cmath>
#include <sstream>

namespace purodyn {

namespace {

constexpr double kMaxStep = 0.1;
constexpr double kPositivityTol = -1e-8;

void require_model(const LindbladModel& model) {
  if (!is_hermitian(model.hamiltonian)) {
    throw NonHermitianInput("Lindblad Hamiltonian is not Hermitian");
  }
  for (const LindbladChannel& ch : model.channels) {
    if (ch.rate < 0.0) {
      throw Error("Lindblad rates must be non-negative");
    }
    if (ch.jump.rows() != model.dim() || ch.jump.cols() != model.dim()) {
      throw DimensionMismatch("jump operator dimension does not match the Hamiltonian");
    }
  }
}

}  // namespace

ComplexMatrix gksl_dissipator(const LindbladModel& model, const ComplexMatrix& rho) {
  ComplexMatrix d = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (const LindbladChannel& ch : model.channels) {
    const ComplexMatrix ldl = ch.jump.adjoint() * ch.jump;
    d += ch.rate * (ch.jump * rho * ch.jump.adjoint() -
                    0.5 * (ldl * rho + rho * ldl));
  }
  return d;
}

ComplexMatrix gksl_rhs_raw(const LindbladModel& model, const ComplexMatrix& rho) {
  if (rho.rows() != model.dim() || rho.cols() != model.dim()) {
    throw DimensionMismatch("gksl_rhs: state dimension does not match the model");
  }
  const ComplexMatrix& h = model.hamiltonian;
  return -kI * (h * rho - rho * h) + gksl_dissipator(model, rho);
}

ComplexMatrix gksl_rhs(const LindbladModel& model, const DensityMatrix& rho) {
  require_model(model);
  return gksl_rhs_raw(model, rho.matrix());
}

Trajectory integrate(const LindbladModel& model, const DensityMatrix& rho0,
                     const std::vector<double>& t_grid) {
  require_model(model);
  if (t_grid.empty()) throw Error("integrate: empty time grid");
  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    const double dt = t_grid[k] - t_grid[k - 1];
    if (dt <= 0.0) throw Error("integrate: time grid must be strictly increasing");
    if (dt > kMaxStep + 1e-15) {
      std::ostringstream msg;
      msg << "RK4 step " << dt << " exceeds the " << kMaxStep << " a.u. limit";
      throw StepTooLarge(msg.str());
    }
  }

  Trajectory traj;
  traj.times = t_grid;
  traj.states.reserve(t_grid.size());
  traj.states.push_back(rho0);

  ComplexMatrix rho = rho0.matrix();
  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    const double dt = t_grid[k] - t_grid[k - 1];
    const ComplexMatrix k1 = gksl_rhs_raw(model, rho);
    const ComplexMatrix k2 = gksl_rhs_raw(model, rho + 0.5 * dt * k1);
    const ComplexMatrix k3 = gksl_rhs_raw(model, rho + 0.5 * dt * k2);
    const ComplexMatrix k4 = gksl_rhs_raw(model, rho + dt * k3);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    rho = Complex(0.5, 0.0) * (rho + rho.adjoint());

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho, Eigen::EigenvaluesOnly);
    const double min_eig = solver.eigenvalues().minCoeff();
    if (!(min_eig >= kPositivityTol)) {
      std::ostringstream msg;
      msg << "positivity violated at t = " << t_grid[k]
          << " (min eigenvalue " << min_eig << ")";
      throw StateInvariantViolated(msg.str());
    }
    try {
      traj.states.emplace_back(rho);
    } catch (const InvalidDensityMatrix& e) {
      std::ostringstream msg;
      msg << "state invariant broken at t = " << t_grid[k] << ": " << e.what();
      throw StateInvariantViolated(msg.str());
    }
  }
  return traj;
}

LindbladModel decay_channel_model() {
  LindbladModel model;
  model.hamiltonian = ComplexMatrix::Zero(2, 2);
  model.hamiltonian(1, 1) = 1.0;
  model.channels.push_back({0.1, pauli_x()});
  return model;
}

}  // namespace purodyn
