#pragma once

// Variational compilation of step unitaries into a fixed CNOT plus
// one-qubit-rotation ansatz, and OpenQASM-style circuit text emission.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "purodyn/fit.hpp"
#include "purodyn/purified_dynamics.hpp"

namespace purodyn {

struct Gate {
  enum class Kind { Cnot, Rotation };
  Kind kind = Kind::Rotation;
  int a = 0;  // rotation qubit, or CNOT control
  int b = 0;  // CNOT target
};

struct CircuitAnsatz {
  int qubit_count = 0;
  std::vector<Gate> gates;  // applied first-to-last
  int parameter_count = 0;  // 3 per rotation

  static CircuitAnsatz rotations_and_chain(int qubits, int cnot_blocks);
};

/// Four qubits: an initial rotation layer, then 9 CNOTs on the linear chain
/// (0-1, 1-2, 2-3) repeated three times, each CNOT followed by one rotation
/// on its control and one on its target. 22 rotations, 66 parameters.
CircuitAnsatz default_ansatz();

/// General one-qubit rotation U(theta, phi, lambda).
ComplexMatrix rotation_matrix(double theta, double phi, double lambda);

/// Ordered gate product on the 2^n-dimensional space.
ComplexMatrix ansatz_unitary(const CircuitAnsatz& ansatz, const RealVector& params);

/// 1 - |Tr(U(params)^+ u_target)| / N.
double objective_unitary_fidelity(const CircuitAnsatz& ansatz, const RealVector& params,
                                  const ComplexMatrix& u_target);

struct CompileResult {
  RealVector params;
  double fidelity = 0.0;  // |Tr(U^+ V)| / N
};

/// Multi-restart fit of the ansatz to the target unitary.
CompileResult compile_unitary(const ComplexMatrix& u_target, const CircuitAnsatz& ansatz,
                              const OptimizerConfig& cfg);

struct CompiledStep {
  std::uint64_t target_hash = 0;
  RealVector params;
  double fidelity = 0.0;
};

struct CompiledSchedule {
  double interval = 0.0;  // a.u.
  std::vector<CompiledStep> steps;
};

/// Compiles the step unitaries U(t_k + interval, t_k) of the given total
/// Hamiltonian. Step 0 runs the full restart budget; later steps warm-start
/// from the previous parameters and fall back to the full budget when the
/// warm-started fidelity stays below 0.999.
CompiledSchedule compile_schedule(const TotalHamiltonian& ht, double interval, int steps,
                                  const CircuitAnsatz& ansatz, const OptimizerConfig& cfg,
                                  const PropagationOptions& options = {});

/// Deterministic OpenQASM-style text, angles at 17 significant digits.
std::string emit_circuit_text(const CircuitAnsatz& ansatz, const RealVector& params);

/// Parses text produced by emit_circuit_text.
std::pair<CircuitAnsatz, RealVector> parse_circuit_text(const std::string& text);

}  // namespace purodyn
