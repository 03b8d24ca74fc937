#include "purodyn/circuit.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "purodyn/digest.hpp"

namespace purodyn {

namespace {

void require_valid(const CircuitAnsatz& ansatz) {
  if (ansatz.qubit_count < 1 || ansatz.qubit_count > 12) {
    throw Error("ansatz qubit count out of range");
  }
  int rotations = 0;
  for (const Gate& g : ansatz.gates) {
    if (g.kind == Gate::Kind::Rotation) {
      if (g.a < 0 || g.a >= ansatz.qubit_count) throw IndexOutOfRange("rotation qubit");
      ++rotations;
    } else {
      if (g.a < 0 || g.a >= ansatz.qubit_count || g.b < 0 || g.b >= ansatz.qubit_count ||
          g.a == g.b) {
        throw IndexOutOfRange("cnot qubits");
      }
    }
  }
  if (ansatz.parameter_count != 3 * rotations) {
    throw LengthMismatch("ansatz parameter count must be 3 per rotation");
  }
}

// Left-multiplies U by a one-qubit gate on `qubit` (qubit 0 is the leftmost
// tensor factor).
void apply_single(ComplexMatrix& u, const ComplexMatrix& r, int qubit, int qubits) {
  const Index mask = Index{1} << (qubits - 1 - qubit);
  const Index dim = u.rows();
  for (Index c = 0; c < dim; ++c) {
    for (Index i = 0; i < dim; ++i) {
      if (i & mask) continue;
      const Complex lo = u(i, c);
      const Complex hi = u(i | mask, c);
      u(i, c) = r(0, 0) * lo + r(0, 1) * hi;
      u(i | mask, c) = r(1, 0) * lo + r(1, 1) * hi;
    }
  }
}

void apply_cnot(ComplexMatrix& u, int control, int target, int qubits) {
  const Index cmask = Index{1} << (qubits - 1 - control);
  const Index tmask = Index{1} << (qubits - 1 - target);
  const Index dim = u.rows();
  for (Index c = 0; c < dim; ++c) {
    for (Index i = 0; i < dim; ++i) {
      if ((i & cmask) && !(i & tmask)) {
        std::swap(u(i, c), u(i | tmask, c));
      }
    }
  }
}

std::string format_angle(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

CircuitAnsatz CircuitAnsatz::rotations_and_chain(int qubits, int cnot_blocks) {
  if (qubits < 2 && cnot_blocks > 0) {
    throw Error("chain ansatz needs at least two qubits");
  }
  CircuitAnsatz a;
  a.qubit_count = qubits;
  for (int q = 0; q < qubits; ++q) {
    a.gates.push_back({Gate::Kind::Rotation, q, 0});
  }
  int rotations = qubits;
  for (int block = 0; block < cnot_blocks; ++block) {
    const int control = block % (qubits - 1);
    const int target = control + 1;
    a.gates.push_back({Gate::Kind::Cnot, control, target});
    a.gates.push_back({Gate::Kind::Rotation, control, 0});
    a.gates.push_back({Gate::Kind::Rotation, target, 0});
    rotations += 2;
  }
  a.parameter_count = 3 * rotations;
  return a;
}

CircuitAnsatz default_ansatz() { return CircuitAnsatz::rotations_and_chain(4, 9); }

ComplexMatrix rotation_matrix(double theta, double phi, double lambda) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  ComplexMatrix r(2, 2);
  r(0, 0) = c;
  r(0, 1) = -std::exp(Complex(0.0, lambda)) * s;
  r(1, 0) = std::exp(Complex(0.0, phi)) * s;
  r(1, 1) = std::exp(Complex(0.0, phi + lambda)) * c;
  return r;
}

ComplexMatrix ansatz_unitary(const CircuitAnsatz& ansatz, const RealVector& params) {
  require_valid(ansatz);
  if (params.size() != ansatz.parameter_count) {
    std::ostringstream msg;
    msg << "ansatz expects " << ansatz.parameter_count << " parameters, got "
        << params.size();
    throw LengthMismatch(msg.str());
  }
  const Index dim = Index{1} << ansatz.qubit_count;
  ComplexMatrix u = identity(dim);
  Index p = 0;
  for (const Gate& g : ansatz.gates) {
    if (g.kind == Gate::Kind::Rotation) {
      apply_single(u, rotation_matrix(params[p], params[p + 1], params[p + 2]), g.a,
                   ansatz.qubit_count);
      p += 3;
    } else {
      apply_cnot(u, g.a, g.b, ansatz.qubit_count);
    }
  }
  return u;
}

double objective_unitary_fidelity(const CircuitAnsatz& ansatz, const RealVector& params,
                                  const ComplexMatrix& u_target) {
  return unitary_infidelity(ansatz_unitary(ansatz, params), u_target);
}

CompileResult compile_unitary(const ComplexMatrix& u_target, const CircuitAnsatz& ansatz,
                              const OptimizerConfig& cfg) {
  // Validates the target once up front.
  unitary_infidelity(identity(u_target.rows()), u_target);
  const Objective objective = [&](const RealVector& p) {
    return objective_unitary_fidelity(ansatz, p, u_target);
  };
  const FitResult fit = optimize(objective, RealVector::Zero(ansatz.parameter_count), cfg);
  return {fit.best_params, 1.0 - fit.best_value};
}

CompiledSchedule compile_schedule(const TotalHamiltonian& ht, double interval, int steps,
                                  const CircuitAnsatz& ansatz, const OptimizerConfig& cfg,
                                  const PropagationOptions& options) {
  if (!(interval > 0.0)) throw Error("compile_schedule interval must be positive");
  if (steps < 1) throw Error("compile_schedule needs at least one step");

  std::vector<double> grid(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k) grid[static_cast<std::size_t>(k)] = interval * k;
  const std::vector<ComplexMatrix> cumulative = propagator_ode(ht, grid, options);

  CompiledSchedule schedule;
  schedule.interval = interval;
  schedule.steps.reserve(static_cast<std::size_t>(steps));

  constexpr double kWarmAcceptFidelity = 0.999;
  RealVector previous;
  for (int k = 0; k < steps; ++k) {
    const ComplexMatrix target =
        cumulative[static_cast<std::size_t>(k) + 1] *
        cumulative[static_cast<std::size_t>(k)].adjoint();

    CompileResult best;
    if (k == 0) {
      best = compile_unitary(target, ansatz, cfg);
    } else {
      OptimizerConfig warm = cfg;
      warm.restarts = 1;
      const Objective objective = [&](const RealVector& p) {
        return objective_unitary_fidelity(ansatz, p, target);
      };
      const FitResult fit = optimize(objective, previous, warm);
      best = {fit.best_params, 1.0 - fit.best_value};
      if (best.fidelity < kWarmAcceptFidelity && cfg.restarts > 1) {
        const CompileResult fresh = compile_unitary(target, ansatz, cfg);
        if (fresh.fidelity > best.fidelity) best = fresh;
      }
    }
    previous = best.params;

    CompiledStep step;
    step.target_hash = fnv1a64(target.data(),
                               sizeof(Complex) * static_cast<std::size_t>(target.size()));
    step.params = best.params;
    step.fidelity = best.fidelity;
    schedule.steps.push_back(std::move(step));
  }
  return schedule;
}

std::string emit_circuit_text(const CircuitAnsatz& ansatz, const RealVector& params) {
  require_valid(ansatz);
  if (params.size() != ansatz.parameter_count) {
    throw LengthMismatch("emit_circuit_text: parameter count mismatch");
  }
  std::ostringstream out;
  out << "OPENQASM 2.0;\n";
  out << "include \"qelib1.inc\";\n";
  out << "qreg q[" << ansatz.qubit_count << "];\n";
  Index p = 0;
  for (const Gate& g : ansatz.gates) {
    if (g.kind == Gate::Kind::Rotation) {
      out << "u3(" << format_angle(params[p]) << "," << format_angle(params[p + 1]) << ","
          << format_angle(params[p + 2]) << ") q[" << g.a << "];\n";
      p += 3;
    } else {
      out << "cx q[" << g.a << "],q[" << g.b << "];\n";
    }
  }
  return out.str();
}

std::pair<CircuitAnsatz, RealVector> parse_circuit_text(const std::string& text) {
  CircuitAnsatz ansatz;
  std::vector<double> params;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.rfind("OPENQASM", 0) == 0 || line.rfind("include", 0) == 0) {
      continue;
    }
    int q = 0, c = 0, t = 0;
    double theta = 0, phi = 0, lambda = 0;
    if (std::sscanf(line.c_str(), "qreg q[%d];", &q) == 1) {
      ansatz.qubit_count = q;
    } else if (std::sscanf(line.c_str(), "u3(%lf,%lf,%lf) q[%d];", &theta, &phi, &lambda,
                           &q) == 4) {
      ansatz.gates.push_back({Gate::Kind::Rotation, q, 0});
      params.push_back(theta);
      params.push_back(phi);
      params.push_back(lambda);
    } else if (std::sscanf(line.c_str(), "cx q[%d],q[%d];", &c, &t) == 2) {
      ansatz.gates.push_back({Gate::Kind::Cnot, c, t});
    } else {
      throw Error("parse_circuit_text: unrecognized line: " + line);
    }
  }
  ansatz.parameter_count = static_cast<int>(params.size());
  RealVector p(ansatz.parameter_count);
  for (Index i = 0; i < p.size(); ++i) p[i] = params[static_cast<std::size_t>(i)];
  return {std::move(ansatz), std::move(p)};
}

}  // namespace purodyn
