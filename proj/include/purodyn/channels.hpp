#pragma once

// Pauli-diagonal qubit maps (the Bloch-ball-to-disc map among them),
// purification-based transfer unitaries, and CP certification through Choi
// matrices.

#include <array>
#include <cstdint>
#include <vector>

#include "purodyn/states.hpp"

namespace purodyn {

/// Bloch-axis scaling map: (x, y, z) -> (l1 x, l2 y, l3 z).
struct PauliDiagonalMap {
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double lambda3 = 1.0;
};

struct ChoiMatrix {
  ComplexMatrix matrix;  // 4x4, Hermitian, trace 2
};

DensityMatrix apply_pauli_map(const PauliDiagonalMap& map, const DensityMatrix& rho);

/// Choi matrix 2 * (id (x) E)(|Phi+><Phi+|), built entrywise from the action
/// of the map on the matrix units.
ChoiMatrix choi(const PauliDiagonalMap& map);

/// Closed-form Choi eigenvalues {1 +- l1 +- l2 +- l3} / 2 (even sign products).
std::array<double, 4> choi_eigenvalues(const PauliDiagonalMap& map);

/// Complete positivity: smallest closed-form Choi eigenvalue >= -tol.
bool is_cp(const PauliDiagonalMap& map, double tol = 1e-10);

/// U = V_T V_S^+ with V_S, V_T the deterministic eigenvector matrices of the
/// purified initial and final states. Maps the purified initial vector onto
/// the purified final vector up to a global phase.
ComplexMatrix build_transfer_unitary(const DensityMatrix& rho_init,
                                     const DensityMatrix& rho_final);

/// Deterministic Fibonacci-lattice sampling of the unit-sphere surface;
/// optional interior shells (scaled copies with a seeded azimuth offset).
std::vector<BlochVector> sample_bloch_sphere(int n, std::uint64_t seed,
                                             int interior_shells = 0);

/// The maximal CP disc map (1/2, 1/2, 0).
PauliDiagonalMap cp_disc_comparator();

/// The non-CP ball-to-disc map (1, 1, 0).
PauliDiagonalMap noncp_disc_map();

}  // namespace purodyn
