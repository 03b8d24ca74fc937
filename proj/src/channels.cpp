#include "purodyn/channels.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace purodyn {

namespace {

// Action of the map on an arbitrary 2x2 matrix via its Pauli expansion.
ComplexMatrix apply_to_operator(const PauliDiagonalMap& map, const ComplexMatrix& m) {
  const Complex c0 = 0.5 * m.trace();
  const Complex c1 = 0.5 * (pauli_x() * m).trace();
  const Complex c2 = 0.5 * (pauli_y() * m).trace();
  const Complex c3 = 0.5 * (pauli_z() * m).trace();
  return c0 * identity(2) + map.lambda1 * c1 * pauli_x() +
         map.lambda2 * c2 * pauli_y() + map.lambda3 * c3 * pauli_z();
}

}  // namespace

DensityMatrix apply_pauli_map(const PauliDiagonalMap& map, const DensityMatrix& rho) {
  if (rho.dim() != 2) {
    throw DimensionMismatch("apply_pauli_map expects a qubit state");
  }
  const BlochVector v = density_to_bloch(rho);
  return bloch_to_density(
      {map.lambda1 * v.x, map.lambda2 * v.y, map.lambda3 * v.z});
}

ChoiMatrix choi(const PauliDiagonalMap& map) {
  ComplexMatrix c = ComplexMatrix::Zero(4, 4);
  for (Index i = 0; i < 2; ++i) {
    for (Index j = 0; j < 2; ++j) {
      ComplexMatrix unit = ComplexMatrix::Zero(2, 2);
      unit(i, j) = 1.0;
      c.block(2 * i, 2 * j, 2, 2) = apply_to_operator(map, unit);
    }
  }
  return ChoiMatrix{std::move(c)};
}

std::array<double, 4> choi_eigenvalues(const PauliDiagonalMap& map) {
  const double l1 = map.lambda1, l2 = map.lambda2, l3 = map.lambda3;
  return {0.5 * (1 + l1 + l2 + l3), 0.5 * (1 + l1 - l2 - l3),
          0.5 * (1 - l1 + l2 - l3), 0.5 * (1 - l1 - l2 + l3)};
}

bool is_cp(const PauliDiagonalMap& map, double tol) {
  const std::array<double, 4> eigs = choi_eigenvalues(map);
  double min_eig = eigs[0];
  for (double e : eigs) min_eig = std::min(min_eig, e);
  return min_eig >= -tol;
}

ComplexMatrix build_transfer_unitary(const DensityMatrix& rho_init,
                                     const DensityMatrix& rho_final) {
  if (rho_init.dim() != 2 || rho_final.dim() != 2) {
    throw InvalidDensityMatrix("transfer unitaries are built for qubit states");
  }
  const PureState psi_s = purify(rho_init);
  const PureState psi_t = purify(rho_final);
  const ComplexMatrix v_s = hermitian_eig(psi_s.outer()).eigenvectors;
  const ComplexMatrix v_t = hermitian_eig(psi_t.outer()).eigenvectors;
  return v_t * v_s.adjoint();
}

std::vector<BlochVector> sample_bloch_sphere(int n, std::uint64_t seed,
                                             int interior_shells) {
  if (n < 1) throw Error("sample_bloch_sphere needs n >= 1");
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));

  auto lattice = [&](double radius, double azimuth_offset) {
    std::vector<BlochVector> pts;
    pts.reserve(static_cast<std::size_t>(n));
    if (n == 1) {
      pts.push_back({0.0, 0.0, radius});
      return pts;
    }
    for (int i = 0; i < n; ++i) {
      const double z = 1.0 - 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden_angle * static_cast<double>(i) + azimuth_offset;
      pts.push_back({radius * r * std::cos(phi), radius * r * std::sin(phi), radius * z});
    }
    return pts;
  };

  std::vector<BlochVector> out = lattice(1.0, 0.0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> offset(0.0, 2.0 * std::numbers::pi);
  for (int shell = 1; shell <= interior_shells; ++shell) {
    const double radius =
        static_cast<double>(shell) / static_cast<double>(interior_shells + 1);
    const std::vector<BlochVector> pts = lattice(radius, offset(rng));
    out.insert(out.end(), pts.begin(), pts.end());
  }
  return out;
}

PauliDiagonalMap cp_disc_comparator() { return {0.5, 0.5, 0.0}; }

PauliDiagonalMap noncp_disc_map() { return {1.0, 1.0, 0.0}; }

}  // namespace purodyn
