#pragma once

#include <complex>

#include <Eigen/Dense>

namespace purodyn {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

inline ComplexMatrix identity(Index n) { return ComplexMatrix::Identity(n, n); }

inline ComplexMatrix pauli_x() {
  ComplexMatrix s(2, 2);
  s << 0, 1, 1, 0;
  return s;
}

inline ComplexMatrix pauli_y() {
  ComplexMatrix s(2, 2);
  s << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return s;
}

inline ComplexMatrix pauli_z() {
  ComplexMatrix s(2, 2);
  s << 1, 0, 0, -1;
  return s;
}

// |1><0| on a two-level system (raises the excitation number).
inline ComplexMatrix sigma_plus() {
  ComplexMatrix s = ComplexMatrix::Zero(2, 2);
  s(1, 0) = 1;
  return s;
}

inline ComplexMatrix sigma_minus() {
  ComplexMatrix s = ComplexMatrix::Zero(2, 2);
  s(0, 1) = 1;
  return s;
}

}  // namespace purodyn
