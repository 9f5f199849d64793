#pragma once

// Small fixed-size complex linear algebra for one- and two-qubit states.
//
// Two-qubit kets are ordered |00>,|01>,|10>,|11>. The first slot is the qubit
// Alice keeps, the second slot is the transmitted qubit, so tensor(identity, M)
// is an operator acting on the transmitted qubit only.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "qkdsec/errors.hpp"

namespace qkdsec {

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using Matrix2 = Eigen::Matrix<Complex<Real>, 2, 2>;
template <typename Real>
using Matrix4 = Eigen::Matrix<Complex<Real>, 4, 4>;
template <typename Real>
using Ket2 = Eigen::Matrix<Complex<Real>, 2, 1>;
template <typename Real>
using Ket4 = Eigen::Matrix<Complex<Real>, 4, 1>;
/// Joint Alice-Bob state. Hermitian, PSD, unit trace for every state the library builds.
template <typename Real>
using DensityMatrix4 = Matrix4<Real>;

using Matrix2c = Matrix2<double>;
using Matrix4c = Matrix4<double>;
using Ket2c = Ket2<double>;
using Ket4c = Ket4<double>;
using DensityMatrix4c = DensityMatrix4<double>;

enum class StandardOp { identity, pauli_x, pauli_z, hadamard };

template <typename Real = double>
Matrix2<Real> standard_operator(StandardOp op) {
  Matrix2<Real> m;
  switch (op) {
    case StandardOp::identity:
      m << Real(1), Real(0), Real(0), Real(1);
      break;
    case StandardOp::pauli_x:
      m << Real(0), Real(1), Real(1), Real(0);
      break;
    case StandardOp::pauli_z:
      m << Real(1), Real(0), Real(0), Real(-1);
      break;
    case StandardOp::hadamard: {
      const Real s = Real(1) / std::sqrt(Real(2));
      m << s, s, s, -s;
      break;
    }
  }
  return m;
}

/// X^u Z^v, the Pauli error with bit-flip index u and phase-flip index v.
template <typename Real = double>
Matrix2<Real> pauli_error(int u, int v) {
  Matrix2<Real> m = Matrix2<Real>::Identity();
  if (u != 0) m = m * standard_operator<Real>(StandardOp::pauli_x);
  if (v != 0) m = m * standard_operator<Real>(StandardOp::pauli_z);
  return m;
}

/// Kronecker product a (x) b; block (i,j) of the result is a(i,j) * b.
template <typename DerivedA, typename DerivedB>
auto tensor(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  constexpr int rows = int{DerivedA::RowsAtCompileTime} * int{DerivedB::RowsAtCompileTime};
  constexpr int cols = int{DerivedA::ColsAtCompileTime} * int{DerivedB::ColsAtCompileTime};
  Eigen::Matrix<Scalar, rows, cols> out;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// |phi_k>, k = 1..4:
///   phi1 = (|00>+|11>)/sqrt2   phi2 = (|01>+|10>)/sqrt2
///   phi3 = (|00>-|11>)/sqrt2   phi4 = (|01>-|10>)/sqrt2
template <typename Real = double>
Ket4<Real> bell_state(int k) {
  const Real s = Real(1) / std::sqrt(Real(2));
  Ket4<Real> ket = Ket4<Real>::Zero();
  switch (k) {
    case 1: ket << s, Real(0), Real(0), s; break;
    case 2: ket << Real(0), s, s, Real(0); break;
    case 3: ket << s, Real(0), Real(0), -s; break;
    case 4: ket << Real(0), s, -s, Real(0); break;
    default:
      throw ArgumentError("bell_state: index must be in 1..4, got " + std::to_string(k));
  }
  return ket;
}

template <typename Real = double>
DensityMatrix4<Real> projector(const Ket4<Real>& ket) {
  return ket * ket.adjoint();
}

/// <phi_k|rho|phi_k>. Throws NumericalError if the expectation is not real
/// (imaginary part above 1e-9) or falls outside [0,1] by more than 1e-9.
template <typename Real = double>
Real bell_projection(const DensityMatrix4<Real>& rho, int k) {
  const Ket4<Real> phi = bell_state<Real>(k);
  const Complex<Real> value = phi.dot(rho * phi);  // dot() conjugates the left operand
  if (std::abs(value.imag()) > Real(1e-9)) {
    throw NumericalError("bell_projection: expectation has imaginary part " +
                         std::to_string(static_cast<double>(value.imag())));
  }
  const Real re = value.real();
  if (!(re > Real(-1e-9) && re < Real(1) + Real(1e-9))) {
    throw NumericalError("bell_projection: probability " + std::to_string(static_cast<double>(re)) +
                         " outside [0,1]");
  }
  return std::clamp(re, Real(0), Real(1));
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& m, double tol) {
  using Plain = typename Derived::PlainObject;
  return ((m.adjoint() * m).eval() - Plain::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <= tol;
}

template <typename Derived>
bool has_unit_columns(const Eigen::MatrixBase<Derived>& m, double tol) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (std::abs(m.col(j).norm() - 1.0) > tol) return false;
  }
  return true;
}

template <typename Derived>
bool is_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

/// Hermitian within `herm_tol`, smallest eigenvalue >= -eig_tol, trace within
/// trace_tol of 1. Validation only; not used on hot paths.
template <typename Real>
void check_density_matrix(const DensityMatrix4<Real>& rho, double herm_tol = 1e-12,
                          double eig_tol = 1e-10, double trace_tol = 1e-10) {
  if (!rho.allFinite()) throw NumericalError("density matrix has non-finite entries");
  const double asym = static_cast<double>((rho - rho.adjoint()).cwiseAbs().maxCoeff());
  if (asym > herm_tol) {
    throw NumericalError("density matrix not Hermitian (deviation " + std::to_string(asym) + ")");
  }
  const Complex<Real> tr = rho.trace();
  if (std::abs(tr.imag()) > trace_tol || std::abs(tr.real() - Real(1)) > trace_tol) {
    throw NumericalError("density matrix trace " + std::to_string(static_cast<double>(tr.real())) +
                         " differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<DensityMatrix4<Real>> solver(rho, Eigen::EigenvaluesOnly);
  const double min_eig = static_cast<double>(solver.eigenvalues().minCoeff());
  if (min_eig < -eig_tol) {
    throw NumericalError("density matrix has negative eigenvalue " + std::to_string(min_eig));
  }
}

}  // namespace qkdsec
