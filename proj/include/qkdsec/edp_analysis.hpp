#pragma once

// Post-sifting joint states of the entanglement-based protocol and the error
// rates read off them by Bell projections.

#include <array>

#include "qkdsec/imperfection_model.hpp"
#include "qkdsec/quantum_core.hpp"

namespace qkdsec {

/// Probabilities of the Pauli errors X^u Z^v, indexed p[2*u + v].
class PauliChannel {
 public:
  /// Throws ArgumentError unless every entry is finite and >= 0 and the sum is 1 within 1e-12.
  PauliChannel(double p00, double p01, double p10, double p11);
  explicit PauliChannel(const std::array<double, 4>& p) : PauliChannel(p[0], p[1], p[2], p[3]) {}

  static PauliChannel identity() { return {1.0, 0.0, 0.0, 0.0}; }
  static PauliChannel depolarizing() { return {0.25, 0.25, 0.25, 0.25}; }

  double p00() const noexcept { return p_[0]; }
  double p01() const noexcept { return p_[1]; }
  double p10() const noexcept { return p_[2]; }
  double p11() const noexcept { return p_[3]; }
  double prob(int u, int v) const noexcept { return p_[2 * u + v]; }
  const std::array<double, 4>& probabilities() const noexcept { return p_; }

 private:
  std::array<double, 4> p_;
};

/// Weight of each surviving (i == j) basis pair after sifting.
inline constexpr double kSiftedBranchWeight = 0.5;

struct ErrorRates {
  double e_bit = 0.0;
  double e_phase = 0.0;
};

namespace detail {

template <typename Real>
void add_branch(DensityMatrix4<Real>& rho, const Matrix2<Real>& op, Real weight) {
  const Matrix4<Real> lifted = tensor(Matrix2<Real>::Identity(), op);
  const Ket4<Real> ket = lifted * bell_state<Real>(1);
  // Unit-column preparation matrices keep every branch normalized.
  if (std::abs(static_cast<double>(ket.squaredNorm()) - 1.0) > 1e-12) {
    throw NumericalError("preparation branch state is not normalized");
  }
  rho.noalias() += weight * (ket * ket.adjoint());
}

}  // namespace detail

/// Sum over Pauli errors of the two sifted branches, each with its own
/// preparation matrix and Bob's basis rotation:
///   rect: I_B X^u Z^v prep_rect      diag: H X^u Z^v prep_diag
/// The measurement angles play no part here; they enter through detection_flip_rate.
template <typename Real = double>
DensityMatrix4<Real> rho_imperfect(const PauliChannel& channel, const PreparationAngles& prep) {
  const Matrix2<Real> rect = prep_rect_matrix<Real>(prep);
  const Matrix2<Real> diag = prep_diag_matrix<Real>(prep);
  const Matrix2<Real> hadamard = standard_operator<Real>(StandardOp::hadamard);

  DensityMatrix4<Real> rho = DensityMatrix4<Real>::Zero();
  for (int u = 0; u < 2; ++u) {
    for (int v = 0; v < 2; ++v) {
      const Real p = static_cast<Real>(channel.prob(u, v));
      if (p == Real(0)) continue;
      const Matrix2<Real> error = pauli_error<Real>(u, v);
      const Real w = p * static_cast<Real>(kSiftedBranchWeight);
      detail::add_branch<Real>(rho, error * rect, w);
      detail::add_branch<Real>(rho, hadamard * error * diag, w);
    }
  }
  return rho;
}

/// Perfect devices: both preparation matrices ideal (identity and Hadamard).
template <typename Real = double>
DensityMatrix4<Real> rho_perfect(const PauliChannel& channel) {
  return rho_imperfect<Real>(channel, PreparationAngles{});
}

/// e_bit = <phi2|rho|phi2> + <phi4|rho|phi4>, e_phase = <phi3|rho|phi3> + <phi4|rho|phi4>.
/// Throws NumericalError if the trace of rho is not 1 within 1e-10.
ErrorRates edp_error_rates(const DensityMatrix4c& rho);

/// Printed closed forms for the family alpha1 = beta1 = beta2 = a (other angles zero).
ErrorRates closed_form_rates_family_a(const PauliChannel& channel, double a);

/// Q = 1 - (1 - e_bit1)(1 - e_bit) - e_bit * e_bit1.
double combined_qber(double e_bit, double e_bit1);

/// Inverse of combined_qber in e_bit: (Q - e_bit1) / (1 - 2 e_bit1).
/// Throws DegenerateBasisError if e_bit1 >= 0.5 and OutOfModelError if Q < e_bit1.
double invert_qber(double q, double e_bit1);

}  // namespace qkdsec
