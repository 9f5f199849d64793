#pragma once

// State-dependent angular deviations of the four BB84 signal states (Alice)
// and the four measurement vectors (Bob). All angles are radians.

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "qkdsec/quantum_core.hpp"

namespace qkdsec {

/// Alice's deviations: bit 0 rect |alpha1>, bit 0 diag |45+alpha2>,
/// bit 1 rect |90+alpha3>, bit 1 diag |-45+alpha4>.
struct PreparationAngles {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double alpha3 = 0.0;
  double alpha4 = 0.0;
};

/// Bob's deviations: rect basis {|beta1>, |90+beta3>}, diag basis {|45+beta2>, |-45+beta4>}.
struct MeasurementAngles {
  double beta1 = 0.0;
  double beta2 = 0.0;
  double beta3 = 0.0;
  double beta4 = 0.0;
};

struct DeviceModel {
  PreparationAngles prep;
  MeasurementAngles meas;

  static DeviceModel perfect() { return {}; }
  /// alpha1 = beta1 = beta2 = a, every other angle zero.
  static DeviceModel family_a(double a) {
    DeviceModel m;
    m.prep.alpha1 = a;
    m.meas.beta1 = a;
    m.meas.beta2 = a;
    return m;
  }
  /// Diagonal encoding and decoding collapse onto the rectilinear basis.
  static DeviceModel rectilinear_only() {
    constexpr double quarter = std::numbers::pi / 4.0;
    DeviceModel m;
    m.prep.alpha2 = -quarter;
    m.prep.alpha4 = 3.0 * quarter;
    m.meas.beta2 = -quarter;
    m.meas.beta4 = 3.0 * quarter;
    return m;
  }
};

/// Throws ArgumentError on non-finite angles. Returns one warning per angle
/// whose magnitude reaches pi/4.
std::vector<std::string> validate(const PreparationAngles& prep);
std::vector<std::string> validate(const MeasurementAngles& meas);
std::vector<std::string> validate(const DeviceModel& model);

/// Columns are Alice's rectilinear states: (cos a1, sin a1) and (-sin a3, cos a3).
template <typename Real = double>
Matrix2<Real> prep_rect_matrix(const PreparationAngles& prep) {
  using std::cos;
  using std::sin;
  const Real a1 = static_cast<Real>(prep.alpha1);
  const Real a3 = static_cast<Real>(prep.alpha3);
  Matrix2<Real> m;
  m << cos(a1), -sin(a3),
       sin(a1), cos(a3);
  return m;
}

/// Columns are Alice's diagonal states |45+a2> and |-45+a4>.
template <typename Real = double>
Matrix2<Real> prep_diag_matrix(const PreparationAngles& prep) {
  using std::cos;
  using std::sin;
  const Real quarter = std::numbers::pi_v<Real> / Real(4);
  const Real a2 = static_cast<Real>(prep.alpha2) + quarter;
  const Real a4 = static_cast<Real>(prep.alpha4) - quarter;
  Matrix2<Real> m;
  m << cos(a2), cos(a4),
       sin(a2), sin(a4);
  return m;
}

template <typename Real = double>
struct MeasurementVectors {
  Ket2<Real> rect0;
  Ket2<Real> rect1;
  Ket2<Real> diag0;
  Ket2<Real> diag1;
};

template <typename Real = double>
MeasurementVectors<Real> meas_vectors(const MeasurementAngles& meas) {
  using std::cos;
  using std::sin;
  const Real quarter = std::numbers::pi_v<Real> / Real(4);
  const Real b1 = static_cast<Real>(meas.beta1);
  const Real b2 = static_cast<Real>(meas.beta2) + quarter;
  const Real b3 = static_cast<Real>(meas.beta3);
  const Real b4 = static_cast<Real>(meas.beta4) - quarter;
  MeasurementVectors<Real> v;
  v.rect0 << cos(b1), sin(b1);
  v.rect1 << -sin(b3), cos(b3);
  v.diag0 << cos(b2), sin(b2);
  v.diag1 << cos(b4), sin(b4);
  return v;
}

/// Probability that the two-outcome measurement {zero, one} reports 1 on `state`.
/// Outcome weights are the projector overlaps normalized by their sum.
/// Throws DegenerateBasisError when that sum is below 1e-12.
double outcome_one_probability(const Ket2c& zero, const Ket2c& one, const Ket2c& state);

/// Bit-flip rate introduced by Bob's tilted bases on ideal BB84 inputs,
/// averaged over the two bases and the two bit values:
///   (1/2)[(1/2)(s1/(s1+c3) + s3/(s3+c1)) + (1/2)(s2/(s2+c4) + s4/(s4+c2))]
/// with s_k = sin^2(beta_k), c_k = cos^2(beta_k).
double detection_flip_rate(const MeasurementAngles& meas);

/// alpha1=alpha3, alpha2=alpha4, beta1=beta3, beta2=beta4 (within 1e-12).
bool is_basis_dependent(const DeviceModel& model);

/// alpha1 = beta1 = beta2 and every other angle zero (within 1e-12).
bool is_family_a(const DeviceModel& model);

}  // namespace qkdsec
