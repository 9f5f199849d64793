#include "qkdsec/edp_analysis.hpp"

#include <cmath>
#include <sstream>

namespace qkdsec {
namespace {
constexpr double kNormTol = 1e-12;
constexpr double kTraceTol = 1e-10;
constexpr double kRateTol = 1e-12;
}  // namespace

PauliChannel::PauliChannel(double p00, double p01, double p10, double p11) : p_{p00, p01, p10, p11} {
  double sum = 0.0;
  for (double p : p_) {
    if (!std::isfinite(p) || p < 0.0) {
      std::ostringstream msg;
      msg << "Pauli channel probability " << p << " is not a finite non-negative number";
      throw ArgumentError(msg.str());
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kNormTol) {
    std::ostringstream msg;
    msg.precision(15);
    msg << "Pauli channel probabilities sum to " << sum << ", expected 1";
    throw ArgumentError(msg.str());
  }
}

ErrorRates edp_error_rates(const DensityMatrix4c& rho) {
  const auto tr = rho.trace();
  if (std::abs(tr.real() - 1.0) > kTraceTol || std::abs(tr.imag()) > kTraceTol) {
    std::ostringstream msg;
    msg << "edp_error_rates: trace " << tr.real() << " differs from 1";
    throw NumericalError(msg.str());
  }
  const double phi2 = bell_projection(rho, 2);
  const double phi3 = bell_projection(rho, 3);
  const double phi4 = bell_projection(rho, 4);
  return {std::min(1.0, phi2 + phi4), std::min(1.0, phi3 + phi4)};
}

ErrorRates closed_form_rates_family_a(const PauliChannel& channel, double a) {
  const double p00 = channel.p00();
  const double p01 = channel.p01();
  const double p10 = channel.p10();
  const double p11 = channel.p11();
  const double c = std::cos(a);
  const double c2 = c * c;
  const double s2 = std::sin(a) * std::sin(a);

  // The diagonal-branch term is common to both rates.
  const double shared =
      (c2 * (p11 + p10) + s2 * (p00 + p01) + c * (-2.0 * p10 + 2.0 * p11) + p10 + 5.0 * p11) / 8.0;
  const double bit =
      (c2 * (p11 + p10) + s2 * (p00 + p01) + c * (2.0 * p10 - 2.0 * p11) + 4.0 * p01 + p10 + p11) / 8.0;
  const double phase =
      (c2 * (p00 + p01) + s2 * (p10 + p11) + c * (2.0 * p01 - 2.0 * p00) + 4.0 * p10 + p01 + p00) / 8.0;
  return {bit + shared, phase + shared};
}

double combined_qber(double e_bit, double e_bit1) {
  return 1.0 - (1.0 - e_bit1) * (1.0 - e_bit) - e_bit * e_bit1;
}

double invert_qber(double q, double e_bit1) {
  if (e_bit1 >= 0.5) {
    std::ostringstream msg;
    msg << "invert_qber: measurement flip rate " << e_bit1 << " >= 0.5 leaves Q independent of e_bit";
    throw DegenerateBasisError(msg.str());
  }
  if (q < e_bit1 - kRateTol) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "observed QBER " << q << " is below the measurement flip rate e_bit1 = " << e_bit1
        << "; the inferred EDP bit error rate would be negative";
    throw OutOfModelError(msg.str());
  }
  return std::max(0.0, (q - e_bit1) / (1.0 - 2.0 * e_bit1));
}

}  // namespace qkdsec
