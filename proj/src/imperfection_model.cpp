#include "qkdsec/imperfection_model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace qkdsec {
namespace {

constexpr double kAngleTol = 1e-12;
constexpr double kDegenerateTol = 1e-12;

void check_angle(const char* name, double value, std::vector<std::string>& warnings) {
  if (!std::isfinite(value)) {
    throw ArgumentError(std::string("angle ") + name + " is not finite");
  }
  if (std::abs(value) >= std::numbers::pi / 4.0) {
    std::ostringstream msg;
    msg << "angle " << name << " = " << value << " rad has magnitude >= pi/4";
    warnings.push_back(msg.str());
  }
}

bool same(double a, double b) { return std::abs(a - b) <= kAngleTol; }

// sin^2(x) / (sin^2(x) + cos^2(y)): the conditional probability of the wrong
// outcome when the correct-outcome overlap is cos^2(y).
double conditional_flip(double x, double y) {
  const double s = std::sin(x) * std::sin(x);
  const double c = std::cos(y) * std::cos(y);
  const double denom = s + c;
  if (denom < kDegenerateTol) {
    std::ostringstream msg;
    msg << "degenerate measurement basis: outcome overlaps sum to " << denom;
    throw DegenerateBasisError(msg.str());
  }
  return s / denom;
}

}  // namespace

std::vector<std::string> validate(const PreparationAngles& prep) {
  std::vector<std::string> warnings;
  check_angle("alpha1", prep.alpha1, warnings);
  check_angle("alpha2", prep.alpha2, warnings);
  check_angle("alpha3", prep.alpha3, warnings);
  check_angle("alpha4", prep.alpha4, warnings);
  return warnings;
}

std::vector<std::string> validate(const MeasurementAngles& meas) {
  std::vector<std::string> warnings;
  check_angle("beta1", meas.beta1, warnings);
  check_angle("beta2", meas.beta2, warnings);
  check_angle("beta3", meas.beta3, warnings);
  check_angle("beta4", meas.beta4, warnings);
  return warnings;
}

std::vector<std::string> validate(const DeviceModel& model) {
  auto warnings = validate(model.prep);
  auto more = validate(model.meas);
  warnings.insert(warnings.end(), more.begin(), more.end());
  return warnings;
}

double outcome_one_probability(const Ket2c& zero, const Ket2c& one, const Ket2c& state) {
  const double w0 = std::norm(zero.dot(state));
  const double w1 = std::norm(one.dot(state));
  const double total = w0 + w1;
  if (total < kDegenerateTol) {
    std::ostringstream msg;
    msg << "degenerate measurement basis: outcome overlaps sum to " << total;
    throw DegenerateBasisError(msg.str());
  }
  return w1 / total;
}

double detection_flip_rate(const MeasurementAngles& meas) {
  const double rect = 0.5 * (conditional_flip(meas.beta1, meas.beta3) +
                             conditional_flip(meas.beta3, meas.beta1));
  const double diag = 0.5 * (conditional_flip(meas.beta2, meas.beta4) +
                             conditional_flip(meas.beta4, meas.beta2));
  return 0.5 * (rect + diag);
}

bool is_basis_dependent(const DeviceModel& model) {
  const auto& p = model.prep;
  const auto& m = model.meas;
  return same(p.alpha1, p.alpha3) && same(p.alpha2, p.alpha4) && same(m.beta1, m.beta3) &&
         same(m.beta2, m.beta4);
}

bool is_family_a(const DeviceModel& model) {
  const auto& p = model.prep;
  const auto& m = model.meas;
  const double a = p.alpha1;
  return same(m.beta1, a) && same(m.beta2, a) && same(p.alpha2, 0.0) && same(p.alpha3, 0.0) &&
         same(p.alpha4, 0.0) && same(m.beta3, 0.0) && same(m.beta4, 0.0);
}

}  // namespace qkdsec
