#include "qkdsec/security_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qkdsec {
namespace {

constexpr double kProbTol = 1e-12;
constexpr double kThresholdTol = 1e-6;

PauliChannel vertex(int k) {
  std::array<double, 4> p{};
  p[static_cast<std::size_t>(k)] = 1.0;
  return PauliChannel(p);
}

}  // namespace

double binary_entropy(double x) {
  if (!(x >= -kProbTol && x <= 1.0 + kProbTol)) {
    std::ostringstream msg;
    msg << "binary_entropy: argument " << x << " outside [0,1]";
    throw ArgumentError(msg.str());
  }
  x = std::clamp(x, 0.0, 1.0);
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

KeyRateResult keyrate_from_error_rates(double e_bit, double e_phase, double e_bit1) {
  KeyRateResult r;
  r.e_bit = e_bit;
  r.e_phase_bound = e_phase;
  r.e_bit1 = e_bit1;
  r.q = combined_qber(e_bit, e_bit1);
  r.raw_rate = (1.0 - binary_entropy(e_phase) - binary_entropy(e_bit)) * (1.0 - binary_entropy(e_bit1));
  r.rate = std::max(0.0, r.raw_rate);
  return r;
}

KeyRateResult keyrate_perfect(double e_bit) {
  if (!(e_bit >= 0.0 && e_bit <= 0.5)) {
    std::ostringstream msg;
    msg << "keyrate_perfect: bit error rate " << e_bit << " outside [0, 0.5]";
    throw ArgumentError(msg.str());
  }
  return keyrate_from_error_rates(e_bit, e_bit, 0.0);
}

double phase_gap_bound_analytic(double a) {
  const double s = std::sin(a);
  return 0.5 * (1.0 + s * s - std::cos(a));
}

ErrorRates VertexRates::evaluate(const PauliChannel& channel) const {
  ErrorRates r;
  for (std::size_t k = 0; k < 4; ++k) {
    r.e_bit += channel.probabilities()[k] * at[k].e_bit;
    r.e_phase += channel.probabilities()[k] * at[k].e_phase;
  }
  return r;
}

double VertexRates::min_e_bit() const {
  return std::min({at[0].e_bit, at[1].e_bit, at[2].e_bit, at[3].e_bit});
}

double VertexRates::max_e_bit() const {
  return std::max({at[0].e_bit, at[1].e_bit, at[2].e_bit, at[3].e_bit});
}

VertexRates vertex_rates(const PreparationAngles& prep) {
  VertexRates v;
  for (int k = 0; k < 4; ++k) {
    v.at[static_cast<std::size_t>(k)] = edp_error_rates(rho_imperfect(vertex(k), prep));
  }
  return v;
}

double worst_case_phase_error(const VertexRates& vertices, double e_bit_target) {
  const double lo = vertices.min_e_bit();
  const double hi = vertices.max_e_bit();
  if (!(e_bit_target >= lo - kProbTol && e_bit_target <= hi + kProbTol)) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "no Pauli channel has e_bit = " << e_bit_target << "; attainable interval is [" << lo
        << ", " << hi << "]";
    throw InfeasibleError(msg.str(), lo, hi);
  }
  const double t = std::clamp(e_bit_target, lo, hi);

  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& a = vertices.at[i];
    if (std::abs(a.e_bit - t) <= kProbTol) best = std::max(best, a.e_phase);
    for (std::size_t j = i + 1; j < 4; ++j) {
      const auto& b = vertices.at[j];
      const double span = a.e_bit - b.e_bit;
      if (std::abs(span) <= kProbTol) continue;  // edge parallel to the constraint
      const double lambda = (t - b.e_bit) / span;
      if (lambda < -kProbTol || lambda > 1.0 + kProbTol) continue;
      const double l = std::clamp(lambda, 0.0, 1.0);
      best = std::max(best, l * a.e_phase + (1.0 - l) * b.e_phase);
    }
  }
  return best;
}

double worst_case_phase_error(const PreparationAngles& prep, double e_bit_target) {
  return worst_case_phase_error(vertex_rates(prep), e_bit_target);
}

PhaseGapAudit max_phase_gap(const PreparationAngles& prep) {
  const VertexRates v = vertex_rates(prep);
  PhaseGapAudit audit;
  audit.max_gap = -std::numeric_limits<double>::infinity();
  for (const auto& r : v.at) {
    const double gap = worst_case_phase_error(v, r.e_bit) - r.e_bit;
    if (gap > audit.max_gap) {
      audit.max_gap = gap;
      audit.argmax_e_bit = r.e_bit;
    }
  }
  return audit;
}

KeyRateResult keyrate_imperfect(double q, const DeviceModel& model, BoundMode mode) {
  validate(model);
  if (mode == BoundMode::analytic_family_a && !is_family_a(model)) {
    throw ArgumentError(
        "analytic bound requires alpha1 = beta1 = beta2 = a with all other angles zero");
  }
  const double e_bit1 = detection_flip_rate(model.meas);
  const double e_bit = invert_qber(q, e_bit1);
  const double e_phase = mode == BoundMode::analytic_family_a
                             ? std::min(1.0, e_bit + phase_gap_bound_analytic(model.prep.alpha1))
                             : worst_case_phase_error(model.prep, e_bit);
  KeyRateResult r = keyrate_from_error_rates(e_bit, e_phase, e_bit1);
  r.q = q;
  return r;
}

double qber_threshold(const std::function<double(double)>& rate_fn, double lo, double hi) {
  if (!(lo < hi)) throw ArgumentError("qber_threshold: require lo < hi");
  if (!(rate_fn(lo) > 0.0)) {
    throw ArgumentError("qber_threshold: rate at the lower end of the bracket is not positive");
  }
  if (!(rate_fn(hi) <= 0.0)) {
    throw ArgumentError("qber_threshold: rate at the upper end of the bracket is still positive");
  }
  while (hi - lo > kThresholdTol) {
    const double mid = 0.5 * (lo + hi);
    if (rate_fn(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::optional<double> max_tolerated_qber(const DeviceModel& model, BoundMode mode, int scan_points) {
  if (scan_points < 2) throw ArgumentError("max_tolerated_qber: need at least two scan points");
  const double lo = detection_flip_rate(model.meas);
  const double hi = 0.5;
  if (!(lo < hi)) return std::nullopt;

  auto rate = [&](double q) {
    try {
      return keyrate_imperfect(q, model, mode).raw_rate;
    } catch (const InfeasibleError&) {
      return -1.0;
    }
  };

  const double step = (hi - lo) / (scan_points - 1);
  int first_positive = -1;
  for (int i = 0; i < scan_points; ++i) {
    if (rate(lo + i * step) > 0.0) {
      first_positive = i;
      break;
    }
  }
  if (first_positive < 0) return std::nullopt;
  for (int i = first_positive + 1; i < scan_points; ++i) {
    const double q = (i == scan_points - 1) ? hi : lo + i * step;
    if (rate(q) <= 0.0) return qber_threshold(rate, lo + (i - 1) * step, q);
  }
  return hi;
}

RectOnlyBound rect_only_bound(const PauliChannel& channel) {
  const double p00 = channel.p00();
  const double p01 = channel.p01();
  const double p10 = channel.p10();
  const double p11 = channel.p11();
  RectOnlyBound b;
  b.e_bit = 0.25 * (p00 + p01 + 3.0 * p10 + 3.0 * p11);
  b.e_phase = 0.25 * (p00 + 3.0 * p01 + p10 + 3.0 * p11);
  b.e_phase_upper = std::min(1.0, b.e_bit + 0.5);
  return b;
}

}  // namespace qkdsec
