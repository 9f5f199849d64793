#pragma once

// Key-rate formulas and phase-error bounds.

#include <array>
#include <functional>
#include <optional>

#include "qkdsec/edp_analysis.hpp"
#include "qkdsec/imperfection_model.hpp"

namespace qkdsec {

struct KeyRateResult {
  double rate = 0.0;      ///< max(0, raw_rate)
  double raw_rate = 0.0;  ///< unclamped value, kept for diagnostics
  double e_bit = 0.0;
  double e_phase_bound = 0.0;
  double e_bit1 = 0.0;
  double q = 0.0;
};

/// h(x) = -x log2 x - (1-x) log2(1-x), h(0) = h(1) = 0. Inputs up to 1e-12
/// outside [0,1] are clamped; anything further throws ArgumentError.
double binary_entropy(double x);

/// Distilled fraction after noisy post-processing:
/// (1 - h(e_phase) - h(e_bit)) (1 - h(e_bit1)).
KeyRateResult keyrate_from_error_rates(double e_bit, double e_phase, double e_bit1);

/// Perfect devices: 1 - 2 h(e_bit), clamped at 0.
KeyRateResult keyrate_perfect(double e_bit);

/// G(a) = (1 + sin^2 a - cos a) / 2, so that e_phase <= e_bit + G(a) on the
/// alpha1 = beta1 = beta2 = a family.
double phase_gap_bound_analytic(double a);

/// Values of (e_bit, e_phase) at the four simplex vertices (pure X^u Z^v
/// channels), computed by the matrix route. Both rates are affine in the
/// channel, so these determine them everywhere.
struct VertexRates {
  std::array<ErrorRates, 4> at;

  ErrorRates evaluate(const PauliChannel& channel) const;
  double min_e_bit() const;
  double max_e_bit() const;
};
VertexRates vertex_rates(const PreparationAngles& prep);

/// max e_phase(p) over Pauli channels p with e_bit(p) = e_bit_target, by
/// enumerating simplex vertices and vertex-pair edge points meeting the
/// constraint. Throws InfeasibleError if the target lies outside the
/// attainable e_bit interval (more than 1e-12).
double worst_case_phase_error(const PreparationAngles& prep, double e_bit_target);
double worst_case_phase_error(const VertexRates& vertices, double e_bit_target);

struct PhaseGapAudit {
  double max_gap = 0.0;        ///< max over targets of worst_case_phase_error - target
  double argmax_e_bit = 0.0;   ///< target where it is attained
};
/// The exact worst-case gap is concave-piecewise-linear in the target with
/// breakpoints at vertex bit error rates, so checking those suffices.
PhaseGapAudit max_phase_gap(const PreparationAngles& prep);

enum class BoundMode { analytic_family_a, exact_optimizer };

/// Key rate at observed QBER `q`: e_bit1 from the measurement angles, e_bit by
/// inverting the combined QBER, e_phase bounded per `mode`.
/// analytic_family_a requires is_family_a(model) (ArgumentError otherwise).
KeyRateResult keyrate_imperfect(double q, const DeviceModel& model, BoundMode mode);

/// Bisection for the QBER where rate_fn crosses zero, to 1e-6 in Q.
/// Requires rate_fn(lo) > 0 and rate_fn(hi) <= 0 (ArgumentError otherwise).
double qber_threshold(const std::function<double(double)>& rate_fn, double lo, double hi);

/// Largest QBER with a positive key rate for `model`, searching [e_bit1, 0.5].
/// Points where the bound is infeasible count as "no key". Scans a uniform
/// grid of `scan_points` for the first positive rate, then bisects the first
/// sign change after it. Returns nullopt if no grid point yields key.
std::optional<double> max_tolerated_qber(const DeviceModel& model, BoundMode mode,
                                         int scan_points = 2000);

struct RectOnlyBound {
  double e_bit = 0.0;
  double e_phase = 0.0;        ///< exact value for this channel
  double e_phase_upper = 0.0;  ///< min(1, e_bit + 1/2), the channel-free bound
};
/// Rates when both bases collapse onto the rectilinear one:
///   e_bit = (p00 + p01 + 3 p10 + 3 p11) / 4,  e_phase = (p00 + 3 p01 + p10 + 3 p11) / 4.
RectOnlyBound rect_only_bound(const PauliChannel& channel);

}  // namespace qkdsec
