#pragma once

// Pulse-by-pulse simulation of prepare-and-measure BB84 with tilted devices,
// a sampled Pauli channel and an optional intercept-resend eavesdropper.

#include <cstdint>

#include "qkdsec/edp_analysis.hpp"
#include "qkdsec/imperfection_model.hpp"

namespace qkdsec {

enum class Eavesdropper { none, intercept_resend_rect };

struct ProtocolConfig {
  std::uint64_t n_pulses = 1'000'000;
  std::uint64_t seed = 1;
  DeviceModel model;
  PauliChannel channel = PauliChannel::identity();
  Eavesdropper eve = Eavesdropper::none;
};

struct SimResult {
  std::uint64_t n_pulses = 0;
  std::uint64_t sifted = 0;
  std::uint64_t errors = 0;
  double qber = 0.0;
  double std_error = 0.0;  ///< binomial standard error of qber, sqrt(q(1-q)/sifted)

  friend bool operator==(const SimResult&, const SimResult&) = default;
};

/// Pulses are split into fixed-size batches, each with its own random stream
/// derived from (seed, batch index). The result does not depend on `threads`
/// (0 = hardware concurrency).
///
/// Per pulse: Alice draws bit and basis and emits the corresponding column of
/// her preparation matrix; the channel applies X^u Z^v; Eve, if present,
/// measures in the ideal rectilinear basis and resends |0> or |90>; Bob draws a
/// basis and measures with the normalized two-outcome rule. Pulses with
/// mismatched bases are discarded.
///
/// Throws ArgumentError for n_pulses == 0 and DegenerateBasisError when Bob's
/// measurement has no support on a state that can reach him.
SimResult run_protocol(const ProtocolConfig& config, unsigned threads = 0);

/// run_protocol with config.eve required to be intercept_resend_rect.
SimResult intercept_resend(const ProtocolConfig& config, unsigned threads = 0);

/// Exact mean sifted error rate of the simulated model, by enumerating basis,
/// bit, Pauli error and Eve's outcome with their probabilities.
double expected_qber(const ProtocolConfig& config);

/// Batch size used to partition the random streams.
inline constexpr std::uint64_t kPulsesPerBatch = 1u << 16;

}  // namespace qkdsec
