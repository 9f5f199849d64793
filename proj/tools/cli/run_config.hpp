#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "qkdsec/edp_analysis.hpp"
#include "qkdsec/imperfection_model.hpp"
#include "qkdsec/montecarlo.hpp"
#include "qkdsec/security_bounds.hpp"

namespace qkdsec::cli {

/// Bad user input; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class AngleUnit { degrees, radians };
enum class BoundChoice { automatic, analytic, exact };

/// Raw settings as given by the config file and/or flags. Every field is
/// optional so that flags can be layered over the file.
struct RunConfig {
  std::optional<AngleUnit> unit;
  std::optional<double> alpha[4];
  std::optional<double> beta[4];
  std::optional<double> family_a;
  std::optional<double> p[4];  // p00, p01, p10, p11
  std::optional<double> q_min;
  std::optional<double> q_max;
  std::optional<double> q_step;
  std::optional<std::uint64_t> n_pulses;
  std::optional<std::uint64_t> seed;
  std::optional<Eavesdropper> eve;
  std::optional<BoundChoice> bound;
  std::optional<unsigned> threads;
  bool table = false;

  /// Fields set in `over` replace those here.
  void merge_from(const RunConfig& over);
};

/// Flat `key = value` text; '#' starts a comment. Unknown keys and malformed
/// values throw ConfigError.
RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);

/// Applies one key/value pair (same key names as the config file).
void set_config_value(RunConfig& config, const std::string& key, const std::string& value);

/// Angles converted to radians. Throws ConfigError if any angle is present
/// without an explicit unit, or if family_a is mixed with individual angles.
DeviceModel resolve_model(const RunConfig& config);

/// Identity channel when no probability is given; otherwise missing entries are 0.
PauliChannel resolve_channel(const RunConfig& config);

BoundMode resolve_bound(const RunConfig& config, const DeviceModel& model);

ProtocolConfig resolve_protocol(const RunConfig& config);

}  // namespace qkdsec::cli
