#pragma once

#include <ostream>
#include <string>

#include "cli/run_config.hpp"

namespace qkdsec::cli {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int internal = 1;
inline constexpr int invalid_input = 2;
inline constexpr int statistical_failure = 3;
inline constexpr int no_key = 4;
}  // namespace exit_code

/// Fixed notation, 12 significant digits, trailing zeros dropped, locale
/// independent. Magnitudes below 1e-15 print as "0".
std::string format_number(double x);

// Each command writes its result to `out` (CSV unless config.table) and
// diagnostics to `err`, and returns the process exit code. Library errors are
// translated to exit codes here.
int cmd_rates(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_threshold(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace qkdsec::cli
