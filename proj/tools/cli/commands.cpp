#include "cli/commands.hpp"

#include <charconv>
#include <cmath>
#include <iomanip>
#include <utility>
#include <vector>

namespace qkdsec::cli {
namespace {

using Row = std::vector<std::pair<std::string, std::string>>;

void write_csv(std::ostream& out, const std::vector<Row>& rows) {
  if (rows.empty()) return;
  for (std::size_t i = 0; i < rows.front().size(); ++i) {
    out << (i ? "," : "") << rows.front()[i].first;
  }
  out << '\n';
  for (const Row& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i].second;
    out << '\n';
  }
}

void write_table(std::ostream& out, const std::vector<Row>& rows) {
  if (rows.empty()) return;
  if (rows.size() == 1) {
    for (const auto& [name, value] : rows.front()) {
      out << std::left << std::setw(12) << name << ' ' << value << '\n';
    }
    return;
  }
  for (const auto& [name, value] : rows.front()) out << std::left << std::setw(18) << name;
  out << '\n';
  for (const Row& row : rows) {
    for (const auto& cell : row) out << std::left << std::setw(18) << cell.second;
    out << '\n';
  }
}

void emit(const RunConfig& config, std::ostream& out, const std::vector<Row>& rows) {
  if (config.table) {
    write_table(out, rows);
  } else {
    write_csv(out, rows);
  }
}

void print_warnings(const DeviceModel& model, std::ostream& err) {
  for (const auto& w : validate(model)) err << "warning: " << w << '\n';
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const OutOfModelError& e) {
    err << "error (out of model): " << e.what() << '\n';
  } catch (const InfeasibleError& e) {
    err << "error (infeasible): " << e.what() << '\n';
  } catch (const DegenerateBasisError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return exit_code::internal;
  }
  return exit_code::invalid_input;
}

const char* bound_name(BoundMode mode) {
  return mode == BoundMode::analytic_family_a ? "analytic" : "exact";
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::abs(x) < 1e-15) return "0";
  const int magnitude = static_cast<int>(std::floor(std::log10(std::abs(x))));
  const int decimals = std::max(0, 11 - magnitude);
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, decimals);
  std::string s(buf, ec == std::errc{} ? end : buf);
  if (s.find('.') != std::string::npos) {
    s.erase(s.find_last_not_of('0') + 1);
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

int cmd_rates(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const DeviceModel model = resolve_model(config);
    const PauliChannel channel = resolve_channel(config);
    print_warnings(model, err);
    const double e_bit1 = detection_flip_rate(model.meas);
    const ErrorRates rates = edp_error_rates(rho_imperfect(channel, model.prep));
    const double q = combined_qber(rates.e_bit, e_bit1);
    emit(config, out,
         {{{"e_bit1", format_number(e_bit1)},
           {"e_bit", format_number(rates.e_bit)},
           {"e_phase", format_number(rates.e_phase)},
           {"Q", format_number(q)}}});
    return exit_code::ok;
  });
}

int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const DeviceModel model = resolve_model(config);
    const BoundMode mode = resolve_bound(config, model);
    print_warnings(model, err);
    const double e_bit1 = detection_flip_rate(model.meas);
    const double q_min = config.q_min.value_or(e_bit1);
    const double q_max = config.q_max.value_or(0.15);
    const double q_step = config.q_step.value_or(0.001);
    if (!(q_step > 0.0)) throw ConfigError("q_step must be positive");
    if (q_min > q_max) throw ConfigError("q_min exceeds q_max");
    if (q_max > 0.5) throw ConfigError("q_max must not exceed 0.5");
    if (q_min < e_bit1 - 1e-12) {
      throw OutOfModelError("q_min = " + format_number(q_min) +
                            " is below the measurement flip rate e_bit1 = " + format_number(e_bit1));
    }
    const auto steps = static_cast<long>(std::floor((q_max - q_min) / q_step + 1e-9));
    std::vector<Row> rows;
    rows.reserve(static_cast<std::size_t>(steps + 1));
    for (long k = 0; k <= steps; ++k) {
      const double q = q_min + static_cast<double>(k) * q_step;
      const KeyRateResult perfect = keyrate_perfect(q);
      const KeyRateResult imperfect = keyrate_imperfect(q, model, mode);
      rows.push_back({{"Q", format_number(q)},
                      {"R_perfect", format_number(perfect.rate)},
                      {"R_imperfect", format_number(imperfect.rate)}});
    }
    emit(config, out, rows);
    return exit_code::ok;
  });
}

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ProtocolConfig pc = resolve_protocol(config);
    print_warnings(pc.model, err);
    const SimResult sim = run_protocol(pc, config.threads.value_or(0));

    double q_analytic;
    if (pc.eve == Eavesdropper::none) {
      const ErrorRates rates = edp_error_rates(rho_imperfect(pc.channel, pc.model.prep));
      q_analytic = combined_qber(rates.e_bit, detection_flip_rate(pc.model.meas));
    } else {
      q_analytic = expected_qber(pc);
    }
    const double tolerance = std::max(3.0 * sim.std_error, 1e-12);
    const bool pass = std::abs(sim.qber - q_analytic) <= tolerance;
    std::string note;
    if (pc.eve != Eavesdropper::none && sim.errors == 0) note = "attack undetected";

    emit(config, out,
         {{{"sifted", std::to_string(sim.sifted)},
           {"errors", std::to_string(sim.errors)},
           {"qber", format_number(sim.qber)},
           {"stderr", format_number(sim.std_error)},
           {"Q_analytic", format_number(q_analytic)},
           {"verdict", pass ? "PASS" : "FAIL"},
           {"note", note}}});
    return pass ? exit_code::ok : exit_code::statistical_failure;
  });
}

int cmd_threshold(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const DeviceModel model = resolve_model(config);
    const BoundMode mode = resolve_bound(config, model);
    print_warnings(model, err);
    const auto threshold = max_tolerated_qber(model, mode);
    if (!threshold) {
      err << "no tolerated QBER: the key rate is zero for every Q in [e_bit1, 0.5]\n";
      return exit_code::no_key;
    }
    emit(config, out, {{{"bound", bound_name(mode)}, {"threshold", format_number(*threshold)}}});
    return exit_code::ok;
  });
}

}  // namespace qkdsec::cli
