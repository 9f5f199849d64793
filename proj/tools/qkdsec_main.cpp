// qkdsec: secret-key rates and phase-error bounds for BB84 with
// state-dependent preparation and measurement imperfections.
//
// Usage:
//   qkdsec rates     [--config FILE] [--degrees|--radians] [--alpha1 X ...] [--p00 P ...]
//   qkdsec sweep     [--config FILE] [--family-a A] [--q-min Q] [--q-max Q] [--q-step S]
//   qkdsec simulate  [--config FILE] [--n-pulses N] [--seed S] [--eve none|intercept_resend_rect]
//   qkdsec threshold [--config FILE] [--bound auto|analytic|exact]
//
// Flags override values from the config file. Output is CSV on stdout unless
// --out or --table is given.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "cli/commands.hpp"

namespace {

using qkdsec::cli::RunConfig;

struct Invocation {
  std::string config_path;
  std::string out_path;
  bool degrees = false;
  bool radians = false;
  bool table = false;
  std::vector<std::pair<std::string, std::string>> values;
};

void add_common_options(CLI::App* sub, Invocation& inv) {
  sub->add_option("--config", inv.config_path, "Flat key = value config file");
  sub->add_option("--out", inv.out_path, "Write output here instead of stdout");
  sub->add_flag("--degrees", inv.degrees, "Angles are in degrees");
  sub->add_flag("--radians", inv.radians, "Angles are in radians");
  sub->add_flag("--table", inv.table, "Human-readable table instead of CSV");

  struct Key {
    const char* key;
    const char* names;
    const char* help;
  };
  static const Key keys[] = {
      {"alpha1", "--alpha1", "Alice rect bit-0 deviation"},
      {"alpha2", "--alpha2", "Alice diag bit-0 deviation"},
      {"alpha3", "--alpha3", "Alice rect bit-1 deviation"},
      {"alpha4", "--alpha4", "Alice diag bit-1 deviation"},
      {"beta1", "--beta1", "Bob rect outcome-0 deviation"},
      {"beta2", "--beta2", "Bob diag outcome-0 deviation"},
      {"beta3", "--beta3", "Bob rect outcome-1 deviation"},
      {"beta4", "--beta4", "Bob diag outcome-1 deviation"},
      {"family_a", "--family-a,--family_a", "Shortcut for alpha1 = beta1 = beta2 = A"},
      {"p00", "--p00", "Probability of no error"},
      {"p01", "--p01", "Probability of Z"},
      {"p10", "--p10", "Probability of X"},
      {"p11", "--p11", "Probability of XZ"},
      {"q_min", "--q-min,--q_min", "Sweep start"},
      {"q_max", "--q-max,--q_max", "Sweep end"},
      {"q_step", "--q-step,--q_step", "Sweep step"},
      {"n_pulses", "--n-pulses,--n_pulses", "Simulated pulses"},
      {"seed", "--seed", "Simulation seed"},
      {"eve", "--eve", "none | intercept_resend_rect"},
      {"bound", "--bound", "auto | analytic | exact"},
      {"threads", "--threads", "Simulation worker threads (0 = all cores)"},
  };
  for (const Key& k : keys) {
    const std::string key = k.key;
    sub->add_option_function<std::string>(
        k.names, [&inv, key](const std::string& v) { inv.values.emplace_back(key, v); }, k.help);
  }
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = qkdsec::cli;
  CLI::App app{"Security quantities for BB84 with state-dependent device imperfections"};
  app.require_subcommand(1);

  Invocation inv;
  CLI::App* rates = app.add_subcommand("rates", "EDP bit/phase error rates, e_bit1 and QBER");
  CLI::App* sweep = app.add_subcommand("sweep", "Key rate against QBER, perfect vs imperfect");
  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo protocol run vs analytic QBER");
  CLI::App* threshold = app.add_subcommand("threshold", "Largest QBER with positive key rate");
  for (CLI::App* sub : {rates, sweep, simulate, threshold}) add_common_options(sub, inv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::exit_code::invalid_input;
  }

  RunConfig config;
  try {
    if (!inv.config_path.empty()) config = cli::load_config_file(inv.config_path);
    RunConfig flags;
    if (inv.degrees && inv.radians) throw cli::ConfigError("--degrees and --radians are exclusive");
    if (inv.degrees) cli::set_config_value(flags, "unit", "degrees");
    if (inv.radians) cli::set_config_value(flags, "unit", "radians");
    for (const auto& [key, value] : inv.values) cli::set_config_value(flags, key, value);
    flags.table = inv.table;
    config.merge_from(flags);
  } catch (const cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::exit_code::invalid_input;
  }

  std::ofstream file;
  if (!inv.out_path.empty()) {
    file.open(inv.out_path);
    if (!file) {
      std::cerr << "error: cannot open output file '" << inv.out_path << "'\n";
      return cli::exit_code::invalid_input;
    }
  }
  std::ostream& out = inv.out_path.empty() ? std::cout : file;

  if (rates->parsed()) return cli::cmd_rates(config, out, std::cerr);
  if (sweep->parsed()) return cli::cmd_sweep(config, out, std::cerr);
  if (simulate->parsed()) return cli::cmd_simulate(config, out, std::cerr);
  return cli::cmd_threshold(config, out, std::cerr);
}
