// Acceptance suite: one PASS/FAIL line per criterion on stdout, details in a
// markdown conformance report (first argument, default conformance_report.md).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "oracles.hpp"
#include "qkdsec/edp_analysis.hpp"
#include "qkdsec/montecarlo.hpp"
#include "qkdsec/security_bounds.hpp"

using namespace qkdsec;

namespace {

struct Outcome {
  bool pass = false;
  std::string summary;
  std::string details;  // markdown body for the report
};

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt(double x, int digits = 12) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

std::string fixed(double x, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  return buf;
}

Outcome perfect_identity() {
  std::mt19937_64 gen(1001);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const ErrorRates r = edp_error_rates(rho_perfect(oracle::random_channel(gen)));
    worst = std::max(worst, std::abs(r.e_phase - r.e_bit));
  }
  std::ostringstream d;
  d << "10000 random Pauli channels (uniform on the simplex), max |e_phase - e_bit| = " << fmt(worst) << "\n";
  return {worst <= 1e-12, "max |e_phase - e_bit| = " + fmt(worst, 3), d.str()};
}

Outcome perfect_threshold() {
  const double t = qber_threshold([](double q) { return keyrate_perfect(q).raw_rate; }, 0.0, 0.5);
  std::ostringstream d;
  d << "Bisection of 1 - 2 h(Q) on [0, 0.5]: threshold = " << fixed(t, 6) << "\n";
  return {std::abs(t - 0.110) <= 0.001, "threshold = " + fixed(t, 6), d.str()};
}

Outcome closed_form_conformance() {
  std::mt19937_64 gen(1003);
  std::uniform_real_distribution<double> angle(0.0, 0.3);
  double worst_bit = 0.0, worst_phase = 0.0;
  double bit_at = 0.0, phase_at = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const PauliChannel p = oracle::random_channel(gen);
    const double a = angle(gen);
    const ErrorRates m = edp_error_rates(rho_imperfect(p, PreparationAngles{.alpha1 = a}));
    const ErrorRates c = closed_form_rates_family_a(p, a);
    if (std::abs(m.e_bit - c.e_bit) > worst_bit) {
      worst_bit = std::abs(m.e_bit - c.e_bit);
      bit_at = a;
    }
    if (std::abs(m.e_phase - c.e_phase) > worst_phase) {
      worst_phase = std::abs(m.e_phase - c.e_phase);
      phase_at = a;
    }
  }
  std::ostringstream d;
  d << "1000 random (channel, a in [0, 0.3]) pairs, matrix route vs closed forms.\n\n"
    << "| rate | max residual | at a |\n|---|---|---|\n"
    << "| e_bit | " << fmt(worst_bit, 3) << " | " << fixed(bit_at, 6) << " |\n"
    << "| e_phase | " << fmt(worst_phase, 3) << " | " << fixed(phase_at, 6) << " |\n\n"
    << "Residuals are at rounding level; no systematic pattern.\n";
  const bool pass = worst_bit <= 1e-10 && worst_phase <= 1e-10;
  return {pass, "max residual e_bit " + fmt(worst_bit, 3) + ", e_phase " + fmt(worst_phase, 3), d.str()};
}

Outcome bound_audit() {
  const double a = 0.2;
  const PreparationAngles prep{.alpha1 = a};
  const double g = phase_gap_bound_analytic(a);
  const VertexRates v = vertex_rates(prep);

  std::array<double, 4> gap{};
  double vertex_max = -1.0;
  int vertex_arg = 0;
  for (int k = 0; k < 4; ++k) {
    gap[k] = v.at[k].e_phase - v.at[k].e_bit;
    if (gap[k] > vertex_max) {
      vertex_max = gap[k];
      vertex_arg = k;
    }
  }
  const PhaseGapAudit constrained = max_phase_gap(prep);

  // Affine evaluation of the vertex values is checked against the matrix
  // route at random points before the grid relies on it.
  std::mt19937_64 gen(1004);
  double affine_err = 0.0;
  for (int i = 0; i < 200; ++i) {
    const PauliChannel p = oracle::random_channel(gen);
    const ErrorRates m = edp_error_rates(rho_imperfect(p, prep));
    const ErrorRates e = v.evaluate(p);
    affine_err = std::max({affine_err, std::abs(m.e_bit - e.e_bit), std::abs(m.e_phase - e.e_phase)});
  }

  constexpr int n = 1000;  // step 0.001
  const double h = 1.0 / n;
  double grid_max = -1.0;
  std::array<double, 4> grid_arg{};
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; i + j <= n; ++j) {
      for (int k = 0; i + j + k <= n; ++k) {
        const int l = n - i - j - k;
        const double val = h * (i * gap[0] + j * gap[1] + k * gap[2] + l * gap[3]);
        if (val > grid_max) {
          grid_max = val;
          grid_arg = {i * h, j * h, k * h, l * h};
        }
      }
    }
  }
  double spread = 0.0;
  for (double x : gap)
    for (double y : gap) spread = std::max(spread, std::abs(x - y));
  const double resolution = h * spread;

  static const char* names[4] = {"I", "Z", "X", "XZ"};
  std::ostringstream d;
  d << "a = 0.2, G(0.2) = " << fixed(g, 12) << "\n\n"
    << "| vertex | e_bit | e_phase | e_phase - e_bit |\n|---|---|---|---|\n";
  for (int k = 0; k < 4; ++k) {
    d << "| " << names[k] << " | " << fixed(v.at[k].e_bit, 12) << " | " << fixed(v.at[k].e_phase, 12) << " | "
      << fixed(gap[k], 12) << " |\n";
  }
  d << "\n- Vertex-enumeration maximum of e_phase - e_bit: " << fixed(vertex_max, 12) << " (vertex "
    << names[vertex_arg] << ")\n"
    << "- Slack G(0.2) - max: " << fixed(g - vertex_max, 12) << " (max / G = " << fixed(vertex_max / g, 9) << ")\n"
    << "- Constrained optimizer (worst_case_phase_error over all attainable e_bit): max gap "
    << fixed(constrained.max_gap, 12) << " at e_bit = " << fixed(constrained.argmax_e_bit, 12) << "\n"
    << "- Grid search, step 0.001 (" << (n + 1) * (n + 2) * static_cast<long long>(n + 3) / 6
    << " points): max " << fixed(grid_max, 12) << " at p = (" << grid_arg[0] << ", " << grid_arg[1] << ", "
    << grid_arg[2] << ", " << grid_arg[3] << ")\n"
    << "- Grid resolution bound: " << fmt(resolution, 3) << ", |grid - vertex| = "
    << fmt(std::abs(grid_max - vertex_max), 3) << "\n"
    << "- Affine evaluation vs matrix route at 200 random channels: max error " << fmt(affine_err, 3) << "\n\n"
    << "The analytic bound holds with slack: the exact worst case is G(a)/2 at this angle.\n";

  const bool pass = vertex_max <= g && std::abs(constrained.max_gap - vertex_max) <= 1e-12 &&
                    std::abs(grid_max - vertex_max) <= resolution && affine_err <= 1e-12;
  return {pass,
          "max gap " + fixed(vertex_max, 9) + " <= G " + fixed(g, 9) + ", slack " + fixed(g - vertex_max, 9) +
              ", grid agrees",
          d.str()};
}

Outcome flip_rate_family() {
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double a = 0.5 * i / 99.0;
    const double s2 = std::sin(a) * std::sin(a);
    const double expected = 0.5 * s2 / (s2 + 1.0);
    worst = std::max(worst, std::abs(detection_flip_rate({.beta1 = a, .beta2 = a}) - expected));
  }
  std::ostringstream d;
  d << "100 values of a in [0, 0.5], general flip rate vs (1/2) sin^2 a / (sin^2 a + 1): max residual "
    << fmt(worst, 3) << "\n";
  return {worst <= 1e-12, "max residual " + fmt(worst, 3), d.str()};
}

std::vector<std::array<double, 3>> parse_sweep(const std::string& csv) {
  std::vector<std::array<double, 3>> rows;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::array<double, 3> r{};
    std::istringstream ls(line);
    std::string cell;
    for (double& x : r) {
      std::getline(ls, cell, ',');
      x = std::stod(cell);
    }
    rows.push_back(r);
  }
  return rows;
}

Outcome key_rate_curve() {
  cli::RunConfig config;
  cli::set_config_value(config, "unit", "radians");
  cli::set_config_value(config, "family_a", "0.2");
  cli::set_config_value(config, "q_max", "0.15");
  cli::set_config_value(config, "q_step", "0.001");
  std::ostringstream out, err;
  const int code = cli::cmd_sweep(config, out, err);
  if (code != 0) return {false, "sweep exited with " + std::to_string(code) + ": " + err.str(), ""};

  const auto rows = parse_sweep(out.str());
  bool monotone = true;
  double last_positive_perfect = -1.0, last_positive_imperfect = -1.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && (rows[i][1] > rows[i - 1][1] || rows[i][2] > rows[i - 1][2])) monotone = false;
    if (rows[i][1] > 0.0) last_positive_perfect = rows[i][0];
    if (rows[i][2] > 0.0) last_positive_imperfect = rows[i][0];
  }
  const auto imperfect_t = max_tolerated_qber(DeviceModel::family_a(0.2), BoundMode::analytic_family_a);
  const double perfect_t = qber_threshold([](double q) { return keyrate_perfect(q).raw_rate; }, 0.0, 0.5);
  const double rate_011 = keyrate_imperfect(0.11, DeviceModel::family_a(0.2), BoundMode::analytic_family_a).rate;

  std::ostringstream d;
  d << "Parameters alpha1 = beta1 = beta2 = 0.2, sweep of the observed QBER from e_bit1 to 0.15 "
       "in steps of 0.001, analytic phase bound.\n\n"
    << "- Last Q with R_perfect > 0: " << fixed(last_positive_perfect, 3) << "; bisected threshold "
    << fixed(perfect_t, 6) << "\n"
    << "- Last Q with R_imperfect > 0: " << fixed(last_positive_imperfect, 3) << "; bisected threshold "
    << (imperfect_t ? fixed(*imperfect_t, 6) : std::string("none")) << "\n"
    << "- R_imperfect(0.11) = " << fmt(rate_011) << "\n"
    << "- Both columns nonincreasing: " << (monotone ? "yes" : "no") << "\n\n"
    << "<details><summary>Generated curve (CSV)</summary>\n\n```\n"
    << out.str() << "```\n\n</details>\n";
  const bool pass = monotone && last_positive_imperfect > 0.1100;
  return {pass,
          "R_imperfect > 0 up to Q = " + fixed(last_positive_imperfect, 3) + " (threshold " +
              (imperfect_t ? fixed(*imperfect_t, 6) : std::string("none")) + "), monotone " +
              (monotone ? "yes" : "no"),
          d.str()};
}

Outcome monte_carlo() {
  struct Case {
    std::string name;
    ProtocolConfig config;
  };
  std::vector<Case> cases(2);
  cases[0].name = "zero angles, channel (0.9, 0, 0.1, 0)";
  cases[0].config.channel = PauliChannel(0.9, 0.0, 0.1, 0.0);
  cases[1].name = "a = 0.2, identity channel";
  cases[1].config.model = DeviceModel::family_a(0.2);

  bool pass = true;
  std::ostringstream d, summary;
  d << "n = 10^6 pulses, seeds 1..100. Standard error is binomial at the analytic Q over the sifted count.\n\n"
    << "| configuration | analytic Q | mean simulated QBER | within 3 sigma | worst z |\n|---|---|---|---|---|\n";
  for (Case& c : cases) {
    c.config.n_pulses = 1'000'000;
    const ErrorRates r = edp_error_rates(rho_imperfect(c.config.channel, c.config.model.prep));
    const double q = combined_qber(r.e_bit, detection_flip_rate(c.config.model.meas));
    int within = 0;
    double mean = 0.0, worst_z = 0.0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      c.config.seed = seed;
      const SimResult sim = run_protocol(c.config);
      const double se = std::sqrt(q * (1.0 - q) / static_cast<double>(sim.sifted));
      const double z = std::abs(sim.qber - q) / se;
      worst_z = std::max(worst_z, z);
      if (z <= 3.0) ++within;
      mean += sim.qber / 100.0;
    }
    if (within < 99) pass = false;
    d << "| " << c.name << " | " << fixed(q, 7) << " | " << fixed(mean, 7) << " | " << within << "/100 | "
      << fixed(worst_z, 2) << " |\n";
    summary << within << "/100 ";
  }
  return {pass, "within 3 sigma: " + summary.str(), d.str()};
}

Outcome rect_only() {
  const RectOnlyBound id = rect_only_bound(PauliChannel::identity());
  const KeyRateResult k = keyrate_from_error_rates(id.e_bit, id.e_phase_upper, 0.0);

  // Along the whole physically meaningful range e_bit <= 1/2 the bound kills the key.
  std::mt19937_64 gen(1008);
  double worst_rate = 0.0;
  bool bound_shape = std::abs(id.e_phase_upper - (id.e_bit + 0.5)) <= 1e-15;
  for (int i = 0; i < 1000; ++i) {
    const RectOnlyBound b = rect_only_bound(oracle::random_channel(gen));
    bound_shape = bound_shape && std::abs(b.e_phase_upper - std::min(1.0, b.e_bit + 0.5)) <= 1e-15 &&
                  b.e_phase <= b.e_phase_upper + 1e-15;
    if (b.e_bit <= 0.5) worst_rate = std::max(worst_rate, keyrate_from_error_rates(b.e_bit, b.e_phase_upper, 0.0).rate);
  }

  ProtocolConfig c;
  c.model = DeviceModel::rectilinear_only();
  c.eve = Eavesdropper::intercept_resend_rect;
  c.n_pulses = 100'000;
  const SimResult sim = intercept_resend(c);

  std::ostringstream d;
  d << "- Identity channel: e_bit = " << fmt(id.e_bit) << ", e_phase = " << fmt(id.e_phase)
    << ", bound e_bit + 1/2 = " << fmt(id.e_phase_upper) << "\n"
    << "- Key rate at the bound: " << fmt(k.rate) << " (raw " << fmt(k.raw_rate) << ")\n"
    << "- 1000 random channels: bound equals min(1, e_bit + 1/2) and dominates e_phase: "
    << (bound_shape ? "yes" : "no") << "; max key rate with e_bit <= 1/2: " << fmt(worst_rate) << "\n"
    << "- Intercept-resend, 10^5 pulses: " << sim.sifted << " sifted, " << sim.errors << " errors, qber "
    << fmt(sim.qber) << "\n";
  const bool pass = bound_shape && k.rate == 0.0 && worst_rate == 0.0 && sim.errors == 0 && sim.qber == 0.0;
  return {pass,
          "bound e_bit + 1/2, key rate " + fmt(k.rate) + ", intercept qber " + fmt(sim.qber) + " over " +
              std::to_string(sim.sifted) + " sifted",
          d.str()};
}

Outcome round_trip() {
  double worst_forward = 0.0, worst_backward = 0.0;
  for (int i = 0; i <= 400; ++i) {
    for (int j = 0; j <= 400; ++j) {
      const double x = 0.001 * i, e1 = 0.001 * j;
      worst_forward = std::max(worst_forward, std::abs(invert_qber(combined_qber(x, e1), e1) - x));
      const double q = e1 + x * (0.5 - e1);  // Q values in [e1, 0.5)
      worst_backward = std::max(worst_backward, std::abs(combined_qber(invert_qber(q, e1), e1) - q));
    }
  }
  std::ostringstream d;
  d << "401 x 401 grid on [0, 0.4]^2: max |invert(combine(e_bit)) - e_bit| = " << fmt(worst_forward, 3)
    << ", max |combine(invert(Q)) - Q| = " << fmt(worst_backward, 3) << "\n";
  return {worst_forward <= 1e-12 && worst_backward <= 1e-12,
          "max error " + fmt(std::max(worst_forward, worst_backward), 3), d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string report_path = argc > 1 ? argv[1] : "conformance_report.md";

  const std::vector<Criterion> criteria = {
      {1, "perfect devices: e_phase = e_bit", 1.0, perfect_identity},
      {2, "perfect-device threshold 0.110 +/- 0.001", 0.1, perfect_threshold},
      {3, "closed-form rates match the matrix route", 5.0, closed_form_conformance},
      {4, "phase-gap bound soundness and tightness at a = 0.2", 10.0, bound_audit},
      {5, "detection flip rate on the a-family", 0.1, flip_rate_family},
      {6, "key-rate curve at a = 0.2 beats the perfect threshold", 1.0, key_rate_curve},
      {7, "Monte Carlo QBER convergence", 60.0, monte_carlo},
      {8, "rectilinear-only counterexample", 5.0, rect_only},
      {9, "combined QBER round trip", 0.1, round_trip},
  };

  std::ostringstream report;
  report << "# Conformance report\n\n| # | criterion | result | time (s) | summary |\n|---|---|---|---|---|\n";
  std::ostringstream sections;
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what(), ""};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > c.budget_seconds) {
      o.pass = false;
      o.summary += "; over time budget " + fmt(c.budget_seconds) + " s";
    }
    if (!o.pass) ++failures;
    const char* verdict = o.pass ? "PASS" : "FAIL";
    std::cout << "[" << verdict << "] criterion " << c.id << ": " << c.title << " (" << fixed(seconds, 3)
              << " s) " << o.summary << "\n";
    report << "| " << c.id << " | " << c.title << " | " << verdict << " | " << fixed(seconds, 3) << " | "
           << o.summary << " |\n";
    sections << "\n## " << c.id << ". " << c.title << "\n\n" << o.details;
  }

  std::ofstream file(report_path);
  file << report.str() << sections.str();
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << "; report written to " << report_path << "\n";
  return failures == 0 ? 0 : 1;
}
