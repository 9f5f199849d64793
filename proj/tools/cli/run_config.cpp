#include "cli/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace qkdsec::cli {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc{} || ptr != end || !std::isfinite(out)) {
    throw ConfigError("invalid number for '" + key + "': '" + value + "'");
  }
  return out;
}

// Accepts integral values written in any floating form ("1000000", "1e6").
std::uint64_t parse_count(const std::string& key, const std::string& value) {
  const double d = parse_double(key, value);
  if (d < 0.0 || d != std::floor(d) || d > 1.8e19) {
    throw ConfigError("'" + key + "' must be a non-negative integer, got '" + value + "'");
  }
  return static_cast<std::uint64_t>(d);
}

template <typename T>
void take(std::optional<T>& into, const std::optional<T>& from) {
  if (from) into = from;
}

}  // namespace

void RunConfig::merge_from(const RunConfig& over) {
  take(unit, over.unit);
  for (int i = 0; i < 4; ++i) {
    take(alpha[i], over.alpha[i]);
    take(beta[i], over.beta[i]);
    take(p[i], over.p[i]);
  }
  take(family_a, over.family_a);
  take(q_min, over.q_min);
  take(q_max, over.q_max);
  take(q_step, over.q_step);
  take(n_pulses, over.n_pulses);
  take(seed, over.seed);
  take(eve, over.eve);
  take(bound, over.bound);
  take(threads, over.threads);
  table = table || over.table;
}

void set_config_value(RunConfig& c, const std::string& key, const std::string& value) {
  static const char* const alpha_keys[] = {"alpha1", "alpha2", "alpha3", "alpha4"};
  static const char* const beta_keys[] = {"beta1", "beta2", "beta3", "beta4"};
  static const char* const p_keys[] = {"p00", "p01", "p10", "p11"};
  for (int i = 0; i < 4; ++i) {
    if (key == alpha_keys[i]) return void(c.alpha[i] = parse_double(key, value));
    if (key == beta_keys[i]) return void(c.beta[i] = parse_double(key, value));
    if (key == p_keys[i]) return void(c.p[i] = parse_double(key, value));
  }
  if (key == "unit") {
    if (value == "degrees" || value == "deg") return void(c.unit = AngleUnit::degrees);
    if (value == "radians" || value == "rad") return void(c.unit = AngleUnit::radians);
    throw ConfigError("unit must be 'degrees' or 'radians', got '" + value + "'");
  }
  if (key == "family_a") return void(c.family_a = parse_double(key, value));
  if (key == "q_min") return void(c.q_min = parse_double(key, value));
  if (key == "q_max") return void(c.q_max = parse_double(key, value));
  if (key == "q_step") return void(c.q_step = parse_double(key, value));
  if (key == "n_pulses") return void(c.n_pulses = parse_count(key, value));
  if (key == "seed") return void(c.seed = parse_count(key, value));
  if (key == "threads") return void(c.threads = static_cast<unsigned>(parse_count(key, value)));
  if (key == "eve") {
    if (value == "none") return void(c.eve = Eavesdropper::none);
    if (value == "intercept_resend_rect" || value == "intercept_resend") {
      return void(c.eve = Eavesdropper::intercept_resend_rect);
    }
    throw ConfigError("eve must be 'none' or 'intercept_resend_rect', got '" + value + "'");
  }
  if (key == "bound") {
    if (value == "auto") return void(c.bound = BoundChoice::automatic);
    if (value == "analytic") return void(c.bound = BoundChoice::analytic);
    if (value == "exact") return void(c.bound = BoundChoice::exact);
    throw ConfigError("bound must be 'auto', 'analytic' or 'exact', got '" + value + "'");
  }
  throw ConfigError("unknown config key '" + key + "'");
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig c;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key or value");
    }
    set_config_value(c, key, value);
  }
  return c;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

DeviceModel resolve_model(const RunConfig& c) {
  const bool any_individual =
      std::any_of(std::begin(c.alpha), std::end(c.alpha), [](const auto& v) { return v.has_value(); }) ||
      std::any_of(std::begin(c.beta), std::end(c.beta), [](const auto& v) { return v.has_value(); });
  if (!any_individual && !c.family_a) return DeviceModel::perfect();
  if (!c.unit) {
    throw ConfigError("angles given without a unit; pass --degrees or --radians (or unit = ...)");
  }
  if (any_individual && c.family_a) {
    throw ConfigError("family_a cannot be combined with individual alpha/beta angles");
  }
  const double scale = *c.unit == AngleUnit::degrees ? std::numbers::pi / 180.0 : 1.0;
  if (c.family_a) return DeviceModel::family_a(*c.family_a * scale);

  auto angle = [&](const std::optional<double>& v) { return v.value_or(0.0) * scale; };
  DeviceModel m;
  m.prep = {angle(c.alpha[0]), angle(c.alpha[1]), angle(c.alpha[2]), angle(c.alpha[3])};
  m.meas = {angle(c.beta[0]), angle(c.beta[1]), angle(c.beta[2]), angle(c.beta[3])};
  return m;
}

PauliChannel resolve_channel(const RunConfig& c) {
  const bool any = std::any_of(std::begin(c.p), std::end(c.p), [](const auto& v) { return v.has_value(); });
  if (!any) return PauliChannel::identity();
  try {
    return PauliChannel(c.p[0].value_or(0.0), c.p[1].value_or(0.0), c.p[2].value_or(0.0),
                        c.p[3].value_or(0.0));
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  }
}

BoundMode resolve_bound(const RunConfig& c, const DeviceModel& model) {
  switch (c.bound.value_or(BoundChoice::automatic)) {
    case BoundChoice::analytic:
      if (!is_family_a(model)) {
        throw ConfigError("bound = analytic requires alpha1 = beta1 = beta2 = a, other angles zero");
      }
      return BoundMode::analytic_family_a;
    case BoundChoice::exact:
      return BoundMode::exact_optimizer;
    case BoundChoice::automatic:
      break;
  }
  return is_family_a(model) ? BoundMode::analytic_family_a : BoundMode::exact_optimizer;
}

ProtocolConfig resolve_protocol(const RunConfig& c) {
  ProtocolConfig pc;
  pc.model = resolve_model(c);
  pc.channel = resolve_channel(c);
  pc.n_pulses = c.n_pulses.value_or(1'000'000);
  pc.seed = c.seed.value_or(1);
  pc.eve = c.eve.value_or(Eavesdropper::none);
  if (pc.n_pulses == 0) throw ConfigError("n_pulses must be at least 1");
  return pc;
}

}  // namespace qkdsec::cli
