#include "qkdsec/montecarlo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <thread>
#include <vector>

#include "qkdsec/rng.hpp"

namespace qkdsec {
namespace {

enum Basis { kRect = 0, kDiag = 1 };

struct Counts {
  std::uint64_t sifted = 0;
  std::uint64_t errors = 0;
};

// Everything a pulse needs, precomputed from the config so the hot loop only
// draws random numbers and looks up probabilities.
struct PulseTables {
  std::array<double, 4> channel_cdf{};
  // P(Bob reads 1 | basis, Alice's bit, Pauli error) with no eavesdropper.
  double bob_one[2][2][4]{};
  // P(Eve reads 1 | basis, Alice's bit, Pauli error).
  double eve_one[2][2][4]{};
  // P(Bob reads 1 | Bob's basis, Eve's resent bit).
  double bob_one_after_resend[2][2]{};
  bool eve = false;

  explicit PulseTables(const ProtocolConfig& config) : eve(config.eve != Eavesdropper::none) {
    const Matrix2c rect = prep_rect_matrix(config.model.prep);
    const Matrix2c diag = prep_diag_matrix(config.model.prep);
    const auto meas = meas_vectors(config.model.meas);
    const Ket2c zero = Ket2c::UnitX();
    const Ket2c one = Ket2c::UnitY();

    const std::array<Matrix2c, 2> prep{rect, diag};
    const std::array<std::array<Ket2c, 2>, 2> bob{{{meas.rect0, meas.rect1}, {meas.diag0, meas.diag1}}};

    const auto& p = config.channel.probabilities();
    double acc = 0.0;
    int last = 0;
    for (int k = 0; k < 4; ++k) {
      acc += p[static_cast<std::size_t>(k)];
      channel_cdf[static_cast<std::size_t>(k)] = acc;
      if (p[static_cast<std::size_t>(k)] > 0.0) last = k;
    }
    // Draws in [acc, 1) from rounding go to the last error with support.
    for (int k = last; k < 4; ++k) channel_cdf[static_cast<std::size_t>(k)] = 2.0;

    for (int b = 0; b < 2; ++b) {
      for (int x = 0; x < 2; ++x) {
        const Ket2c sent = prep[static_cast<std::size_t>(b)].col(x);
        for (int k = 0; k < 4; ++k) {
          if (p[static_cast<std::size_t>(k)] == 0.0) continue;
          const Ket2c arrived = pauli_error(k / 2, k % 2) * sent;
          if (eve) {
            eve_one[b][x][k] = outcome_one_probability(zero, one, arrived);
          } else {
            const auto& m = bob[static_cast<std::size_t>(b)];
            bob_one[b][x][k] = outcome_one_probability(m[0], m[1], arrived);
          }
        }
      }
    }
    if (eve) {
      for (int c = 0; c < 2; ++c) {
        const auto& m = bob[static_cast<std::size_t>(c)];
        bob_one_after_resend[c][0] = outcome_one_probability(m[0], m[1], zero);
        bob_one_after_resend[c][1] = outcome_one_probability(m[0], m[1], one);
      }
    }
  }

  int sample_error(double u) const {
    int k = 0;
    while (u >= channel_cdf[static_cast<std::size_t>(k)]) ++k;
    return k;
  }
};

Counts run_batch(const PulseTables& t, std::uint64_t seed, std::uint64_t batch, std::uint64_t pulses) {
  StreamEngine gen = make_stream(seed, batch);
  Counts c;
  for (std::uint64_t i = 0; i < pulses; ++i) {
    const std::uint64_t r = gen();
    const int bit = static_cast<int>(r & 1u);
    const int basis = static_cast<int>((r >> 1) & 1u);
    const int bob_basis = static_cast<int>((r >> 2) & 1u);
    const int k = t.sample_error(uniform01(gen));
    double p_one;
    if (t.eve) {
      const int resent = uniform01(gen) < t.eve_one[basis][bit][k] ? 1 : 0;
      p_one = t.bob_one_after_resend[bob_basis][resent];
    } else {
      p_one = t.bob_one[basis][bit][k];
    }
    const int bob_bit = uniform01(gen) < p_one ? 1 : 0;
    if (basis != bob_basis) continue;
    ++c.sifted;
    if (bob_bit != bit) ++c.errors;
  }
  return c;
}

}  // namespace

SimResult run_protocol(const ProtocolConfig& config, unsigned threads) {
  if (config.n_pulses == 0) throw ArgumentError("run_protocol: n_pulses must be positive");
  validate(config.model);
  const PulseTables tables(config);

  const std::uint64_t batches = (config.n_pulses + kPulsesPerBatch - 1) / kPulsesPerBatch;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, batches));

  std::vector<Counts> per_thread(threads);
  auto work = [&](unsigned worker) {
    Counts& acc = per_thread[worker];
    for (std::uint64_t b = worker; b < batches; b += threads) {
      const std::uint64_t begin = b * kPulsesPerBatch;
      const std::uint64_t n = std::min(kPulsesPerBatch, config.n_pulses - begin);
      const Counts c = run_batch(tables, config.seed, b, n);
      acc.sifted += c.sifted;
      acc.errors += c.errors;
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }

  SimResult r;
  r.n_pulses = config.n_pulses;
  for (const Counts& c : per_thread) {
    r.sifted += c.sifted;
    r.errors += c.errors;
  }
  if (r.sifted > 0) {
    r.qber = static_cast<double>(r.errors) / static_cast<double>(r.sifted);
    r.std_error = std::sqrt(r.qber * (1.0 - r.qber) / static_cast<double>(r.sifted));
  }
  return r;
}

SimResult intercept_resend(const ProtocolConfig& config, unsigned threads) {
  if (config.eve != Eavesdropper::intercept_resend_rect) {
    throw ArgumentError("intercept_resend: config must enable the intercept-resend eavesdropper");
  }
  return run_protocol(config, threads);
}

double expected_qber(const ProtocolConfig& config) {
  validate(config.model);
  const PulseTables t(config);
  const auto& p = config.channel.probabilities();
  double err = 0.0;
  for (int b = 0; b < 2; ++b) {
    for (int x = 0; x < 2; ++x) {
      for (int k = 0; k < 4; ++k) {
        const double w = 0.25 * p[static_cast<std::size_t>(k)];
        if (w == 0.0) continue;
        double p_one;
        if (t.eve) {
          const double e1 = t.eve_one[b][x][k];
          p_one = (1.0 - e1) * t.bob_one_after_resend[b][0] + e1 * t.bob_one_after_resend[b][1];
        } else {
          p_one = t.bob_one[b][x][k];
        }
        err += w * (x == 0 ? p_one : 1.0 - p_one);
      }
    }
  }
  return err;
}

}  // namespace qkdsec
