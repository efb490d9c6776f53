#include "vlcsim/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "vlcsim/harness.hpp"
#include "vlcsim/prbs.hpp"

namespace vlcsim {

namespace {

BitVec random_bits(std::mt19937_64& rng, std::size_t n) {
  BitVec bits(n);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1u);
  return bits;
}

ExperimentConfig tiny_config(ModulationScheme scheme, ThresholdMethod method) {
  ExperimentConfig cfg;
  cfg.scheme = scheme;
  cfg.method = method;
  cfg.bit_count = 2048;
  cfg.bit_rate = 4000.0;
  cfg.channel.reference_cm = 10.0;
  cfg.channel.noise_sigma0 = 0.0;
  cfg.threshold.theta_max = 5.0;
  cfg.threshold.margin = 0.02;
  cfg.threshold.fixed_theta = 2.5;
  return cfg;
}

bool roundtrip_all_schemes() {
  const ModulationScheme schemes[] = {make_scheme(2, false), make_scheme(4, false),
                                      make_scheme(4, true)};
  for (ModulationScheme s : schemes) {
    ExperimentConfig cfg = tiny_config(s, ThresholdMethod::fixed);
    const PointResult r = run_point(cfg, 10.0);
    if (r.ber != 0.0 || r.zero_high != 0 || r.multi_high != 0) return false;
  }
  return true;
}

bool complement_duality() {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const BitVec bits = random_bits(rng, 2 * (1 + rng() % 32));
    const SlotSequence plain = encode_bits(bits, make_scheme(4, false));
    const SlotSequence inv = encode_bits(bits, make_scheme(4, true));
    for (std::size_t k = 0; k < plain.slots.size(); ++k)
      if (inv.slots[k] == plain.slots[k]) return false;
  }
  return true;
}

bool ratio_exactness() {
  std::mt19937_64 rng(12);
  const ModulationScheme schemes[] = {make_scheme(2, false), make_scheme(4, false),
                                      make_scheme(4, true)};
  for (int i = 0; i < 200; ++i) {
    const ModulationScheme s = schemes[rng() % 3];
    const BitVec bits = random_bits(rng, s.bits_per_symbol() * (1 + rng() % 64));
    const SlotSequence seq = encode_bits(bits, s);
    long highs = 0;
    for (auto v : seq.slots) highs += v != kSlotLow;
    const Fraction r = expected_high_ratio(s);
    if (highs * r.den != static_cast<long>(seq.slots.size()) * r.num) return false;
  }
  return true;
}

bool comparator_affine() {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> sample(-10.0, 10.0);
  std::uniform_real_distribution<double> scale(0.01, 10.0);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> v(1 + rng() % 64);
    for (auto& x : v) x = sample(rng);
    const double theta = sample(rng);
    const double a = scale(rng);
    const double b = sample(rng);
    std::vector<double> scaled(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) scaled[k] = a * v[k] + b;
    if (comparator(v, theta) != comparator(scaled, a * theta + b)) return false;
  }
  return true;
}

bool threshold_bounds() {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> level(-2.0, 8.0);
  for (int i = 0; i < 200; ++i) {
    ThresholdConfig tc;
    tc.theta_min = 0.5;
    tc.theta_max = 4.5;
    tc.step = 0.3;
    tc.margin = 0.1;
    tc.scheme = make_scheme(2, false);
    ThresholdState sc = init_threshold(ThresholdMethod::slot_count, tc);
    ThresholdState la = init_threshold(ThresholdMethod::level_average, tc);
    for (int k = 0; k < 32; ++k) {
      sc = update_slot_count(sc, static_cast<long>(rng() % 130), 64);
      const double lo = level(rng);
      LevelEstimate est{std::max(lo, level(rng)), lo, 64};
      la = update_level(la, est);
      if (sc.theta < tc.theta_min || sc.theta > tc.theta_max) return false;
      if (la.theta < tc.theta_min || la.theta > tc.theta_max) return false;
    }
  }
  return true;
}

bool prbs_balance() {
  const BitVec seq = prbs_generate(9, prbs_all_ones_seed(9), 511);
  long ones = 0;
  for (auto b : seq) ones += b;
  return ones == 256;
}

bool determinism() {
  ExperimentConfig cfg = tiny_config(make_scheme(2, false), ThresholdMethod::level_average);
  cfg.channel.noise_sigma0 = 0.05;
  cfg.base_seed = 77;
  const PointResult a = run_point(cfg, 25.0);
  const PointResult b = run_point(cfg, 25.0);
  return a.ber == b.ber && a.throughput_bps == b.throughput_bps &&
         a.theta_final == b.theta_final && a.theta_trace == b.theta_trace;
}

}  // namespace

bool run_selftest(std::ostream& os) {
  struct Check {
    const char* name;
    bool (*fn)();
  };
  const Check checks[] = {
      {"roundtrip all schemes", roundtrip_all_schemes},
      {"ppm/ippm complement duality", complement_duality},
      {"high-slot ratio exactness", ratio_exactness},
      {"comparator affine invariance", comparator_affine},
      {"threshold stays in bounds", threshold_bounds},
      {"prbs-9 balance", prbs_balance},
      {"run_point determinism", determinism},
  };

  bool all_ok = true;
  for (const Check& c : checks) {
    const bool ok = c.fn();
    os << (ok ? "ok" : "FAIL") << ": " << c.name << '\n';
    all_ok = all_ok && ok;
  }
  return all_ok;
}

}  // namespace vlcsim
