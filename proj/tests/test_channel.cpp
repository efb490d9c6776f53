#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "vlcsim/channel.hpp"

using namespace vlcsim;

namespace {
constexpr std::uint8_t H = kSlotHigh;
constexpr std::uint8_t L = kSlotLow;

AnalogWaveform make_wave(std::vector<double> samples, double fs = 40000.0) {
  AnalogWaveform w;
  w.samples = std::move(samples);
  w.sample_rate = fs;
  w.slot_duration = 5.0 / fs;
  return w;
}
}  // namespace

TEST_CASE("synthesize expands slots into rectangular samples") {
  TxConfig tx{5.0, 0.0, 8000.0, 2};
  const auto w = synthesize_waveform({{H, L}, make_scheme(2, false)}, tx);
  CHECK(w.samples == std::vector<double>{5, 5, 0, 0});
  CHECK(w.sample_rate == doctest::Approx(16000.0));
  CHECK(w.slot_duration == doctest::Approx(1.0 / 8000.0));

  tx.samples_per_slot = 3;
  CHECK(synthesize_waveform({{L}, make_scheme(2, false)}, tx).samples ==
        std::vector<double>{0, 0, 0});

  TxConfig unit{1.0, 0.0, 8000.0, 1};
  CHECK(synthesize_waveform({{H, H, L, H}, make_scheme(4, true)}, unit).samples ==
        std::vector<double>{1, 1, 0, 1});

  CHECK_THROWS_AS(synthesize_waveform({{}, make_scheme(2, false)}, tx),
                  std::invalid_argument);
  TxConfig bad = tx;
  bad.v_high = bad.v_low;
  CHECK_THROWS_AS(synthesize_waveform({{H}, make_scheme(2, false)}, bad),
                  std::invalid_argument);
}

TEST_CASE("attenuation gain follows the inverse power law") {
  ChannelConfig cfg;
  cfg.reference_cm = 7.5;
  cfg.distance_cm = 7.5;
  CHECK(attenuation_gain(cfg) == doctest::Approx(1.0));
  cfg.distance_cm = 15.0;
  CHECK(attenuation_gain(cfg) == doctest::Approx(0.25));
  cfg.distance_cm = 75.0;
  CHECK(attenuation_gain(cfg) == doctest::Approx(0.01));

  cfg.distance_cm = 0.0;
  CHECK_THROWS_AS(attenuation_gain(cfg), std::invalid_argument);
  cfg.distance_cm = -3.0;
  CHECK_THROWS_AS(attenuation_gain(cfg), std::invalid_argument);
}

TEST_CASE("property: gain strictly decreases with distance") {
  ChannelConfig cfg;
  cfg.reference_cm = 10.0;
  double prev = 1e300;
  for (double d = 1.0; d <= 100.0; d += 1.7) {
    cfg.distance_cm = d;
    const double g = attenuation_gain(cfg);
    CHECK(g < prev);
    prev = g;
  }
}

TEST_CASE("noiseless propagate is the exact affine map") {
  ChannelConfig cfg;
  cfg.reference_cm = 10.0;
  cfg.distance_cm = 20.0;
  cfg.ambient_v = 0.35;
  const auto w = make_wave({0.0, 1.0, 2.5, 5.0, 3.3});
  const auto out = propagate(w, cfg);
  const double g = attenuation_gain(cfg);
  REQUIRE(out.samples.size() == w.samples.size());
  for (std::size_t i = 0; i < w.samples.size(); ++i)
    CHECK(out.samples[i] == g * w.samples[i] + cfg.ambient_v);  // bit-exact
}

TEST_CASE("ambient offset shows up on an all-zero input") {
  ChannelConfig cfg;
  cfg.ambient_v = 0.3;
  const auto out = propagate(make_wave(std::vector<double>(16, 0.0)), cfg);
  for (double v : out.samples) CHECK(v == doctest::Approx(0.3));
}

TEST_CASE("noise statistics match the configured sigma") {
  // sampling oracle: empirical std over 1e5 zero samples within 5%
  ChannelConfig cfg;
  cfg.noise_sigma0 = 0.1;
  cfg.rng_seed = 42;
  const std::size_t n = 100000;
  const auto out = propagate(make_wave(std::vector<double>(n, 0.0)), cfg);
  double sum = 0.0, sq = 0.0;
  for (double v : out.samples) {
    sum += v;
    sq += v * v;
  }
  const double mean = sum / n;
  const double stddev = std::sqrt(sq / n - mean * mean);
  CHECK(stddev == doctest::Approx(0.1).epsilon(0.05));
  CHECK(std::abs(mean) < 0.002);
}

TEST_CASE("signal-proportional noise scales with the received level") {
  ChannelConfig cfg;
  cfg.noise_sigma0 = 0.0;
  cfg.noise_sigma1 = 0.1;
  cfg.rng_seed = 43;
  const std::size_t n = 100000;
  const auto out = propagate(make_wave(std::vector<double>(n, 2.0)), cfg);
  double sum = 0.0, sq = 0.0;
  for (double v : out.samples) {
    sum += v;
    sq += v * v;
  }
  const double mean = sum / n;
  const double stddev = std::sqrt(sq / n - mean * mean);
  CHECK(stddev == doctest::Approx(0.2).epsilon(0.05));  // sigma1 * gain * v
}

TEST_CASE("propagate is deterministic for a fixed seed") {
  ChannelConfig cfg;
  cfg.noise_sigma0 = 0.25;
  cfg.noise_sigma1 = 0.02;
  cfg.rng_seed = 7;
  const auto w = make_wave({1.0, 0.0, 5.0, 2.0, 0.0, 0.0, 4.0, 1.5});
  const auto a = propagate(w, cfg);
  const auto b = propagate(w, cfg);
  CHECK(a.samples == b.samples);

  cfg.rng_seed = 8;
  const auto c = propagate(w, cfg);
  CHECK(a.samples != c.samples);
}

TEST_CASE("low-pass converges to the input level within 10 time constants") {
  ChannelConfig cfg;
  cfg.lpf_cutoff_hz = 500.0;
  const double fs = 40000.0;
  // time constant = 1/(2 pi fc); 10 tau worth of samples, then some slack
  const std::size_t n_tau10 =
      static_cast<std::size_t>(10.0 / (2.0 * 3.14159265358979 * 500.0) * fs) + 1;
  const auto out = propagate(make_wave(std::vector<double>(n_tau10 + 64, 2.0), fs), cfg);
  for (std::size_t i = n_tau10; i < out.samples.size(); ++i)
    CHECK(out.samples[i] == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("low-pass keeps unit DC gain and smears edges") {
  ChannelConfig cfg;
  cfg.lpf_cutoff_hz = 800.0;
  std::vector<double> square;
  for (int k = 0; k < 40; ++k)
    for (int i = 0; i < 5; ++i) square.push_back(k % 2 ? 5.0 : 0.0);
  const auto out = propagate(make_wave(square), cfg);
  // deformation: the first sample after a rising edge stays below the plateau
  CHECK(out.samples[5] < 5.0);
  CHECK(out.samples[5] > 0.0);
}

TEST_CASE("streaming channel matches whole-waveform propagate") {
  ChannelConfig cfg;
  cfg.noise_sigma0 = 0.05;
  cfg.rng_seed = 99;
  cfg.lpf_cutoff_hz = 2000.0;
  const auto w = make_wave({0, 0, 5, 5, 5, 0, 5, 0, 0, 5, 5, 0});
  const auto whole = propagate(w, cfg);

  ChannelSim sim(cfg, w.sample_rate);
  std::vector<double> chunked;
  for (double v : w.samples) chunked.push_back(sim.process_sample(v));
  CHECK(chunked == whole.samples);
}
