#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>
#include <random>

#include "vlcsim/channel.hpp"
#include "vlcsim/prbs.hpp"
#include "vlcsim/receiver.hpp"

using namespace vlcsim;

namespace {
constexpr std::uint8_t H = kSlotHigh;
constexpr std::uint8_t L = kSlotLow;
}

TEST_CASE("comparator slices strictly above the threshold") {
  const std::vector<double> v{3.0, 2.5, 0.0};
  const auto out = comparator(v, 2.5);
  CHECK(out == std::vector<std::uint8_t>{1, 0, 0});  // exact tie reads low
  CHECK(comparator(std::vector<double>{0.0}, 0.1) == std::vector<std::uint8_t>{0});
}

TEST_CASE("property: comparator is invariant under affine rescaling") {
  std::mt19937_64 rng(201);
  std::uniform_real_distribution<double> sample(-10.0, 10.0);
  std::uniform_real_distribution<double> scale(0.01, 20.0);
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> v(1 + rng() % 40);
    for (auto& x : v) x = sample(rng);
    const double theta = sample(rng);
    const double a = scale(rng);
    const double b = sample(rng);
    std::vector<double> mapped(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) mapped[k] = a * v[k] + b;
    REQUIRE(comparator(mapped, a * theta + b) == comparator(v, theta));
  }
}

TEST_CASE("slot decisions by majority vote, ties to low") {
  CHECK(slot_decide(std::vector<std::uint8_t>{1, 1, 0}, 3) == SlotVec{H});
  CHECK(slot_decide(std::vector<std::uint8_t>{1, 0}, 2) == SlotVec{L});
  CHECK(slot_decide(std::vector<std::uint8_t>{0, 0, 0, 1, 1, 1}, 3) == SlotVec{L, H});
  CHECK_THROWS_AS(slot_decide(std::vector<std::uint8_t>{1, 0, 1}, 2),
                  std::invalid_argument);
}

TEST_CASE("window statistics on ideal waveforms") {
  TxConfig tx{5.0, 0.0, 8000.0, 5};

  // 2-PPM: equal high/low time, mean = (V_A + V_B) / 2
  const auto w2 = synthesize_waveform(encode_bits({0, 1, 1, 0}, make_scheme(2, false)), tx);
  const auto est2 = measure_window(w2.samples);
  CHECK(est2.v_average == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(est2.v_low_est == doctest::Approx(0.0));

  // 4-PPM with V_A = 4: one high slot in four, mean = 4/4 = 1
  TxConfig tx4{4.0, 0.0, 8000.0, 5};
  const auto w4 = synthesize_waveform(encode_bits({0, 0, 1, 1}, make_scheme(4, false)), tx4);
  const auto est4 = measure_window(w4.samples);
  // brute-force oracle for the same window
  const double oracle =
      std::accumulate(w4.samples.begin(), w4.samples.end(), 0.0) /
      static_cast<double>(w4.samples.size());
  CHECK(oracle == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(est4.v_average == doctest::Approx(oracle).epsilon(1e-12));

  const std::vector<double> flat(10, 0.7);
  const auto estc = measure_window(flat);
  CHECK(estc.v_average == doctest::Approx(0.7));
  CHECK(estc.v_low_est == doctest::Approx(0.7));
  CHECK(estc.window_samples == 10);

  CHECK_THROWS_AS(measure_window(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("property: window mean equals the brute-force mean") {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> sample(-3.0, 8.0);
  for (int i = 0; i < 500; ++i) {
    std::vector<double> v(1 + rng() % 200);
    for (auto& x : v) x = sample(rng);
    const double brute = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    const auto est = measure_window(v);
    REQUIRE(est.v_average == doctest::Approx(brute).epsilon(1e-12));
    REQUIRE(est.v_low_est <= est.v_average);
  }
}

TEST_CASE("quantizer clamps, rounds half-up, passes through when absent") {
  AdcConfig one_bit{1, 1.0};
  CHECK(quantize(std::vector<double>{0.5}, one_bit) == std::vector<double>{1.0});
  CHECK(quantize(std::vector<double>{0.49}, one_bit) == std::vector<double>{0.0});
  CHECK(quantize(std::vector<double>{-0.2}, one_bit) == std::vector<double>{0.0});
  CHECK(quantize(std::vector<double>{7.0}, one_bit) == std::vector<double>{1.0});

  AdcConfig ideal{std::nullopt, 5.0};
  const std::vector<double> v{-0.2, 0.31, 4.999, 6.2};
  CHECK(quantize(v, ideal) == v);
}

TEST_CASE("property: quantization is idempotent") {
  std::mt19937_64 rng(203);
  std::uniform_real_distribution<double> sample(-1.0, 6.0);
  AdcConfig adc{8, 5.0};
  for (int i = 0; i < 300; ++i) {
    std::vector<double> v(1 + rng() % 64);
    for (auto& x : v) x = sample(rng);
    const auto once = quantize(v, adc);
    const auto twice = quantize(once, adc);
    REQUIRE(once == twice);
  }
}

TEST_CASE("noiseless end-to-end recovers the transmitted slots") {
  std::mt19937_64 rng(204);
  const ModulationScheme schemes[] = {make_scheme(2, false), make_scheme(4, false),
                                      make_scheme(4, true)};
  for (int i = 0; i < 100; ++i) {
    const ModulationScheme s = schemes[rng() % 3];
    BitVec bits(s.bits_per_symbol() * (1 + rng() % 30));
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1u);

    TxConfig tx{5.0, 0.0, 8000.0, 5};
    const SlotSequence sent = encode_bits(bits, s);
    const auto wave = synthesize_waveform(sent, tx);

    ChannelConfig ch;
    ch.reference_cm = 10.0;
    ch.distance_cm = 10.0 + (rng() % 30);
    ch.ambient_v = 0.2;
    const auto rx = propagate(wave, ch);

    const double g = attenuation_gain(ch);
    const double lo = g * tx.v_low + ch.ambient_v;
    const double hi = g * tx.v_high + ch.ambient_v;
    std::uniform_real_distribution<double> inband(std::nextafter(lo, hi),
                                                  std::nextafter(hi, lo));
    const double theta = inband(rng);

    const SlotVec decided = slot_decide(comparator(rx.samples, theta), tx.samples_per_slot);
    REQUIRE(decided == sent.slots);
  }
}
