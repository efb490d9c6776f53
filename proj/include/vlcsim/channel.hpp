#pragma once
//
// Transmit-waveform synthesis and the optical channel model: inverse-power
// distance attenuation, ambient light offset, Gaussian noise with an optional
// signal-proportional term, and an optional first-order low-pass that rounds
// off the rectangular edges.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "vlcsim/ppm.hpp"

namespace vlcsim {

struct TxConfig {
  double v_high = 5.0;        // receive-referred LED-on level at the reference distance
  double v_low = 0.0;         // LED-off level
  double slot_rate = 8000.0;  // slots per second
  int samples_per_slot = 5;   // odd avoids majority-vote ties
};

struct ChannelConfig {
  double distance_cm = 10.0;
  double reference_cm = 10.0;
  double attenuation_exponent = 2.0;
  double ambient_v = 0.0;     // DC background light
  double noise_sigma0 = 0.0;  // constant noise std, volts
  double noise_sigma1 = 0.0;  // additional std per volt of received signal
  std::optional<double> lpf_cutoff_hz;
  std::uint64_t rng_seed = 1;
};

struct AnalogWaveform {
  std::vector<double> samples;
  double sample_rate = 0.0;   // slot_rate * samples_per_slot
  double slot_duration = 0.0; // seconds
};

// Deterministic standard-normal stream (Box-Muller over mt19937_64). Avoids
// std::normal_distribution so the sample stream for a given seed is identical
// on every platform.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}
  double next();

 private:
  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Streaming form of the channel: keeps noise and filter state across chunks
// so a long run can be processed piecewise and the distance can move
// mid-stream (transient experiments).
class ChannelSim {
 public:
  ChannelSim(const ChannelConfig& cfg, double sample_rate);

  void set_distance(double distance_cm);
  double gain() const { return gain_; }
  double process_sample(double v);
  void process(std::span<const double> in, std::vector<double>& out);

 private:
  ChannelConfig cfg_;
  double gain_ = 1.0;
  double lpf_alpha_ = 0.0;
  double lpf_state_ = 0.0;
  bool lpf_enabled_ = false;
  GaussianSource noise_;
};

// Each slot expands to samples_per_slot identical samples at v_high or v_low.
AnalogWaveform synthesize_waveform(const SlotSequence& slots, const TxConfig& tx);

// (reference_cm / distance_cm) ^ attenuation_exponent; 1 at the reference.
double attenuation_gain(const ChannelConfig& cfg);

// Per sample: v' = gain*v (low-passed if configured) + ambient + noise, with
// noise std = sigma0 + sigma1 * (received signal level). Bit-identical output
// for identical inputs and rng_seed.
AnalogWaveform propagate(const AnalogWaveform& w, const ChannelConfig& cfg);

}  // namespace vlcsim
