#include "vlcsim/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vlcsim {

double GaussianSource::next() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // 53-bit uniforms straight from the engine; u1 rejected at exactly 0.
  double u1 = 0.0;
  do {
    u1 = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  } while (u1 <= 0.0);
  const double u2 = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  have_spare_ = true;
  return radius * std::cos(angle);
}

double attenuation_gain(const ChannelConfig& cfg) {
  if (!(cfg.distance_cm > 0.0))
    throw std::invalid_argument("distance must be positive");
  if (!(cfg.reference_cm > 0.0))
    throw std::invalid_argument("reference distance must be positive");
  return std::pow(cfg.reference_cm / cfg.distance_cm, cfg.attenuation_exponent);
}

ChannelSim::ChannelSim(const ChannelConfig& cfg, double sample_rate)
    : cfg_(cfg), noise_(cfg.rng_seed) {
  if (cfg_.noise_sigma0 < 0.0 || cfg_.noise_sigma1 < 0.0)
    throw std::invalid_argument("noise coefficients must be non-negative");
  gain_ = attenuation_gain(cfg_);
  if (cfg_.lpf_cutoff_hz) {
    if (!(*cfg_.lpf_cutoff_hz > 0.0))
      throw std::invalid_argument("low-pass cutoff must be positive");
    if (!(sample_rate > 0.0))
      throw std::invalid_argument("sample rate must be positive");
    // Single pole, unit DC gain.
    lpf_alpha_ = 1.0 - std::exp(-2.0 * std::numbers::pi * *cfg_.lpf_cutoff_hz / sample_rate);
    lpf_enabled_ = true;
  }
}

void ChannelSim::set_distance(double distance_cm) {
  cfg_.distance_cm = distance_cm;
  gain_ = attenuation_gain(cfg_);
}

double ChannelSim::process_sample(double v) {
  double s = gain_ * v;
  if (lpf_enabled_) {
    lpf_state_ += lpf_alpha_ * (s - lpf_state_);
    s = lpf_state_;
  }
  double out = s + cfg_.ambient_v;
  const double sigma = cfg_.noise_sigma0 + cfg_.noise_sigma1 * s;
  if (sigma > 0.0) out += sigma * noise_.next();
  return out;
}

void ChannelSim::process(std::span<const double> in, std::vector<double>& out) {
  out.resize(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = process_sample(in[i]);
}

AnalogWaveform synthesize_waveform(const SlotSequence& slots, const TxConfig& tx) {
  if (!(tx.v_high > tx.v_low))
    throw std::invalid_argument("v_high must exceed v_low");
  if (!(tx.slot_rate > 0.0))
    throw std::invalid_argument("slot rate must be positive");
  if (tx.samples_per_slot < 1)
    throw std::invalid_argument("samples per slot must be at least 1");
  if (slots.slots.empty())
    throw std::invalid_argument("slot sequence is empty");

  AnalogWaveform w;
  w.samples.reserve(slots.slots.size() * tx.samples_per_slot);
  for (std::uint8_t slot : slots.slots) {
    const double level = slot != kSlotLow ? tx.v_high : tx.v_low;
    for (int k = 0; k < tx.samples_per_slot; ++k) w.samples.push_back(level);
  }
  w.sample_rate = tx.slot_rate * tx.samples_per_slot;
  w.slot_duration = 1.0 / tx.slot_rate;
  return w;
}

AnalogWaveform propagate(const AnalogWaveform& w, const ChannelConfig& cfg) {
  if (w.samples.empty())
    throw std::invalid_argument("waveform is empty");
  ChannelSim sim(cfg, w.sample_rate);
  AnalogWaveform out;
  out.sample_rate = w.sample_rate;
  out.slot_duration = w.slot_duration;
  sim.process(w.samples, out.samples);
  return out;
}

}  // namespace vlcsim
