#include "vlcsim/receiver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vlcsim {

std::vector<std::uint8_t> comparator(std::span<const double> samples, double threshold) {
  std::vector<std::uint8_t> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i)
    out[i] = samples[i] > threshold ? 1 : 0;
  return out;
}

SlotVec slot_decide(std::span<const std::uint8_t> binary, int samples_per_slot) {
  if (samples_per_slot < 1)
    throw std::invalid_argument("samples per slot must be at least 1");
  if (binary.size() % static_cast<std::size_t>(samples_per_slot) != 0)
    throw std::invalid_argument("sample count not divisible by samples per slot");

  const std::size_t n_slots = binary.size() / samples_per_slot;
  SlotVec slots(n_slots);
  for (std::size_t s = 0; s < n_slots; ++s) {
    int highs = 0;
    for (int k = 0; k < samples_per_slot; ++k)
      highs += binary[s * samples_per_slot + k] != 0;
    slots[s] = 2 * highs > samples_per_slot ? kSlotHigh : kSlotLow;  // tie -> low
  }
  return slots;
}

LevelEstimate measure_window(std::span<const double> samples) {
  if (samples.empty())
    throw std::invalid_argument("measurement window is empty");

  double sum = 0.0;
  for (double v : samples) sum += v;

  LevelEstimate est;
  est.window_samples = static_cast<long>(samples.size());
  est.v_average = sum / static_cast<double>(samples.size());

  // 10th percentile with linear interpolation between order statistics.
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = 0.10 * static_cast<double>(sorted.size() - 1);
  const std::size_t i = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(i);
  double pct = sorted[i];
  if (i + 1 < sorted.size()) pct += frac * (sorted[i + 1] - sorted[i]);

  est.v_low_est = std::min(pct, est.v_average);
  return est;
}

std::vector<double> quantize(std::span<const double> samples, const AdcConfig& adc) {
  if (!adc.bits) return std::vector<double>(samples.begin(), samples.end());
  if (*adc.bits < 1 || *adc.bits > 30)
    throw std::invalid_argument("adc resolution out of range");
  if (!(adc.v_ref > 0.0))
    throw std::invalid_argument("adc full scale must be positive");

  const long levels = (1L << *adc.bits) - 1;
  const double step = adc.v_ref / static_cast<double>(levels);
  std::vector<double> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double clamped = std::clamp(samples[i], 0.0, adc.v_ref);
    double idx = std::floor(clamped / step + 0.5);  // half-up
    if (idx > static_cast<double>(levels)) idx = static_cast<double>(levels);
    out[i] = idx * step;
  }
  return out;
}

}  // namespace vlcsim
