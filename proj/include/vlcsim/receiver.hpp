#pragma once
//
// Comparator receiver front end: threshold slicer, per-slot majority vote,
// window level statistics for threshold adaptation, optional ADC model.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "vlcsim/ppm.hpp"

namespace vlcsim {

struct LevelEstimate {
  double v_average = 0.0;  // arithmetic mean over the window
  double v_low_est = 0.0;  // robust low-level estimate (10th percentile)
  long window_samples = 0;
};

struct AdcConfig {
  std::optional<int> bits;  // nullopt = ideal pass-through
  double v_ref = 5.0;       // full scale, volts
};

// out[i] = 1 iff samples[i] > threshold (strict; ties read low).
std::vector<std::uint8_t> comparator(std::span<const double> samples, double threshold);

// Majority vote per slot; an even split resolves to low.
SlotVec slot_decide(std::span<const std::uint8_t> binary, int samples_per_slot);

LevelEstimate measure_window(std::span<const double> samples);

// Clamp to [0, v_ref], round half-up to the nearest of 2^bits uniform levels.
std::vector<double> quantize(std::span<const double> samples, const AdcConfig& adc);

}  // namespace vlcsim
