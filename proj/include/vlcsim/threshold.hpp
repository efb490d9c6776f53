#pragma once
//
// Comparator-threshold control. Three policies:
//   fixed          - calibration value, never moves
//   slot_count     - compare received high-slot count against the scheme's
//                    expected count, nudge the threshold one step per window
//   level_average  - invert the window mean through the high/low slot ratio
//                    and set the threshold to the level midpoint

#include "vlcsim/ppm.hpp"
#include "vlcsim/receiver.hpp"

namespace vlcsim {

enum class ThresholdMethod { fixed, slot_count, level_average };

struct ThresholdConfig {
  double theta_min = 0.0;
  double theta_max = 5.0;
  double fixed_theta = 2.5;  // calibration value for the fixed method
  double step = 0.0;         // slot-count increment; <= 0 selects 1% of the range
  int window_symbols = 64;   // adaptation window
  double margin = 0.1;       // keeps theta above the no-signal floor
  ModulationScheme scheme;
};

struct ThresholdState {
  ThresholdMethod method = ThresholdMethod::fixed;
  double theta = 0.0;
  double step = 0.0;
  int window_symbols = 64;
  double theta_min = 0.0;
  double theta_max = 0.0;
  double margin = 0.0;
  ModulationScheme scheme;
};

// Fixed mode starts at the calibration value; adaptive modes start at the
// midpoint of the bounds.
ThresholdState init_threshold(ThresholdMethod method, const ThresholdConfig& cfg);

// Slot-count feedback: observed > expected means the threshold is too low,
// observed < expected too high. One step per window, clamped to the bounds.
// The new threshold applies to the next window.
ThresholdState update_slot_count(ThresholdState state, long observed_high_slots,
                                 int window_symbols);

// Level averaging: with r the expected high ratio, recover the high level as
// (v_average - (1-r) * v_low_est) / r and aim for the high/low midpoint,
// never below v_low_est + margin.
ThresholdState update_level(ThresholdState state, const LevelEstimate& est);

double current_threshold(const ThresholdState& state);

}  // namespace vlcsim
