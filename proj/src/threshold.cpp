#include "vlcsim/threshold.hpp"

#include <algorithm>
#include <stdexcept>

namespace vlcsim {

ThresholdState init_threshold(ThresholdMethod method, const ThresholdConfig& cfg) {
  if (!(cfg.theta_min <= cfg.theta_max))
    throw std::invalid_argument("threshold bounds are inconsistent");
  if (cfg.window_symbols < 1)
    throw std::invalid_argument("adaptation window must span at least one symbol");
  if (cfg.margin < 0.0)
    throw std::invalid_argument("margin must be non-negative");
  expected_high_ratio(cfg.scheme);  // rejects invalid schemes

  ThresholdState st;
  st.method = method;
  st.step = cfg.step > 0.0 ? cfg.step : 0.01 * (cfg.theta_max - cfg.theta_min);
  st.window_symbols = cfg.window_symbols;
  st.theta_min = cfg.theta_min;
  st.theta_max = cfg.theta_max;
  st.margin = cfg.margin;
  st.scheme = cfg.scheme;

  if (method == ThresholdMethod::fixed) {
    if (cfg.fixed_theta < cfg.theta_min || cfg.fixed_theta > cfg.theta_max)
      throw std::invalid_argument("fixed threshold outside the configured bounds");
    st.theta = cfg.fixed_theta;
  } else {
    // Neutral start with no channel knowledge.
    st.theta = 0.5 * (cfg.theta_min + cfg.theta_max);
    if (method == ThresholdMethod::slot_count && !(st.step > 0.0))
      throw std::invalid_argument("slot-count step must be positive");
  }
  return st;
}

ThresholdState update_slot_count(ThresholdState state, long observed_high_slots,
                                 int window_symbols) {
  if (state.method != ThresholdMethod::slot_count)
    throw std::logic_error("threshold state is not in slot-count mode");
  if (window_symbols < 1)
    throw std::invalid_argument("window must span at least one symbol");
  if (observed_high_slots < 0)
    throw std::invalid_argument("observed slot count must be non-negative");

  // expected = window_symbols * order * ratio; the order cancels against the
  // ratio denominator, leaving an exact integer count.
  const Fraction ratio = expected_high_ratio(state.scheme);
  const long expected = static_cast<long>(window_symbols) * ratio.num;

  if (observed_high_slots > expected)
    state.theta = std::min(state.theta + state.step, state.theta_max);
  else if (observed_high_slots < expected)
    state.theta = std::max(state.theta - state.step, state.theta_min);
  return state;
}

ThresholdState update_level(ThresholdState state, const LevelEstimate& est) {
  if (state.method != ThresholdMethod::level_average)
    throw std::logic_error("threshold state is not in level-average mode");
  if (est.window_samples < 1)
    throw std::invalid_argument("level estimate covers no samples");

  const double r = expected_high_ratio(state.scheme).value();
  const double high_est = (est.v_average - (1.0 - r) * est.v_low_est) / r;
  const double midpoint = 0.5 * (high_est + est.v_low_est);

  const double floor = std::max(state.theta_min, est.v_low_est + state.margin);
  state.theta = std::min(std::max(midpoint, floor), state.theta_max);
  return state;
}

double current_threshold(const ThresholdState& state) { return state.theta; }

}  // namespace vlcsim
