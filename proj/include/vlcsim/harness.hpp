#pragma once
//
// Monte-Carlo experiment harness: PRBS source through the modem pipeline
// (encode -> synthesize -> channel -> comparator -> decode), BER/throughput
// metrics, distance sweeps and transient distance-step scenarios.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vlcsim/channel.hpp"
#include "vlcsim/ppm.hpp"
#include "vlcsim/receiver.hpp"
#include "vlcsim/threshold.hpp"

namespace vlcsim {

struct ExperimentConfig {
  ModulationScheme scheme;
  ThresholdMethod method = ThresholdMethod::level_average;
  long bit_count = 100000;
  double bit_rate = 4000.0;  // bits per second
  std::vector<double> distances_cm = {10, 20, 30, 40, 50, 60, 70, 80, 90};
  TxConfig tx;               // slot_rate is derived from bit_rate and scheme
  ChannelConfig channel;     // distance_cm and rng_seed are set per point
  ThresholdConfig threshold; // scheme is kept in sync with `scheme`
  AdcConfig adc;             // bits nullopt = ideal receiver
  int prbs_order = 9;
  std::uint32_t prbs_seed = 0x1FF;
  std::uint64_t base_seed = 1;
};

struct PointResult {
  double distance_cm = 0.0;
  double ber = 0.0;
  double throughput_bps = 0.0;
  long zero_high = 0;
  long multi_high = 0;
  double elapsed_s = 0.0;    // simulated air time, bits / bit_rate
  double theta_final = 0.0;
  std::vector<double> theta_trace;  // threshold used for each window
};

// Piecewise-constant distance over time; times strictly increasing from 0.
struct DistanceSchedule {
  struct Breakpoint {
    double time_s = 0.0;
    double distance_cm = 0.0;
  };
  std::vector<Breakpoint> points;

  double distance_at(double time_s) const;
};

struct TransientSample {
  double time_s = 0.0;       // window start
  double distance_cm = 0.0;  // distance at window start
  double window_ber = 0.0;
  double theta_v = 0.0;      // threshold used for the window
};

double measure_ber(const BitVec& tx_bits, const BitVec& rx_bits);

// correct_bits / elapsed_s; elapsed is simulated air time, not wall clock.
double measure_throughput(long correct_bits, double elapsed_s);

// One Monte-Carlo point. The channel seed is cfg.base_seed; the PRBS payload
// restarts from cfg.prbs_seed, so every point sends the same data.
PointResult run_point(const ExperimentConfig& cfg, double distance_cm);

// Points run with derived seeds (base_seed + index in ascending-distance
// order) and may execute concurrently; results are ordered by distance.
std::vector<PointResult> run_sweep(const ExperimentConfig& cfg);

// Distance moves per the schedule mid-stream; emits one sample per
// adaptation window.
std::vector<TransientSample> run_transient(const ExperimentConfig& cfg,
                                           const DistanceSchedule& schedule);

// Token maps shared by the CSV output and the CLI.
std::string to_token(ThresholdMethod method);
std::string to_token(ModulationScheme scheme);
ThresholdMethod parse_method_token(const std::string& token);
ModulationScheme parse_scheme_token(const std::string& token);

// CSV, header row mandatory, '.' decimal separator.
// Sweep columns:     distance_cm,method,scheme,ber,throughput_bps,zero_high,multi_high,theta_final
// Transient columns: time_s,distance_cm,window_ber,theta_v
void write_sweep_csv(std::ostream& os, const ExperimentConfig& cfg,
                     const std::vector<PointResult>& points);
void write_transient_csv(std::ostream& os, const std::vector<TransientSample>& rows);

}  // namespace vlcsim
