#include "vlcsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "vlcsim/prbs.hpp"

namespace vlcsim {

namespace {

struct PipelineSetup {
  ModulationScheme scheme;
  int bits_per_symbol = 1;
  int samples_per_slot = 1;
  double slot_rate = 0.0;
  double sample_rate = 0.0;
  long total_symbols = 0;
  long bits_used = 0;
};

PipelineSetup make_setup(const ExperimentConfig& cfg) {
  if (cfg.bit_count < 1) throw std::invalid_argument("bit count must be at least 1");
  if (!(cfg.bit_rate > 0.0)) throw std::invalid_argument("bit rate must be positive");
  if (cfg.adc.bits && (*cfg.adc.bits < 4 || *cfg.adc.bits > 16))
    throw std::invalid_argument("adc resolution must be between 4 and 16 bits");

  PipelineSetup s;
  s.scheme = make_scheme(cfg.scheme.order, cfg.scheme.inverted);
  s.bits_per_symbol = s.scheme.bits_per_symbol();
  s.samples_per_slot = cfg.tx.samples_per_slot;
  s.total_symbols = cfg.bit_count / s.bits_per_symbol;  // whole symbols only
  s.bits_used = s.total_symbols * s.bits_per_symbol;
  if (s.total_symbols < 1)
    throw std::invalid_argument("bit count too small for one symbol");
  s.slot_rate = cfg.bit_rate / s.bits_per_symbol * s.scheme.order;
  s.sample_rate = s.slot_rate * s.samples_per_slot;
  return s;
}

long hamming(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  long errors = 0;
  for (std::size_t i = 0; i < a.size(); ++i) errors += a[i] != b[i];
  return errors;
}

long count_high(const SlotVec& slots) {
  long n = 0;
  for (std::uint8_t s : slots) n += s != kSlotLow;
  return n;
}

ThresholdConfig threshold_config_for(const ExperimentConfig& cfg, ModulationScheme scheme) {
  ThresholdConfig tc = cfg.threshold;
  tc.scheme = scheme;
  return tc;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

double DistanceSchedule::distance_at(double time_s) const {
  if (points.empty()) throw std::invalid_argument("distance schedule is empty");
  double d = points.front().distance_cm;
  for (const Breakpoint& bp : points) {
    if (bp.time_s <= time_s) d = bp.distance_cm;
    else break;
  }
  return d;
}

double measure_ber(const BitVec& tx_bits, const BitVec& rx_bits) {
  if (tx_bits.empty())
    throw std::invalid_argument("cannot measure BER over zero bits");
  if (tx_bits.size() != rx_bits.size())
    throw std::invalid_argument("bit stream lengths differ");
  return static_cast<double>(hamming(tx_bits, rx_bits)) /
         static_cast<double>(tx_bits.size());
}

double measure_throughput(long correct_bits, double elapsed_s) {
  if (correct_bits < 0)
    throw std::invalid_argument("correct bit count must be non-negative");
  if (!(elapsed_s > 0.0))
    throw std::invalid_argument("elapsed time must be positive");
  return static_cast<double>(correct_bits) / elapsed_s;
}

PointResult run_point(const ExperimentConfig& cfg, double distance_cm) {
  const PipelineSetup setup = make_setup(cfg);

  const BitVec tx_bits =
      prbs_generate(cfg.prbs_order, cfg.prbs_seed, static_cast<std::size_t>(setup.bits_used));
  const SlotSequence tx_slots = encode_bits(tx_bits, setup.scheme);

  TxConfig tx = cfg.tx;
  tx.slot_rate = setup.slot_rate;
  const AnalogWaveform tx_wave = synthesize_waveform(tx_slots, tx);

  ChannelConfig ch = cfg.channel;
  ch.distance_cm = distance_cm;
  ch.rng_seed = cfg.base_seed;
  const AnalogWaveform rx_wave = propagate(tx_wave, ch);
  const std::vector<double> rx = quantize(rx_wave.samples, cfg.adc);

  ThresholdState state = init_threshold(cfg.method, threshold_config_for(cfg, setup.scheme));

  PointResult result;
  result.distance_cm = distance_cm;

  const int spp = setup.samples_per_slot;
  const int order = setup.scheme.order;
  const int bps = setup.bits_per_symbol;
  long errors = 0;

  for (long done = 0; done < setup.total_symbols;) {
    const long sym_in_window =
        std::min<long>(state.window_symbols, setup.total_symbols - done);
    const std::size_t sample_begin = static_cast<std::size_t>(done) * order * spp;
    const std::size_t sample_count = static_cast<std::size_t>(sym_in_window) * order * spp;
    const std::span<const double> window(rx.data() + sample_begin, sample_count);

    // Level averaging tracks the incoming signal, so the measurement feeds
    // the decision of the same window; slot counting adjusts afterwards.
    if (cfg.method == ThresholdMethod::level_average)
      state = update_level(state, measure_window(window));

    const double theta = current_threshold(state);
    const SlotVec decided = slot_decide(comparator(window, theta), spp);
    const DecodeResult dec = decode_slots(SlotSequence{decided, setup.scheme});

    const std::span<const std::uint8_t> sent(tx_bits.data() + done * bps,
                                             static_cast<std::size_t>(sym_in_window) * bps);
    errors += hamming(sent, dec.bits);
    result.zero_high += dec.anomalies.zero_high;
    result.multi_high += dec.anomalies.multi_high;

    if (cfg.method == ThresholdMethod::slot_count)
      state = update_slot_count(state, count_high(decided), static_cast<int>(sym_in_window));

    result.theta_trace.push_back(theta);
    done += sym_in_window;
  }

  result.ber = static_cast<double>(errors) / static_cast<double>(setup.bits_used);
  result.elapsed_s = static_cast<double>(setup.bits_used) / cfg.bit_rate;
  result.throughput_bps = measure_throughput(setup.bits_used - errors, result.elapsed_s);
  result.theta_final = current_threshold(state);
  return result;
}

std::vector<PointResult> run_sweep(const ExperimentConfig& cfg) {
  if (cfg.distances_cm.empty())
    throw std::invalid_argument("sweep needs at least one distance");
  for (double d : cfg.distances_cm)
    if (!(d > 0.0)) throw std::invalid_argument("sweep distances must be positive");

  std::vector<double> distances = cfg.distances_cm;
  std::sort(distances.begin(), distances.end());

  const std::size_t n = distances.size();
  std::vector<PointResult> results(n);

  // Points are independent: one derived seed each, private state, results
  // collected by index.
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      ExperimentConfig point_cfg = cfg;
      point_cfg.base_seed = cfg.base_seed + i;
      results[i] = run_point(point_cfg, distances[i]);
    }
  };

  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const unsigned n_threads = std::min<unsigned>(hw, static_cast<unsigned>(n));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return results;
}

std::vector<TransientSample> run_transient(const ExperimentConfig& cfg,
                                           const DistanceSchedule& schedule) {
  if (schedule.points.empty())
    throw std::invalid_argument("distance schedule is empty");
  if (schedule.points.front().time_s != 0.0)
    throw std::invalid_argument("distance schedule must start at time 0");
  for (std::size_t i = 0; i < schedule.points.size(); ++i) {
    if (!(schedule.points[i].distance_cm > 0.0))
      throw std::invalid_argument("schedule distances must be positive");
    if (i > 0 && !(schedule.points[i].time_s > schedule.points[i - 1].time_s))
      throw std::invalid_argument("schedule times must be strictly increasing");
  }

  const PipelineSetup setup = make_setup(cfg);
  const BitVec tx_bits =
      prbs_generate(cfg.prbs_order, cfg.prbs_seed, static_cast<std::size_t>(setup.bits_used));
  const SlotSequence tx_slots = encode_bits(tx_bits, setup.scheme);

  TxConfig tx = cfg.tx;
  tx.slot_rate = setup.slot_rate;
  const AnalogWaveform tx_wave = synthesize_waveform(tx_slots, tx);

  ChannelConfig ch = cfg.channel;
  ch.distance_cm = schedule.points.front().distance_cm;
  ch.rng_seed = cfg.base_seed;
  ChannelSim sim(ch, setup.sample_rate);

  ThresholdState state = init_threshold(cfg.method, threshold_config_for(cfg, setup.scheme));

  const int spp = setup.samples_per_slot;
  const int order = setup.scheme.order;
  const int bps = setup.bits_per_symbol;

  std::vector<TransientSample> out;
  std::vector<double> rx;
  std::size_t bp_cursor = 0;
  double current_distance = schedule.points.front().distance_cm;
  std::size_t global_sample = 0;

  for (long done = 0; done < setup.total_symbols;) {
    const long sym_in_window =
        std::min<long>(state.window_symbols, setup.total_symbols - done);
    const std::size_t sample_begin = static_cast<std::size_t>(done) * order * spp;
    const std::size_t sample_count = static_cast<std::size_t>(sym_in_window) * order * spp;
    const double window_start_s = static_cast<double>(global_sample) / setup.sample_rate;

    rx.resize(sample_count);
    for (std::size_t k = 0; k < sample_count; ++k, ++global_sample) {
      const double t = static_cast<double>(global_sample) / setup.sample_rate;
      while (bp_cursor + 1 < schedule.points.size() &&
             schedule.points[bp_cursor + 1].time_s <= t) {
        ++bp_cursor;
        current_distance = schedule.points[bp_cursor].distance_cm;
        sim.set_distance(current_distance);
      }
      rx[k] = sim.process_sample(tx_wave.samples[sample_begin + k]);
    }
    const std::vector<double> sig = quantize(rx, cfg.adc);

    if (cfg.method == ThresholdMethod::level_average)
      state = update_level(state, measure_window(sig));

    const double theta = current_threshold(state);
    const SlotVec decided = slot_decide(comparator(sig, theta), spp);
    const DecodeResult dec = decode_slots(SlotSequence{decided, setup.scheme});

    const std::span<const std::uint8_t> sent(tx_bits.data() + done * bps,
                                             static_cast<std::size_t>(sym_in_window) * bps);
    const long errors = hamming(sent, dec.bits);

    if (cfg.method == ThresholdMethod::slot_count)
      state = update_slot_count(state, count_high(decided), static_cast<int>(sym_in_window));

    out.push_back(TransientSample{window_start_s, schedule.distance_at(window_start_s),
                                  static_cast<double>(errors) /
                                      static_cast<double>(sym_in_window * bps),
                                  theta});
    done += sym_in_window;
  }
  return out;
}

std::string to_token(ThresholdMethod method) {
  switch (method) {
    case ThresholdMethod::fixed: return "fixed";
    case ThresholdMethod::slot_count: return "slot-count";
    case ThresholdMethod::level_average: return "level-avg";
  }
  throw std::invalid_argument("unknown threshold method");
}

std::string to_token(ModulationScheme scheme) {
  if (scheme.order == 2) return "2ppm";
  if (scheme.order == 4) return scheme.inverted ? "4ippm" : "4ppm";
  throw std::invalid_argument("unknown modulation scheme");
}

ThresholdMethod parse_method_token(const std::string& token) {
  if (token == "fixed") return ThresholdMethod::fixed;
  if (token == "slot-count") return ThresholdMethod::slot_count;
  if (token == "level-avg") return ThresholdMethod::level_average;
  throw std::invalid_argument("unknown method '" + token +
                              "' (expected fixed, slot-count or level-avg)");
}

ModulationScheme parse_scheme_token(const std::string& token) {
  if (token == "2ppm") return make_scheme(2, false);
  if (token == "4ppm") return make_scheme(4, false);
  if (token == "4ippm") return make_scheme(4, true);
  throw std::invalid_argument("unknown modulation '" + token +
                              "' (expected 2ppm, 4ppm or 4ippm)");
}

void write_sweep_csv(std::ostream& os, const ExperimentConfig& cfg,
                     const std::vector<PointResult>& points) {
  os << "distance_cm,method,scheme,ber,throughput_bps,zero_high,multi_high,theta_final\n";
  const std::string method = to_token(cfg.method);
  const std::string scheme = to_token(cfg.scheme);
  for (const PointResult& p : points) {
    os << format_double(p.distance_cm) << ',' << method << ',' << scheme << ','
       << format_double(p.ber) << ',' << format_double(p.throughput_bps) << ','
       << p.zero_high << ',' << p.multi_high << ',' << format_double(p.theta_final)
       << '\n';
  }
}

void write_transient_csv(std::ostream& os, const std::vector<TransientSample>& rows) {
  os << "time_s,distance_cm,window_ber,theta_v\n";
  for (const TransientSample& r : rows) {
    os << format_double(r.time_s) << ',' << format_double(r.distance_cm) << ','
       << format_double(r.window_ber) << ',' << format_double(r.theta_v) << '\n';
  }
}

}  // namespace vlcsim
