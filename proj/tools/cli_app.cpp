#include "cli_app.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "vlcsim/prbs.hpp"
#include "vlcsim/selftest.hpp"

namespace vlcsim {

namespace {

constexpr double kAuto = std::numeric_limits<double>::quiet_NaN();

struct RawOptions {
  std::string modulation = "2ppm";
  std::string method = "level-avg";
  double fixed_threshold = kAuto;  // auto: midpoint at the reference distance
  std::string dist = "10:90:10";
  long bits = 100000;
  double rate = 4000.0;
  int spp = 5;
  double sigma0 = 0.02;
  double sigma1 = 0.0;
  double ambient = 0.0;
  double tx_amplitude = 5.0;
  double tx_low = 0.0;
  double atten_exp = 2.0;
  std::string lpf = "off";
  std::string adc_bits = "off";
  double step = 0.0;  // auto: 1% of the threshold range
  int window = 64;
  double margin = 0.1;
  std::uint64_t seed = 1;
  double ref_dist = kAuto;  // auto: nearest sweep/schedule distance
  int prbs_order = 9;
  std::string schedule = "0:10,0.32:40";
  std::string config;
  std::string out;
};

void add_common_options(CLI::App* cmd, RawOptions& raw) {
  const auto last = CLI::MultiOptionPolicy::TakeLast;
  cmd->add_option("--modulation", raw.modulation, "Modulation: 2ppm, 4ppm or 4ippm")
      ->capture_default_str()
      ->multi_option_policy(last);
  cmd->add_option("--method", raw.method,
                  "Threshold control: fixed, slot-count or level-avg")
      ->capture_default_str()
      ->multi_option_policy(last);
  cmd->add_option("--fixed-threshold", raw.fixed_threshold,
                  "Comparator threshold for --method fixed, volts")
      ->default_str("auto (midpoint at the reference distance)")
      ->multi_option_policy(last);
  cmd->add_option("--bits", raw.bits, "Bits per measurement point")
      ->capture_default_str()
      ->multi_option_policy(last);
  cmd->add_option("--rate", raw.rate, "Bit rate, bits/s")
      ->capture_default_str()
      ->multi_option_policy(last);
  cmd->add_option("--spp", raw.spp, "Receiver samples per slot")
      ->capture_default_str()
      ->multi_option_policy(last);
  cmd->add_option("--sigma0", raw.sigma0, "Constant noise std, volts")
      ->capture_default_str()
      ->multi_option_policy(last);
  cmd->add_option("--sigma1", raw.sigma1, "Noise std per volt of received signal")
      ->capture_default_str()
      ->multi_option_policy(last);
  cmd->add_option("--ambient", raw.ambient, "Ambient light DC offset, volts")
      ->capture_default_str()
      ->multi_option_policy(last);
  cmd->add_option("--tx-amplitude", raw.tx_amplitude,
                  "LED-on level at the reference distance, volts")
      ->capture_default_str()
      ->multi_option_policy(last);
  cmd->add_option("--tx-low", raw.tx_low, "LED-off level, volts")
      ->capture_default_str()
      ->multi_option_policy(last);
  cmd->add_option("--atten-exp", raw.atten_exp, "Distance attenuation exponent")
      ->capture_default_str()
      ->multi_option_policy(last);
  cmd->add_option("--lpf", raw.lpf, "Channel low-pass cutoff in Hz, or 'off'")
      ->capture_default_str()
      ->multi_option_policy(last);
  cmd->add_option("--adc-bits", raw.adc_bits, "ADC resolution 4..16, or 'off' for ideal")
      ->capture_default_str()
      ->multi_option_policy(last);
  cmd->add_option("--step", raw.step, "Slot-count threshold step, volts")
      ->default_str("auto (1% of the threshold range)")
      ->multi_option_policy(last);
  cmd->add_option("--window", raw.window, "Adaptation window, symbols")
      ->capture_default_str()
      ->multi_option_policy(last);
  cmd->add_option("--margin", raw.margin, "Threshold floor above the low level, volts")
      ->capture_default_str()
      ->multi_option_policy(last);
  cmd->add_option("--seed", raw.seed,
                  "Base RNG seed (env VLC_MODEM_SEED overrides when set)")
      ->capture_default_str()
      ->multi_option_policy(last);
  cmd->add_option("--ref-dist", raw.ref_dist, "Attenuation reference distance, cm")
      ->default_str("auto (nearest distance)")
      ->multi_option_policy(last);
  cmd->add_option("--prbs-order", raw.prbs_order, "PRBS order: 7, 9 or 15")
      ->capture_default_str()
      ->multi_option_policy(last);
  cmd->add_option("--config", raw.config,
                  "Read options from a key=value file ('#' comments); flags win")
      ->default_str("none")
      ->multi_option_policy(last);
}

// Holds the CLI11 app plus the backing storage for one parse.
class CliParser {
 public:
  CliParser() : app_("Software-defined VLC modem simulator", "vlc_modem") {
    app_.require_subcommand(1);

    sweep_ = app_.add_subcommand("sweep", "Run a BER/throughput distance sweep");
    add_common_options(sweep_, raw_);
    sweep_->add_option("--dist", raw_.dist, "Distances in cm: start:end:step or one value")
        ->capture_default_str()
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    sweep_->add_option("--out", raw_.out, "Output CSV path")
        ->default_str("sweep.csv")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    transient_ = app_.add_subcommand("transient",
                                     "Run a distance-step scenario over time");
    add_common_options(transient_, raw_);
    transient_->add_option("--schedule", raw_.schedule,
                           "Distance schedule: t0:d0,t1:d1,... (s:cm), t0 = 0")
        ->capture_default_str()
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    transient_->add_option("--out", raw_.out, "Output CSV path")
        ->default_str("transient.csv")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    selftest_ = app_.add_subcommand("selftest", "Run the built-in invariant suite");
  }

  CLI::App& app() { return app_; }

  // May throw CLI::ParseError (help requests included).
  void parse_tokens(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("vlc_modem");
    for (const std::string& a : args) argv.push_back(a.c_str());
    app_.parse(static_cast<int>(argv.size()), argv.data());
  }

  const std::string& config_path() const { return raw_.config; }
  CliInvocation build() const;

 private:
  CLI::App app_;
  RawOptions raw_;
  CLI::App* sweep_ = nullptr;
  CLI::App* transient_ = nullptr;
  CLI::App* selftest_ = nullptr;
};

double parse_number(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError("invalid " + what + " '" + text + "'");
  }
}

std::vector<double> parse_distances(const std::string& text) {
  const auto first = text.find(':');
  if (first == std::string::npos) {
    const double d = parse_number(text, "distance");
    if (!(d > 0.0)) throw UsageError("distances must be positive");
    return {d};
  }
  const auto second = text.find(':', first + 1);
  if (second == std::string::npos)
    throw UsageError("distance range must be start:end:step");
  const double start = parse_number(text.substr(0, first), "distance start");
  const double end = parse_number(text.substr(first + 1, second - first - 1), "distance end");
  const double step = parse_number(text.substr(second + 1), "distance step");
  if (!(start > 0.0) || !(end >= start) || !(step > 0.0))
    throw UsageError("distance range must satisfy 0 < start <= end, step > 0");

  std::vector<double> out;
  for (double d = start; d <= end + 1e-9 * step; d += step) out.push_back(d);
  return out;
}

DistanceSchedule parse_schedule(const std::string& text) {
  DistanceSchedule schedule;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw UsageError("schedule entries must be time:distance");
    const double t = parse_number(item.substr(0, colon), "schedule time");
    const double d = parse_number(item.substr(colon + 1), "schedule distance");
    schedule.points.push_back({t, d});
  }
  if (schedule.points.empty()) throw UsageError("schedule is empty");
  if (schedule.points.front().time_s != 0.0)
    throw UsageError("schedule must start at time 0");
  for (std::size_t i = 0; i < schedule.points.size(); ++i) {
    if (!(schedule.points[i].distance_cm > 0.0))
      throw UsageError("schedule distances must be positive");
    if (i > 0 && !(schedule.points[i].time_s > schedule.points[i - 1].time_s))
      throw UsageError("schedule times must be strictly increasing");
  }
  return schedule;
}

std::uint64_t seed_from_env_or(std::uint64_t fallback) {
  const char* env = std::getenv("VLC_MODEM_SEED");
  if (env == nullptr || *env == '\0') return fallback;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0')
    throw UsageError("VLC_MODEM_SEED is set but is not a number");
  return static_cast<std::uint64_t>(v);
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

// Flat key=value file, '#' comment lines; keys are the flag names.
std::vector<std::pair<std::string, std::string>> read_config_entries(
    const std::string& path) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot read config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  while (std::getline(is, line)) {
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw UsageError("config file '" + path + "': expected key=value, got '" +
                       stripped + "'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty())
      throw UsageError("config file '" + path + "': empty key in '" + stripped + "'");
    if (key == "config")
      throw UsageError("config file '" + path + "': config files cannot nest");
    entries.emplace_back(key, value);
  }
  return entries;
}

CliInvocation CliParser::build() const {
  CliInvocation inv;
  if (selftest_->parsed()) {
    inv.command = CliInvocation::Command::selftest;
    return inv;
  }
  inv.command = sweep_->parsed() ? CliInvocation::Command::sweep
                                 : CliInvocation::Command::transient;

  ExperimentConfig& cfg = inv.cfg;
  try {
    cfg.scheme = parse_scheme_token(raw_.modulation);
    cfg.method = parse_method_token(raw_.method);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  if (raw_.bits < 1) throw UsageError("--bits must be at least 1");
  if (!(raw_.rate > 0.0)) throw UsageError("--rate must be positive");
  if (raw_.spp < 1) throw UsageError("--spp must be at least 1");
  if (raw_.sigma0 < 0.0 || raw_.sigma1 < 0.0)
    throw UsageError("noise coefficients must be non-negative");
  if (!(raw_.tx_amplitude > raw_.tx_low))
    throw UsageError("--tx-amplitude must exceed --tx-low");
  if (!(raw_.atten_exp > 0.0)) throw UsageError("--atten-exp must be positive");
  if (raw_.window < 1) throw UsageError("--window must be at least 1");
  if (raw_.margin < 0.0) throw UsageError("--margin must be non-negative");
  if (raw_.prbs_order != 7 && raw_.prbs_order != 9 && raw_.prbs_order != 15)
    throw UsageError("--prbs-order must be 7, 9 or 15");

  cfg.bit_count = raw_.bits;
  cfg.bit_rate = raw_.rate;
  cfg.tx.v_high = raw_.tx_amplitude;
  cfg.tx.v_low = raw_.tx_low;
  cfg.tx.samples_per_slot = raw_.spp;

  if (inv.command == CliInvocation::Command::sweep) {
    cfg.distances_cm = parse_distances(raw_.dist);
  } else {
    inv.schedule = parse_schedule(raw_.schedule);
    cfg.distances_cm = {inv.schedule.points.front().distance_cm};
  }

  double nearest = cfg.distances_cm.front();
  for (double d : cfg.distances_cm) nearest = std::min(nearest, d);
  if (inv.command == CliInvocation::Command::transient)
    for (const auto& bp : inv.schedule.points) nearest = std::min(nearest, bp.distance_cm);

  cfg.channel.reference_cm = std::isnan(raw_.ref_dist) ? nearest : raw_.ref_dist;
  if (!(cfg.channel.reference_cm > 0.0)) throw UsageError("--ref-dist must be positive");
  cfg.channel.attenuation_exponent = raw_.atten_exp;
  cfg.channel.ambient_v = raw_.ambient;
  cfg.channel.noise_sigma0 = raw_.sigma0;
  cfg.channel.noise_sigma1 = raw_.sigma1;
  if (raw_.lpf != "off") {
    const double hz = parse_number(raw_.lpf, "--lpf value");
    if (!(hz > 0.0)) throw UsageError("--lpf must be positive or 'off'");
    cfg.channel.lpf_cutoff_hz = hz;
  }
  if (raw_.adc_bits != "off") {
    const double bits = parse_number(raw_.adc_bits, "--adc-bits value");
    if (bits != std::floor(bits) || bits < 4 || bits > 16)
      throw UsageError("--adc-bits must be an integer in [4, 16] or 'off'");
    cfg.adc.bits = static_cast<int>(bits);
    cfg.adc.v_ref = raw_.tx_amplitude + raw_.ambient;
  }

  cfg.threshold.theta_min = 0.0;
  cfg.threshold.theta_max = raw_.tx_amplitude + raw_.ambient;
  cfg.threshold.fixed_theta =
      std::isnan(raw_.fixed_threshold)
          ? 0.5 * (raw_.tx_amplitude + raw_.tx_low) + raw_.ambient
          : raw_.fixed_threshold;
  cfg.threshold.step = raw_.step;
  cfg.threshold.window_symbols = raw_.window;
  cfg.threshold.margin = raw_.margin;
  cfg.threshold.scheme = cfg.scheme;

  cfg.prbs_order = raw_.prbs_order;
  cfg.prbs_seed = prbs_all_ones_seed(raw_.prbs_order);
  cfg.base_seed = seed_from_env_or(raw_.seed);

  inv.out_path = raw_.out.empty()
                     ? (inv.command == CliInvocation::Command::sweep ? "sweep.csv"
                                                                     : "transient.csv")
                     : raw_.out;
  return inv;
}

// Applies the config-file overlay (if any) by reparsing with the file's
// entries injected ahead of the user's flags; take-last makes flags win.
CliInvocation finalize(const CliParser& first, const std::vector<std::string>& args) {
  if (first.config_path().empty()) return first.build();

  const auto entries = read_config_entries(first.config_path());
  std::vector<std::string> merged;
  merged.push_back(args.front());  // the subcommand name
  for (const auto& [key, value] : entries) {
    merged.push_back("--" + key);
    merged.push_back(value);
  }
  merged.insert(merged.end(), args.begin() + 1, args.end());

  CliParser second;
  try {
    second.parse_tokens(merged);
  } catch (const CLI::ParseError& e) {
    throw UsageError("config file '" + first.config_path() + "': " + e.what());
  }
  return second.build();
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp(target);
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    os << contents;
    os.flush();
    if (!os) throw std::runtime_error("failed while writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw std::runtime_error("cannot move '" + tmp.string() + "' to '" + target.string() +
                             "': " + ec.message());
  }
}

}  // namespace

CliInvocation parse_cli(const std::vector<std::string>& args) {
  CliParser first;
  try {
    first.parse_tokens(args);
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  return finalize(first, args);
}

int execute(const CliInvocation& inv) {
  try {
    switch (inv.command) {
      case CliInvocation::Command::selftest:
        return run_selftest(std::cout) ? 0 : 2;

      case CliInvocation::Command::sweep: {
        const std::vector<PointResult> results = run_sweep(inv.cfg);
        std::ostringstream csv;
        write_sweep_csv(csv, inv.cfg, results);
        write_file_atomic(inv.out_path, csv.str());
        for (const PointResult& p : results) {
          char line[160];
          std::snprintf(line, sizeof(line),
                        "d=%-8.6g cm  ber=%.3e  throughput=%.6g bps  theta=%.4g",
                        p.distance_cm, p.ber, p.throughput_bps, p.theta_final);
          std::cout << line << '\n';
        }
        std::cout << "wrote " << inv.out_path << '\n';
        return 0;
      }

      case CliInvocation::Command::transient: {
        const std::vector<TransientSample> rows = run_transient(inv.cfg, inv.schedule);
        std::ostringstream csv;
        write_transient_csv(csv, rows);
        write_file_atomic(inv.out_path, csv.str());
        char line[160];
        std::snprintf(line, sizeof(line), "%zu windows, final theta=%.4g", rows.size(),
                      rows.empty() ? 0.0 : rows.back().theta_v);
        std::cout << line << '\n';
        std::cout << "wrote " << inv.out_path << '\n';
        return 0;
      }
    }
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args;
  args.reserve(argc > 1 ? static_cast<std::size_t>(argc - 1) : 0);
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);

  CliParser first;
  try {
    first.parse_tokens(args);
  } catch (const CLI::CallForHelp& e) {
    return first.app().exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return first.app().exit(e);
  } catch (const CLI::ParseError& e) {
    first.app().exit(e);
    return 1;
  }

  try {
    return execute(finalize(first, args));
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace vlcsim
