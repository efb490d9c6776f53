#pragma once
// Command-line front end: subcommand parsing, config-file overlay, CSV output.

#include <stdexcept>
#include <string>
#include <vector>

#include "vlcsim/harness.hpp"

namespace vlcsim {

struct CliInvocation {
  enum class Command { sweep, transient, selftest };
  Command command = Command::sweep;
  ExperimentConfig cfg;
  DistanceSchedule schedule;  // transient only
  std::string out_path;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parses argv (excluding the program name). Throws UsageError on bad input.
CliInvocation parse_cli(const std::vector<std::string>& args);

// Runs a parsed invocation; returns the process exit status (0 ok, 2 runtime).
int execute(const CliInvocation& inv);

// Full entry point: parse + execute, mapping errors to exit codes
// (0 success, 1 usage, 2 runtime).
int run_cli(int argc, const char* const* argv);

}  // namespace vlcsim
