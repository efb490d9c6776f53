#pragma once
// Quick built-in invariant suite backing the `selftest` CLI subcommand.

#include <iosfwd>

namespace vlcsim {

// Prints one line per check; returns true iff everything passed.
bool run_selftest(std::ostream& os);

}  // namespace vlcsim
