#pragma once
// ITU O.150-style PRBS generators (Fibonacci LFSR, MSB out).

#include <cstdint>

#include "vlcsim/ppm.hpp"

namespace vlcsim {

// order in {7, 9, 15}; seed must be nonzero in its low `order` bits.
// Taps: PRBS-7 x^7+x^6+1, PRBS-9 x^9+x^5+1, PRBS-15 x^15+x^14+1.
BitVec prbs_generate(int order, std::uint32_t seed, std::size_t nbits);

std::uint32_t prbs_all_ones_seed(int order);

}  // namespace vlcsim
