#include "vlcsim/prbs.hpp"

#include <stdexcept>

namespace vlcsim {

namespace {

// Second feedback tap for x^order + x^tap + 1.
int second_tap(int order) {
  switch (order) {
    case 7: return 6;
    case 9: return 5;
    case 15: return 14;
    default:
      throw std::invalid_argument("prbs order must be 7, 9 or 15");
  }
}

}  // namespace

BitVec prbs_generate(int order, std::uint32_t seed, std::size_t nbits) {
  const int tap = second_tap(order);
  const std::uint32_t mask = (1u << order) - 1u;
  std::uint32_t state = seed & mask;
  if (state == 0)
    throw std::invalid_argument("prbs seed must be nonzero (all-zero state is degenerate)");

  BitVec out;
  out.reserve(nbits);
  for (std::size_t n = 0; n < nbits; ++n) {
    const std::uint32_t msb = (state >> (order - 1)) & 1u;
    out.push_back(static_cast<std::uint8_t>(msb));
    const std::uint32_t feedback = msb ^ ((state >> (tap - 1)) & 1u);
    state = ((state << 1) | feedback) & mask;
  }
  return out;
}

std::uint32_t prbs_all_ones_seed(int order) {
  second_tap(order);  // validates
  return (1u << order) - 1u;
}

}  // namespace vlcsim
