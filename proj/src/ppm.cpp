#include "vlcsim/ppm.hpp"

#include <stdexcept>

namespace vlcsim {

namespace {

void check_scheme(ModulationScheme scheme) {
  if (scheme.order != 2 && scheme.order != 4)
    throw std::invalid_argument("modulation order must be 2 or 4");
  if (scheme.order == 2 && scheme.inverted)
    throw std::invalid_argument("2-IPPM must be normalized to 2-PPM");
}

}  // namespace

ModulationScheme make_scheme(int order, bool inverted) {
  if (order != 2 && order != 4)
    throw std::invalid_argument("modulation order must be 2 or 4");
  if (order == 2) inverted = false;  // 2-IPPM is the same code as 2-PPM
  return ModulationScheme{order, inverted};
}

SlotSequence encode_bits(const BitVec& bits, ModulationScheme scheme) {
  check_scheme(scheme);
  const int bps = scheme.bits_per_symbol();
  if (bits.size() % static_cast<std::size_t>(bps) != 0)
    throw std::invalid_argument("bit count not divisible by bits per symbol");

  const std::size_t n_symbols = bits.size() / bps;
  const std::uint8_t rest = scheme.inverted ? kSlotHigh : kSlotLow;
  const std::uint8_t pulse = scheme.inverted ? kSlotLow : kSlotHigh;

  SlotVec slots(n_symbols * scheme.order, rest);
  for (std::size_t s = 0; s < n_symbols; ++s) {
    unsigned index = 0;
    for (int k = 0; k < bps; ++k) {
      const std::uint8_t b = bits[s * bps + k];
      if (b > 1) throw std::invalid_argument("bit values must be 0 or 1");
      index = (index << 1) | b;  // MSB first
    }
    slots[s * scheme.order + index] = pulse;
  }
  return SlotSequence{std::move(slots), scheme};
}

DecodeResult decode_slots(const SlotSequence& seq) {
  check_scheme(seq.scheme);
  const int order = seq.scheme.order;
  if (seq.slots.size() % static_cast<std::size_t>(order) != 0)
    throw std::invalid_argument("slot count not divisible by scheme order");

  const int bps = seq.scheme.bits_per_symbol();
  const std::size_t n_symbols = seq.slots.size() / order;

  DecodeResult result;
  result.bits.reserve(n_symbols * bps);
  result.anomalies.total_symbols = static_cast<long>(n_symbols);

  for (std::size_t s = 0; s < n_symbols; ++s) {
    int high_count = 0;
    int first_high = -1;
    for (int i = 0; i < order; ++i) {
      bool high = seq.slots[s * order + i] != kSlotLow;
      if (seq.scheme.inverted) high = !high;  // undo the complement
      if (high) {
        ++high_count;
        if (first_high < 0) first_high = i;
      }
    }

    unsigned index = 0;
    if (high_count == 1) {
      index = static_cast<unsigned>(first_high);
    } else if (high_count == 0) {
      ++result.anomalies.zero_high;  // fallback: symbol 0
    } else {
      ++result.anomalies.multi_high;
      index = static_cast<unsigned>(first_high);  // fallback: lowest high index
    }

    for (int k = bps - 1; k >= 0; --k)
      result.bits.push_back(static_cast<std::uint8_t>((index >> k) & 1u));
  }
  return result;
}

Fraction expected_high_ratio(ModulationScheme scheme) {
  check_scheme(scheme);
  return scheme.inverted ? Fraction{scheme.order - 1, scheme.order}
                         : Fraction{1, scheme.order};
}

}  // namespace vlcsim
