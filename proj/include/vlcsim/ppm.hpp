#pragma once
//
// PPM / Inversed-PPM slot codec.
//
// A symbol spans `order` slots and carries log2(order) bits. The bit group,
// read MSB-first as an unsigned integer, selects the pulse slot index.
// Inverted schemes light every slot except the selected one.

#include <bit>
#include <cstdint>
#include <vector>

namespace vlcsim {

inline constexpr std::uint8_t kSlotLow = 0;
inline constexpr std::uint8_t kSlotHigh = 1;

using BitVec = std::vector<std::uint8_t>;   // elements 0/1
using SlotVec = std::vector<std::uint8_t>;  // kSlotLow / kSlotHigh

struct ModulationScheme {
  int order = 2;          // slots per symbol, 2 or 4
  bool inverted = false;  // IPPM flag

  int bits_per_symbol() const { return std::countr_zero(static_cast<unsigned>(order)); }
  friend bool operator==(const ModulationScheme&, const ModulationScheme&) = default;
};

// Validates the order and normalizes 2-IPPM to 2-PPM (the two are identical).
ModulationScheme make_scheme(int order, bool inverted);

struct SlotSequence {
  SlotVec slots;
  ModulationScheme scheme;
};

// Decode bookkeeping for symbol groups without exactly one pulse.
struct SymbolAnomalies {
  long zero_high = 0;
  long multi_high = 0;
  long total_symbols = 0;
};

struct DecodeResult {
  BitVec bits;
  SymbolAnomalies anomalies;
};

// Exact rational high-slot ratio; den always equals the scheme order.
struct Fraction {
  int num = 0;
  int den = 1;
  double value() const { return static_cast<double>(num) / den; }
};

SlotSequence encode_bits(const BitVec& bits, ModulationScheme scheme);

// Anomalous groups decode to a deterministic fallback (zero highs -> symbol 0,
// multiple highs -> lowest high index) and are counted, never fatal.
DecodeResult decode_slots(const SlotSequence& seq);

Fraction expected_high_ratio(ModulationScheme scheme);

}  // namespace vlcsim
