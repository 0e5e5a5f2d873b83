#pragma once

#include <cstdint>
#include <vector>

#include "pdslab/circuit.hpp"
#include "pdslab/errors.hpp"

namespace pdslab {

/// Bit string as a vector of 0/1 bytes, most significant bit of each field
/// first.
using BitString = std::vector<std::uint8_t>;

inline void append_field(BitString& bits, std::uint64_t value, int width) {
  for (int i = width - 1; i >= 0; --i) bits.push_back(static_cast<std::uint8_t>((value >> i) & 1ull));
}

[[nodiscard]] inline std::uint64_t read_field(const BitString& bits, std::size_t& pos, int width) {
  require(pos + static_cast<std::size_t>(width) <= bits.size(), ErrorCode::decode, "bit string truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) v = (v << 1) | bits[pos++];
  return v;
}

/// Fixed layout: header = node count M (16 bits) + output id (16 bits), then
/// per node in list order kind (2 bits: 00 INPUT, 01 NOT, 10 AND, 11 OR),
/// payload (16 bits: input coordinate for INPUT, else first predecessor),
/// second predecessor (16 bits, zero when unused). Total 32 + 34*M bits.
[[nodiscard]] inline BitString circuit_to_bits(const BooleanCircuit& c) {
  validate_circuit(c);
  require(c.nodes.size() <= 0xFFFFull, ErrorCode::encoding, "node count exceeds 16-bit header");
  BitString bits;
  bits.reserve(32 + 34 * c.nodes.size());
  append_field(bits, c.nodes.size(), 16);
  append_field(bits, c.output, 16);
  for (const CircuitNode& n : c.nodes) {
    append_field(bits, static_cast<std::uint64_t>(n.kind), 2);
    require(n.a <= 0xFFFFull && n.b <= 0xFFFFull, ErrorCode::encoding, "node field exceeds 16 bits");
    append_field(bits, n.a, 16);
    append_field(bits, n.b, 16);
  }
  return bits;
}

/// Inverse of circuit_to_bits. Truncated or oversized payload -> decode
/// error; decoded structure that violates circuit invariants -> structural
/// error from validation.
[[nodiscard]] inline BooleanCircuit bits_to_circuit(const BitString& bits) {
  std::size_t pos = 0;
  const std::uint64_t m = read_field(bits, pos, 16);
  require(m >= 1, ErrorCode::decode, "header node count is zero");
  require(bits.size() == 32 + 34 * m, ErrorCode::decode, "bit length inconsistent with header");
  BooleanCircuit c;
  c.output = static_cast<std::uint32_t>(read_field(bits, pos, 16));
  c.nodes.reserve(m);
  for (std::uint64_t i = 0; i < m; ++i) {
    CircuitNode n;
    n.kind = static_cast<GateKind>(read_field(bits, pos, 2));
    n.a = static_cast<std::uint32_t>(read_field(bits, pos, 16));
    n.b = static_cast<std::uint32_t>(read_field(bits, pos, 16));
    c.nodes.push_back(n);
  }
  validate_circuit(c);
  return c;
}

}  // namespace pdslab
