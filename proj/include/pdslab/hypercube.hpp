#pragma once

#include <cstdint>
#include <vector>

#include "pdslab/errors.hpp"

namespace pdslab {

/// A point of the Boolean hypercube {-1,+1}^d.
///
/// Coordinates are 1-based everywhere in this library (support sets, netlist
/// inputs). The {0,1} integer view maps +1 to 1 and -1 to 0; coordinate i is
/// bit i-1 of the integer, so the view is a bijection with 0..2^d-1.
class HypercubeInput {
 public:
  HypercubeInput() = default;

  explicit HypercubeInput(std::vector<std::int8_t> bits) : bits_(std::move(bits)) {
    require(!bits_.empty(), ErrorCode::argument, "hypercube point needs dim >= 1");
    for (const std::int8_t v : bits_)
      require(v == -1 || v == +1, ErrorCode::argument, "hypercube entries must be -1 or +1");
  }

  /// Point with the given {0,1} integer view; requires d <= 64.
  [[nodiscard]] static HypercubeInput from_index(std::uint64_t index, int d) {
    require(d >= 1 && d <= 64, ErrorCode::argument, "from_index requires 1 <= d <= 64");
    if (d < 64) require(index < (1ull << d), ErrorCode::argument, "point index out of range");
    HypercubeInput x;
    x.bits_.resize(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) x.bits_[static_cast<std::size_t>(i)] = ((index >> i) & 1u) ? +1 : -1;
    return x;
  }

  /// The {0,1} integer view; requires dim <= 64.
  [[nodiscard]] std::uint64_t to_index() const {
    require(dim() <= 64, ErrorCode::argument, "to_index requires dim <= 64");
    std::uint64_t index = 0;
    for (int i = 0; i < dim(); ++i)
      if (bits_[static_cast<std::size_t>(i)] > 0) index |= 1ull << i;
    return index;
  }

  [[nodiscard]] int dim() const { return static_cast<int>(bits_.size()); }

  /// Signed value of coordinate i (1-based).
  [[nodiscard]] int bit(int i) const { return bits_[static_cast<std::size_t>(i - 1)]; }

  /// {0,1} value of coordinate i (1-based).
  [[nodiscard]] int bit01(int i) const { return bits_[static_cast<std::size_t>(i - 1)] > 0 ? 1 : 0; }

  [[nodiscard]] const std::vector<std::int8_t>& bits() const { return bits_; }
  [[nodiscard]] std::vector<std::int8_t>& bits() { return bits_; }

  [[nodiscard]] int coordinate_sum() const {
    int s = 0;
    for (const std::int8_t v : bits_) s += v;
    return s;
  }

  friend bool operator==(const HypercubeInput& a, const HypercubeInput& b) { return a.bits_ == b.bits_; }

 private:
  std::vector<std::int8_t> bits_;
};

}  // namespace pdslab
