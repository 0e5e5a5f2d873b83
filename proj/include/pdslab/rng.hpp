#pragma once

#include <cstdint>
#include <vector>

#include "pdslab/errors.hpp"

namespace pdslab {

/// Deterministic, seedable, splittable 64-bit generator (splitmix64 core).
///
/// Every stochastic operation in the library takes an explicit Rng so runs are
/// bit-reproducible. split(stream) derives an independent child keyed on the
/// current state and the stream index without advancing the parent; the same
/// (state, stream) pair always yields the same child.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return finalize(state_);
  }

  /// Uniform in [0,1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  /// A signed unit: +1 with probability p_plus, else -1.
  int sign_unit(double p_plus) { return bernoulli(p_plus) ? +1 : -1; }

  /// Unbiased integer in [0, n); rejection sampling keeps the draw exact.
  std::uint64_t below(std::uint64_t n) {
    require(n > 0, ErrorCode::argument, "Rng::below requires n > 0");
    const std::uint64_t limit = n * (~0ull / n);
    std::uint64_t r = next_u64();
    while (r >= limit) r = next_u64();
    return r % n;
  }

  /// Independent child stream; deterministic in (current state, stream).
  [[nodiscard]] Rng split(std::uint64_t stream) const {
    return Rng(finalize(state_ ^ finalize(stream + 0x632be59bd9b4e019ull)));
  }

  /// First s entries of a uniformly random permutation of {0..n-1}
  /// (partial Fisher-Yates).
  std::vector<std::uint32_t> partial_shuffle(std::uint32_t n, std::uint32_t s) {
    require(s <= n, ErrorCode::argument, "partial_shuffle: s > n");
    std::vector<std::uint32_t> idx(n);
    for (std::uint32_t i = 0; i < n; ++i) idx[i] = i;
    for (std::uint32_t i = 0; i < s; ++i) {
      const std::uint32_t j = i + static_cast<std::uint32_t>(below(n - i));
      std::swap(idx[i], idx[j]);
    }
    idx.resize(s);
    return idx;
  }

 private:
  static std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

/// Stable 64-bit key for a sequence of integer words; used to derive
/// per-point noise streams in the query-model module. Every bit of every
/// word reaches the key through a full splitmix-style avalanche per word.
template <class Seq>
[[nodiscard]] inline std::uint64_t mix_key(std::uint64_t seed, const Seq& words) {
  std::uint64_t h = seed ^ 0x9e3779b97f4a7c15ull;
  for (const auto v : words) {
    h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ull;
    h = (h ^ (h >> 27)) * 0x94d049bb133111ebull;
    h ^= h >> 31;
  }
  return h;
}

}  // namespace pdslab
