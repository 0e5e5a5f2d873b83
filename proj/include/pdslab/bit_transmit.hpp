#pragma once

#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "pdslab/distributions.hpp"
#include "pdslab/errors.hpp"
#include "pdslab/hypercube.hpp"

namespace pdslab {

/// Payload geometry for transmitting r bits through input atoms 1..r of
/// {0,1}^d. The invariant r <= 2^d / 20 keeps the smallest atom mass 2/(5r)
/// at least 8x the uniform contamination 2^{-d}.
struct BitCode {
  std::uint32_t r = 0;
  int d = 0;
  double mixture_weight = 0.5;
};

[[nodiscard]] inline BitCode make_bit_code(std::uint32_t r, int d, double mixture_weight) {
  require(d >= 1 && d <= 64, ErrorCode::argument, "bit code needs 1 <= d <= 64");
  require(r >= 1, ErrorCode::argument, "bit code needs r >= 1");
  require(mixture_weight > 0.0 && mixture_weight <= 1.0, ErrorCode::argument,
          "mixture weight must lie in (0, 1]");
  // r <= 2^d / 20 without overflowing: equivalently 20 r <= 2^d.
  const bool fits = d >= 64 || 20ull * r <= (1ull << d);
  require(fits, ErrorCode::argument, "bit code needs r <= 2^d / 20");
  return BitCode{r, d, mixture_weight};
}

/// Atom distribution carrying theta: atom i in 1..r has mass 2/(5r) for a 0
/// bit and 3/(5r) for a 1 bit; atom 0 absorbs the remainder.
[[nodiscard]] inline InputDistribution encode_bits(const std::vector<std::uint8_t>& theta, const BitCode& code) {
  require(theta.size() == code.r, ErrorCode::argument, "payload length must equal code.r");
  std::vector<std::uint64_t> points;
  std::vector<double> probs;
  points.reserve(theta.size() + 1);
  probs.reserve(theta.size() + 1);
  const double unit = 1.0 / (5.0 * code.r);
  double used = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    require(theta[i] <= 1, ErrorCode::argument, "payload entries must be bits");
    points.push_back(static_cast<std::uint64_t>(i) + 1);
    probs.push_back((theta[i] ? 3.0 : 2.0) * unit);
    used += probs.back();
  }
  points.push_back(0);
  probs.push_back(1.0 - used);
  return make_atoms(code.d, std::move(points), std::move(probs));
}

/// Sparse hit counts over {0,1}^d integer points, the decoder's sufficient
/// statistic. Only indices in [1, cap] are tracked; everything else in the
/// stream contributes to `total` alone. Streaming callers can fill this
/// without materializing samples.
struct IndexCounts {
  std::unordered_map<std::uint64_t, std::uint64_t> counts;
  std::uint64_t total = 0;
  std::uint64_t cap = 0;

  void add(std::uint64_t index) {
    ++total;
    if (index >= 1 && index <= cap) ++counts[index];
  }
};

[[nodiscard]] inline IndexCounts index_counts_from_samples(const std::vector<HypercubeInput>& samples, int d,
                                                           std::uint64_t cap) {
  IndexCounts ic;
  ic.cap = cap;
  for (const HypercubeInput& x : samples) {
    require(x.dim() == d, ErrorCode::dimension_mismatch, "sample dim mismatch");
    ic.add(x.to_index());
  }
  return ic;
}

/// Frequency-threshold decoder over precomputed counts. Bit i is 1 iff the
/// empirical frequency of integer point i reaches w * 2.5/(5r) + (1-w) *
/// 2^{-d}; a frequency exactly at the threshold decodes as 1.
[[nodiscard]] inline std::vector<std::uint8_t> decode_bits(const IndexCounts& hits, const BitCode& code) {
  require(hits.total >= 1, ErrorCode::argument, "decoder needs at least one sample");
  require(hits.cap >= code.r, ErrorCode::argument, "counts were capped below the code length");
  const double w = code.mixture_weight;
  const double threshold = w * 0.5 / code.r + (1.0 - w) * std::ldexp(1.0, -code.d);
  const double m = static_cast<double>(hits.total);
  std::vector<std::uint8_t> theta(code.r);
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const auto it = hits.counts.find(static_cast<std::uint64_t>(i) + 1);
    const double freq = it == hits.counts.end() ? 0.0 : static_cast<double>(it->second) / m;
    theta[i] = freq >= threshold ? 1 : 0;
  }
  return theta;
}

/// Decoder over raw inputs. Reads only the inputs (labels never enter).
[[nodiscard]] inline std::vector<std::uint8_t> decode_bits(const std::vector<HypercubeInput>& samples,
                                                           const BitCode& code) {
  require(!samples.empty(), ErrorCode::argument, "decoder needs at least one sample");
  return decode_bits(index_counts_from_samples(samples, code.d, code.r), code);
}

/// Sample size at which decoding succeeds with probability >= 1 - eps:
/// m = ceil(2 r^2 (ln r + ln(1/eps))), the Chernoff budget for r per-atom
/// deviations of half the mass gap 1/(10r) at masses Theta(1/r).
[[nodiscard]] inline std::size_t codec_sample_bound(std::uint32_t r, double eps) {
  require(r >= 1 && eps > 0.0 && eps < 1.0, ErrorCode::argument, "needs r >= 1 and eps in (0,1)");
  const double m = 2.0 * static_cast<double>(r) * r * (std::log(static_cast<double>(r)) + std::log(1.0 / eps));
  return static_cast<std::size_t>(std::ceil(std::max(m, 1.0)));
}

}  // namespace pdslab
