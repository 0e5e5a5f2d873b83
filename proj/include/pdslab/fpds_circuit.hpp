#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pdslab/bit_transmit.hpp"
#include "pdslab/circuit.hpp"
#include "pdslab/circuit_bits.hpp"
#include "pdslab/distributions.hpp"
#include "pdslab/errors.hpp"
#include "pdslab/rng.hpp"

namespace pdslab {

/// A circuit serialized into an atom distribution: payload is a 32-bit
/// length header (the code length r itself) followed by the circuit bits.
struct FpdsEncoding {
  BitCode code;
  std::vector<std::uint8_t> payload;
  InputDistribution train;
};

/// Encode a circuit as w * Atoms(payload) + (1 - w) * Uniform over {0,1}^d.
/// Payload layout: 32-bit r (MSB first), then the circuit bit string, so a
/// receiver can recover r from the decoded prefix and cross-check it.
[[nodiscard]] inline FpdsEncoding fpds_encode_circuit(const BooleanCircuit& circuit, int d, double w) {
  require(w > 0.0 && w <= 1.0, ErrorCode::argument, "mixture weight must lie in (0, 1]");
  require(max_input_coordinate(circuit) <= d, ErrorCode::argument, "circuit reads coordinates beyond d");
  const BitString body = circuit_to_bits(circuit);
  const std::uint64_t r64 = 32 + static_cast<std::uint64_t>(body.size());
  require(r64 <= 0xFFFFFFFFull, ErrorCode::encoding, "payload too long for a 32-bit header");
  const auto r = static_cast<std::uint32_t>(r64);
  FpdsEncoding enc;
  enc.code = make_bit_code(r, d, w);
  enc.payload.reserve(r);
  for (int b = 31; b >= 0; --b) enc.payload.push_back(static_cast<std::uint8_t>((r >> b) & 1u));
  enc.payload.insert(enc.payload.end(), body.begin(), body.end());
  if (w == 1.0) {
    enc.train = encode_bits(enc.payload, enc.code);
  } else {
    std::vector<InputDistribution> parts;
    parts.push_back(encode_bits(enc.payload, enc.code));
    parts.push_back(make_uniform(d));
    enc.train = make_mixture({w, 1.0 - w}, std::move(parts));
  }
  return enc;
}

/// Draw m inputs from the encoding's train distribution directly at the
/// integer-index level and fold them into decoder counts. Equivalent in law
/// to sampling points and converting, but never materializes a sample, so
/// the Lemma-bound budgets (hundreds of millions of draws at d = 64) fit in
/// memory. Labels are irrelevant to the decoder and are not drawn.
[[nodiscard]] inline IndexCounts fpds_draw_counts(const FpdsEncoding& enc, std::uint64_t m, Rng& rng) {
  IndexCounts ic;
  ic.cap = enc.code.r;
  const double w = enc.code.mixture_weight;
  const Atoms* atoms = nullptr;
  if (const auto* a = std::get_if<Atoms>(&enc.train.v)) {
    atoms = a;
  } else {
    atoms = &std::get<Atoms>(std::get<Mixture>(enc.train.v).components.front().v);
  }
  const int d = enc.code.d;
  const std::uint64_t mask = d >= 64 ? ~0ull : (1ull << d) - 1;
  for (std::uint64_t t = 0; t < m; ++t) {
    if (w == 1.0 || rng.uniform01() < w) {
      const double u = rng.uniform01();
      const auto it = std::upper_bound(atoms->cum.begin(), atoms->cum.end(), u);
      const std::size_t idx = std::min(static_cast<std::size_t>(it - atoms->cum.begin()), atoms->points.size() - 1);
      ic.add(atoms->points[idx]);
    } else {
      ic.add(rng.next_u64() & mask);
    }
  }
  return ic;
}

/// Decoder output: either a recovered circuit or a constant-0 fallback.
struct FpdsHypothesis {
  std::optional<BooleanCircuit> circuit;
  bool fallback_used = false;
  std::string diagnostic;

  [[nodiscard]] int predict(const HypercubeInput& x) const {
    return circuit ? eval_circuit(*circuit, x) : 0;
  }
};

/// Recover a circuit from unlabeled input counts. The code length is not
/// given: the bootstrap estimates r as the largest index i <= cap whose
/// count clears both a repetition floor (>= 2, so a lone uniform straggler
/// cannot pose as an atom) and the payload frequency threshold w/(5i) +
/// (1-w) 2^{-d}, then cross-checks the decoded 32-bit header against the
/// estimate. Any inconsistency degrades to the constant-0 fallback.
[[nodiscard]] inline FpdsHypothesis fpds_learn_circuit(const IndexCounts& hits, int d, double w) {
  require(d >= 1 && d <= 64, ErrorCode::argument, "needs 1 <= d <= 64");
  require(w > 0.0 && w <= 1.0, ErrorCode::argument, "mixture weight must lie in (0, 1]");
  require(hits.total >= 1, ErrorCode::argument, "needs at least one sample");
  FpdsHypothesis hyp;
  const double m = static_cast<double>(hits.total);
  const double contamination = (1.0 - w) * std::ldexp(1.0, -d);
  std::uint64_t cap = hits.cap;
  if (d < 64) cap = std::min<std::uint64_t>(cap, (1ull << d) / 20);
  std::uint64_t r_hat = 0;
  for (const auto& [index, count] : hits.counts) {
    if (index < 1 || index > cap || index <= r_hat || count < 2) continue;
    const double threshold = w / (5.0 * static_cast<double>(index)) + contamination;
    if (static_cast<double>(count) / m >= threshold) r_hat = index;
  }
  if (r_hat == 0 || r_hat > 0xFFFFFFFFull) {
    hyp.fallback_used = true;
    hyp.diagnostic = "no payload atoms detected";
    return hyp;
  }
  const BitCode code = make_bit_code(static_cast<std::uint32_t>(r_hat), d, w);
  const std::vector<std::uint8_t> theta = decode_bits(hits, code);
  std::uint64_t header = 0;
  for (int b = 0; b < 32; ++b) header = (header << 1) | theta[static_cast<std::size_t>(b)];
  if (header != r_hat) {
    hyp.fallback_used = true;
    hyp.diagnostic = "decoded length header disagrees with detected code length";
    return hyp;
  }
  try {
    hyp.circuit = bits_to_circuit(BitString(theta.begin() + 32, theta.end()));
  } catch (const Error& e) {
    hyp.fallback_used = true;
    hyp.diagnostic = std::string("payload bits did not parse as a circuit: ") + e.what();
    return hyp;
  }
  if (max_input_coordinate(*hyp.circuit) > d) {
    hyp.circuit.reset();
    hyp.fallback_used = true;
    hyp.diagnostic = "decoded circuit reads coordinates beyond d";
  }
  return hyp;
}

/// Sample-vector entry point; labels in the pair stream are ignored.
[[nodiscard]] inline FpdsHypothesis fpds_learn_circuit(const std::vector<HypercubeInput>& samples, int d,
                                                       double w) {
  require(!samples.empty(), ErrorCode::argument, "needs at least one sample");
  std::uint64_t cap = samples.size();
  if (d < 64) cap = std::min<std::uint64_t>(cap, (1ull << d) / 20);
  cap = std::min<std::uint64_t>(cap, 0xFFFFFFFFull);
  return fpds_learn_circuit(index_counts_from_samples(samples, d, std::max<std::uint64_t>(cap, 1)), d, w);
}

}  // namespace pdslab
