#pragma once

#include <cstdint>
#include <vector>

#include "pdslab/distributions.hpp"
#include "pdslab/errors.hpp"
#include "pdslab/rng.hpp"
#include "pdslab/targets.hpp"

namespace pdslab {

/// Random classification noise: the clean label is flipped with probability
/// eta, independently per example.
struct NoiseChannel {
  double eta = 0.0;
};

[[nodiscard]] inline NoiseChannel make_noise(double eta) {
  require(eta >= 0.0 && eta < 0.5, ErrorCode::argument, "noise rate must lie in [0, 0.5)");
  return NoiseChannel{eta};
}

/// A labeled-example source: draw x ~ dist, emit y = f(x) * xi with
/// Pr[xi = -1] = eta.
struct LabeledSource {
  InputDistribution dist;
  Target target;
  NoiseChannel noise;
};

[[nodiscard]] inline LabeledSource make_source(InputDistribution dist, Target target, NoiseChannel noise) {
  require(dist_dim(dist) == target_dim(target), ErrorCode::dimension_mismatch,
          "source target dim must match distribution dim");
  return LabeledSource{std::move(dist), std::move(target), noise};
}

[[nodiscard]] inline std::vector<int> draw_labels(const LabeledSource& src, const std::vector<HypercubeInput>& xs,
                                                  Rng& rng) {
  std::vector<int> ys;
  ys.reserve(xs.size());
  for (const HypercubeInput& x : xs) {
    const int flip = rng.bernoulli(src.noise.eta) ? -1 : 1;
    ys.push_back(flip * eval_target(src.target, x));
  }
  return ys;
}

/// Noisy label whose flip is a pure function of (noise_seed, x): querying the
/// same point twice returns the same label. Persistent-noise oracle for
/// callers that need repeat queries answered consistently; the sampling
/// paths above draw a fresh flip per occurrence instead.
[[nodiscard]] inline int label_point_keyed(const LabeledSource& src, const HypercubeInput& x,
                                           std::uint64_t noise_seed) {
  std::vector<std::uint64_t> words((static_cast<std::size_t>(x.dim()) + 63) / 64, 0);
  for (int i = 1; i <= x.dim(); ++i)
    if (x.bit01(i)) words[static_cast<std::size_t>(i - 1) / 64] |= 1ull << ((i - 1) % 64);
  Rng r(mix_key(noise_seed, words));
  const int flip = r.bernoulli(src.noise.eta) ? -1 : 1;
  return flip * eval_target(src.target, x);
}

/// Draws (x, y) pairs in one call.
struct LabeledSample {
  std::vector<HypercubeInput> xs;
  std::vector<int> ys;
};

[[nodiscard]] inline LabeledSample draw_sample(const LabeledSource& src, Rng& rng, std::size_t n) {
  LabeledSample s;
  s.xs = sample(src.dist, rng, n);
  s.ys = draw_labels(src, s.xs, rng);
  return s;
}

}  // namespace pdslab
