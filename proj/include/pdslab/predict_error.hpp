#pragma once

#include <cstdint>

#include "pdslab/distributions.hpp"
#include "pdslab/labels.hpp"
#include "pdslab/nets.hpp"
#include "pdslab/rng.hpp"
#include "pdslab/targets.hpp"

namespace pdslab {

/// Pr[sign(f_net(x)) != y] by full enumeration, for d <= 20. The clean
/// disagreement probability is computed under the source's input density and
/// the label noise is mixed in analytically:
/// err = eta + (1 - 2 eta) * Pr_x[sign != f(x)].
template <class Net>
[[nodiscard]] double zero_one_error_exact(const Net& net, const LabeledSource& src) {
  const int d = dist_dim(src.dist);
  require(d <= 20, ErrorCode::argument, "exact 0-1 error needs d <= 20");
  double p_wrong = 0.0;
  for (std::uint64_t idx = 0; idx < (1ull << d); ++idx) {
    const HypercubeInput x = HypercubeInput::from_index(idx, d);
    if (predict_sign(net, x) != eval_target(src.target, x)) p_wrong += density(src.dist, x);
  }
  return src.noise.eta + (1.0 - 2.0 * src.noise.eta) * p_wrong;
}

/// Pr[sign(f_net(x)) != y] on n_test fresh draws (noisy labels included).
template <class Net>
[[nodiscard]] double zero_one_error_sampled(const Net& net, const LabeledSource& src, int n_test, Rng& rng) {
  require(n_test >= 1, ErrorCode::argument, "sampled 0-1 error needs n_test >= 1");
  const LabeledSample s = draw_sample(src, rng, static_cast<std::size_t>(n_test));
  long wrong = 0;
  for (std::size_t t = 0; t < s.xs.size(); ++t)
    if (predict_sign(net, s.xs[t]) != s.ys[t]) ++wrong;
  return static_cast<double>(wrong) / static_cast<double>(n_test);
}

}  // namespace pdslab
