#pragma once

#include <algorithm>
#include <vector>

#include "pdslab/errors.hpp"
#include "pdslab/hypercube.hpp"
#include "pdslab/labels.hpp"
#include "pdslab/moments.hpp"
#include "pdslab/targets.hpp"

namespace pdslab {

struct CorrelationLearnResult {
  ParityTarget parity;
  std::vector<double> correlations;  // T_i, one per coordinate
  /// All correlations identical: no usable gap, support left empty.
  bool degenerate_gap = false;
};

/// Thresholds correlations at the midpoint of their range; strict `>` so a
/// flat profile selects nothing.
[[nodiscard]] inline CorrelationLearnResult support_from_correlations(std::vector<double> t_hat) {
  const int d = static_cast<int>(t_hat.size());
  require(d >= 1, ErrorCode::argument, "needs at least one coordinate");
  const auto [lo_it, hi_it] = std::minmax_element(t_hat.begin(), t_hat.end());
  const double mid = 0.5 * (*lo_it + *hi_it);
  CorrelationLearnResult res;
  res.degenerate_gap = *lo_it == *hi_it;
  std::vector<int> support;
  for (int i = 1; i <= d; ++i)
    if (t_hat[static_cast<std::size_t>(i - 1)] > mid) support.push_back(i);
  res.parity = make_parity(d, std::move(support));
  res.correlations = std::move(t_hat);
  return res;
}

/// Estimates T_i = (1/m) sum_j y_j x_i^j and thresholds at the midpoint of
/// {min_i T_i, max_i T_i}. Deterministic given the samples.
[[nodiscard]] inline CorrelationLearnResult learn_parity_correlation(const std::vector<HypercubeInput>& xs,
                                                                     const std::vector<int>& ys, int d) {
  require(xs.size() >= 2, ErrorCode::argument, "needs at least 2 samples");
  require(xs.size() == ys.size(), ErrorCode::argument, "sample/label count mismatch");
  std::vector<double> t_hat(static_cast<std::size_t>(d), 0.0);
  for (std::size_t j = 0; j < xs.size(); ++j) {
    require(xs[j].dim() == d, ErrorCode::dimension_mismatch, "sample dim mismatch");
    require(ys[j] == 1 || ys[j] == -1, ErrorCode::argument, "labels must be +-1");
    for (int i = 1; i <= d; ++i) t_hat[static_cast<std::size_t>(i - 1)] += ys[j] * xs[j].bit(i);
  }
  for (double& t : t_hat) t /= static_cast<double>(xs.size());
  return support_from_correlations(std::move(t_hat));
}

/// Population version: thresholds the exact moments E[y x_i] instead of
/// sample estimates.
[[nodiscard]] inline CorrelationLearnResult learn_parity_correlation_exact(const LabeledSource& src) {
  const int d = dist_dim(src.dist);
  std::vector<double> t(static_cast<std::size_t>(d));
  for (int i = 1; i <= d; ++i) t[static_cast<std::size_t>(i - 1)] = exact_moment(src, i);
  return support_from_correlations(std::move(t));
}

/// Population separation between in-support and off-support correlations
/// under the half-biased/half-uniform mixture with per-coordinate mean
/// 1 - 2/d: Delta = (1/2)(1-2eta)((1-2/d)^{k-1} - (1-2/d)^{k+1}).
[[nodiscard]] inline double biased_mixture_correlation_gap(int d, int k, double eta) {
  require(d >= 1 && k >= 1 && k <= d, ErrorCode::argument, "needs 1 <= k <= d");
  const double rho = 1.0 - 2.0 / d;
  return 0.5 * (1.0 - 2.0 * eta) * (std::pow(rho, k - 1) - std::pow(rho, k + 1));
}

}  // namespace pdslab
