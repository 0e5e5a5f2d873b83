#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "pdslab/distributions.hpp"
#include "pdslab/errors.hpp"
#include "pdslab/labels.hpp"
#include "pdslab/targets.hpp"

namespace pdslab {

namespace detail {

/// E_slice[chi_B] for SliceUniform(d): 1/(|B|+1) when |B| is even, else 0.
[[nodiscard]] inline double slice_parity_mean(int b) {
  return (b % 2 == 0) ? 1.0 / (b + 1) : 0.0;
}

// Clean moment E_dist[f(x) * x_i], or E_dist[f(x)] when i = 0.
[[nodiscard]] inline double clean_moment(const InputDistribution& dist, const Target& target, int i);

[[nodiscard]] inline double product_moment(const BiasVector& mu, const Target& target, int i) {
  if (std::holds_alternative<ParityTarget>(target)) {
    const ParityTarget& t = std::get<ParityTarget>(target);
    // E[chi_S x_i] = E[chi_{S xor {i}}] = prod of mu over the symmetric difference.
    double m = 1.0;
    bool i_in_s = false;
    for (int j : t.support) {
      if (j == i) {
        i_in_s = true;
        continue;
      }
      m *= mu[static_cast<std::size_t>(j - 1)];
    }
    if (i != 0 && !i_in_s) m *= mu[static_cast<std::size_t>(i - 1)];
    return m;
  }
  const JuntaTarget& t = std::get<JuntaTarget>(target);
  const auto pos = std::find(t.support.begin(), t.support.end(), i);
  double acc = 0.0;
  for (std::uint64_t z = 0; z < t.table.size(); ++z) {
    double w = t.table[z];
    for (std::size_t p = 0; p < t.support.size(); ++p) {
      const double zp = (z >> p) & 1ull ? 1.0 : -1.0;
      w *= 0.5 * (1.0 + zp * mu[static_cast<std::size_t>(t.support[p] - 1)]);
      if (pos != t.support.end() && p == static_cast<std::size_t>(pos - t.support.begin())) w *= zp;
    }
    acc += w;
  }
  if (i != 0 && pos == t.support.end()) acc *= mu[static_cast<std::size_t>(i - 1)];
  return acc;
}

[[nodiscard]] inline double slice_moment(int d, const Target& target, int i) {
  if (std::holds_alternative<ParityTarget>(target)) {
    const ParityTarget& t = std::get<ParityTarget>(target);
    int b = static_cast<int>(t.support.size());
    if (i != 0) b += std::binary_search(t.support.begin(), t.support.end(), i) ? -1 : 1;
    return slice_parity_mean(b);
  }
  const JuntaTarget& t = std::get<JuntaTarget>(target);
  const int k = static_cast<int>(t.support.size());
  const auto pos = std::find(t.support.begin(), t.support.end(), i);
  const bool off_support = i != 0 && pos == t.support.end();
  require(!off_support || d > k, ErrorCode::argument, "no off-support coordinate exists");

  // Hypergeometric masses: P(x_S = z | s ones total) = C(d-k, s-j) / C(d, s),
  // j = ones of z; off-support coordinates have mean (2(s-j)-(d-k))/(d-k).
  std::vector<long double> c_d(static_cast<std::size_t>(d) + 1), c_rest(static_cast<std::size_t>(d - k) + 1);
  for (int s = 0; s <= d; ++s) c_d[static_cast<std::size_t>(s)] = binomial_ld(d, s);
  for (int t2 = 0; t2 <= d - k; ++t2) c_rest[static_cast<std::size_t>(t2)] = binomial_ld(d - k, t2);

  long double acc = 0.0L;
  for (int s = 0; s <= d; ++s) {
    for (std::uint64_t z = 0; z < t.table.size(); ++z) {
      const int j = static_cast<int>(__builtin_popcountll(z));
      if (s - j < 0 || s - j > d - k) continue;
      long double w = t.table[z] * c_rest[static_cast<std::size_t>(s - j)] / c_d[static_cast<std::size_t>(s)];
      if (i != 0) {
        if (off_support)
          w *= static_cast<long double>(2 * (s - j) - (d - k)) / (d - k);
        else
          w *= (z >> (pos - t.support.begin())) & 1ull ? 1.0L : -1.0L;
      }
      acc += w;
    }
  }
  return static_cast<double>(acc / (d + 1));
}

[[nodiscard]] inline double clean_moment(const InputDistribution& dist, const Target& target, int i) {
  require(!std::holds_alternative<CircuitTarget>(target), ErrorCode::unsupported_combination,
          "exact moments support parity and junta targets only");
  if (std::holds_alternative<JuntaTarget>(target))
    require(std::get<JuntaTarget>(target).support.size() <= 20, ErrorCode::argument,
            "junta support too large for exact moments");
  return std::visit(
      [&](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ProductRademacher>) {
          return product_moment(d.mu, target, i);
        } else if constexpr (std::is_same_v<T, UniformHypercube>) {
          return product_moment(BiasVector(static_cast<std::size_t>(d.d), 0.0), target, i);
        } else if constexpr (std::is_same_v<T, SliceUniform>) {
          return slice_moment(d.d, target, i);
        } else if constexpr (std::is_same_v<T, Mixture>) {
          double acc = 0.0;
          for (std::size_t c = 0; c < d.components.size(); ++c)
            acc += d.weights[c] * clean_moment(d.components[c], target, i);
          return acc;
        } else {
          fail(ErrorCode::unsupported_combination, "exact moments are not defined for atom distributions");
        }
      },
      dist.v);
}

}  // namespace detail

/// E[y * x_i] under the source, exactly; 1-based coordinate i.
[[nodiscard]] inline double exact_moment(const LabeledSource& src, int i) {
  require(i >= 1 && i <= dist_dim(src.dist), ErrorCode::argument, "moment coordinate out of range");
  return (1.0 - 2.0 * src.noise.eta) * detail::clean_moment(src.dist, src.target, i);
}

/// E[y] under the source, exactly.
[[nodiscard]] inline double exact_mean_label(const LabeledSource& src) {
  return (1.0 - 2.0 * src.noise.eta) * detail::clean_moment(src.dist, src.target, 0);
}

}  // namespace pdslab
