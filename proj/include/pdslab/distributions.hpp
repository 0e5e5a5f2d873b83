#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <variant>
#include <vector>

#include "pdslab/errors.hpp"
#include "pdslab/fourier.hpp"
#include "pdslab/hypercube.hpp"
#include "pdslab/rng.hpp"

namespace pdslab {

/// C(n, k) as a long double, exact for all ratios we form (n <= a few hundred).
[[nodiscard]] inline long double binomial_ld(int n, int k) {
  if (k < 0 || k > n) return 0.0L;
  long double c = 1.0L;
  for (int t = 0; t < k; ++t) c = c * static_cast<long double>(n - t) / static_cast<long double>(t + 1);
  return c;
}

/// Independent +-1 coordinates with means mu_i; coordinate i is +1 with
/// probability (mu_i + 1)/2. Degenerate |mu_i| = 1 is allowed.
struct ProductRademacher {
  BiasVector mu;
};

struct UniformHypercube {
  int d = 0;
};

/// Draw a level l uniform over {d, d-2, ..., -d}, then x uniform on the
/// slice {x : sum x_i = l}.
struct SliceUniform {
  int d = 0;
};

struct InputDistribution;

struct Mixture {
  std::vector<double> weights;
  std::vector<InputDistribution> components;
};

/// Finite support on {0,1}-view indices; requires d <= 64.
struct Atoms {
  int d = 0;
  std::vector<std::uint64_t> points;
  std::vector<double> probs;
  std::vector<double> cum;  // prefix sums of probs, for sampling
};

struct InputDistribution {
  std::variant<ProductRademacher, UniformHypercube, SliceUniform, Mixture, Atoms> v;
};

[[nodiscard]] inline int dist_dim(const InputDistribution& dist);

[[nodiscard]] inline InputDistribution make_product_rademacher(BiasVector mu) {
  require(!mu.empty(), ErrorCode::argument, "bias vector must be non-empty");
  for (double m : mu) require(m >= -1.0 && m <= 1.0, ErrorCode::argument, "bias entries must lie in [-1, 1]");
  return {ProductRademacher{std::move(mu)}};
}

[[nodiscard]] inline InputDistribution make_uniform(int d) {
  require(d >= 1, ErrorCode::argument, "uniform needs d >= 1");
  return {UniformHypercube{d}};
}

[[nodiscard]] inline InputDistribution make_slice_uniform(int d) {
  require(d >= 1, ErrorCode::argument, "slice uniform needs d >= 1");
  return {SliceUniform{d}};
}

[[nodiscard]] inline InputDistribution make_mixture(std::vector<double> weights,
                                                    std::vector<InputDistribution> components) {
  require(!components.empty(), ErrorCode::argument, "mixture needs at least one component");
  require(weights.size() == components.size(), ErrorCode::argument, "mixture weights/components length mismatch");
  double total = 0.0;
  for (double w : weights) {
    require(w > 0.0, ErrorCode::argument, "mixture weights must be positive");
    total += w;
  }
  require(std::abs(total - 1.0) <= 1e-12, ErrorCode::argument, "mixture weights must sum to 1");
  const int d = dist_dim(components.front());
  for (const auto& c : components)
    require(dist_dim(c) == d, ErrorCode::argument, "mixture components must share one dim");
  return {Mixture{std::move(weights), std::move(components)}};
}

[[nodiscard]] inline InputDistribution make_atoms(int d, std::vector<std::uint64_t> points,
                                                  std::vector<double> probs) {
  require(d >= 1 && d <= 64, ErrorCode::argument, "atoms need 1 <= d <= 64");
  require(!points.empty() && points.size() == probs.size(), ErrorCode::argument,
          "atoms need matching non-empty points/probs");
  double total = 0.0;
  for (double p : probs) {
    require(p >= 0.0, ErrorCode::argument, "atom probabilities must be nonnegative");
    total += p;
  }
  require(std::abs(total - 1.0) <= 1e-12, ErrorCode::argument, "atom probabilities must sum to 1");
  if (d < 64)
    for (std::uint64_t pt : points)
      require(pt < (1ull << d), ErrorCode::argument, "atom point index out of range");
  std::vector<std::uint64_t> sorted = points;
  std::sort(sorted.begin(), sorted.end());
  require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), ErrorCode::argument,
          "atom points must be distinct");
  Atoms a{d, std::move(points), std::move(probs), {}};
  a.cum.resize(a.probs.size());
  std::partial_sum(a.probs.begin(), a.probs.end(), a.cum.begin());
  a.cum.back() = 1.0;
  return {std::move(a)};
}

[[nodiscard]] inline int dist_dim(const InputDistribution& dist) {
  return std::visit(
      [](const auto& d) -> int {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ProductRademacher>) return static_cast<int>(d.mu.size());
        else if constexpr (std::is_same_v<T, Mixture>) return dist_dim(d.components.front());
        else return d.d;
      },
      dist.v);
}

/// One i.i.d. draw.
[[nodiscard]] inline HypercubeInput sample_one(const InputDistribution& dist, Rng& rng) {
  return std::visit(
      [&rng](const auto& d) -> HypercubeInput {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ProductRademacher>) {
          std::vector<std::int8_t> bits(d.mu.size());
          for (std::size_t i = 0; i < bits.size(); ++i)
            bits[i] = static_cast<std::int8_t>(rng.sign_unit(0.5 * (d.mu[i] + 1.0)));
          return HypercubeInput(std::move(bits));
        } else if constexpr (std::is_same_v<T, UniformHypercube>) {
          std::vector<std::int8_t> bits(static_cast<std::size_t>(d.d));
          for (auto& b : bits) b = static_cast<std::int8_t>(rng.sign_unit(0.5));
          return HypercubeInput(std::move(bits));
        } else if constexpr (std::is_same_v<T, SliceUniform>) {
          const auto s = static_cast<std::uint32_t>(rng.below(static_cast<std::uint64_t>(d.d) + 1));
          std::vector<std::int8_t> bits(static_cast<std::size_t>(d.d), -1);
          for (std::uint32_t idx : rng.partial_shuffle(static_cast<std::uint32_t>(d.d), s)) bits[idx] = 1;
          return HypercubeInput(std::move(bits));
        } else if constexpr (std::is_same_v<T, Mixture>) {
          const double u = rng.uniform01();
          double acc = 0.0;
          for (std::size_t c = 0; c + 1 < d.components.size(); ++c) {
            acc += d.weights[c];
            if (u < acc) return sample_one(d.components[c], rng);
          }
          return sample_one(d.components.back(), rng);
        } else {
          const double u = rng.uniform01();
          const auto it = std::upper_bound(d.cum.begin(), d.cum.end(), u);
          const std::size_t idx = std::min(static_cast<std::size_t>(it - d.cum.begin()), d.points.size() - 1);
          return HypercubeInput::from_index(d.points[idx], d.d);
        }
      },
      dist.v);
}

[[nodiscard]] inline std::vector<HypercubeInput> sample(const InputDistribution& dist, Rng& rng, std::size_t n) {
  std::vector<HypercubeInput> xs;
  xs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) xs.push_back(sample_one(dist, rng));
  return xs;
}

/// Exact probability mass of x under dist.
[[nodiscard]] inline double density(const InputDistribution& dist, const HypercubeInput& x) {
  require(x.dim() == dist_dim(dist), ErrorCode::dimension_mismatch, "density: point dim mismatch");
  return std::visit(
      [&x](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ProductRademacher>) {
          double p = 1.0;
          for (std::size_t i = 0; i < d.mu.size(); ++i) p *= 0.5 * (1.0 + x.bit(static_cast<int>(i) + 1) * d.mu[i]);
          return p;
        } else if constexpr (std::is_same_v<T, UniformHypercube>) {
          return std::ldexp(1.0, -d.d);
        } else if constexpr (std::is_same_v<T, SliceUniform>) {
          const int s = (d.d + x.coordinate_sum()) / 2;
          return static_cast<double>(1.0L / ((d.d + 1) * binomial_ld(d.d, s)));
        } else if constexpr (std::is_same_v<T, Mixture>) {
          double p = 0.0;
          for (std::size_t c = 0; c < d.components.size(); ++c) p += d.weights[c] * density(d.components[c], x);
          return p;
        } else {
          const std::uint64_t idx = x.to_index();
          for (std::size_t i = 0; i < d.points.size(); ++i)
            if (d.points[i] == idx) return d.probs[i];
          return 0.0;
        }
      },
      dist.v);
}

}  // namespace pdslab
