#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pdslab/distributions.hpp"
#include "pdslab/errors.hpp"
#include "pdslab/rng.hpp"
#include "pdslab/targets.hpp"

namespace pdslab {

/// (1/2) Rad(1-1/d)^(x)d + (1/2) Unif: every coordinate has mean 1 - 2/d in
/// the biased half.
[[nodiscard]] inline InputDistribution thm3_parity_train(int d) {
  require(d >= 1, ErrorCode::argument, "needs d >= 1");
  return make_mixture({0.5, 0.5},
                      {make_product_rademacher(BiasVector(static_cast<std::size_t>(d), 1.0 - 2.0 / d)),
                       make_uniform(d)});
}

/// (1/2) Rad(1-1/d)^(x)d + (1/2) SliceUniform.
[[nodiscard]] inline InputDistribution thm4_parity_slice_train(int d) {
  require(d >= 1, ErrorCode::argument, "needs d >= 1");
  return make_mixture({0.5, 0.5},
                      {make_product_rademacher(BiasVector(static_cast<std::size_t>(d), 1.0 - 2.0 / d)),
                       make_slice_uniform(d)});
}

/// (1/2) Unif + (1/2) D_S where D_S is uniform off the support and on the
/// support all-equal, sign +-1 equiprobable.
[[nodiscard]] inline InputDistribution fpds_parity_train(int d, const std::vector<int>& support) {
  require(d >= 1, ErrorCode::argument, "needs d >= 1");
  const std::vector<int> s = canonical_support(support, d);
  require(!s.empty(), ErrorCode::argument, "needs a non-empty support");
  BiasVector plus(static_cast<std::size_t>(d), 0.0), minus(static_cast<std::size_t>(d), 0.0);
  for (int i : s) {
    plus[static_cast<std::size_t>(i - 1)] = 1.0;
    minus[static_cast<std::size_t>(i - 1)] = -1.0;
  }
  InputDistribution d_s = make_mixture({0.5, 0.5}, {make_product_rademacher(std::move(plus)),
                                                    make_product_rademacher(std::move(minus))});
  return make_mixture({0.5, 0.5}, {make_uniform(d), std::move(d_s)});
}

/// Draws mu ~ Unif[-1,1]^d from rng (the meta-distribution draw), then
/// returns (1/2) D_mu + (1/2) D_0.
[[nodiscard]] inline InputDistribution rdspac_junta_meta(int d, Rng& rng) {
  require(d >= 1, ErrorCode::argument, "needs d >= 1");
  BiasVector mu(static_cast<std::size_t>(d));
  for (auto& m : mu) m = 2.0 * rng.uniform01() - 1.0;
  return make_mixture({0.5, 0.5}, {make_product_rademacher(std::move(mu)), make_uniform(d)});
}

/// (1/2) D_mu + (1/2) D_0 with a scalar bias on every coordinate.
[[nodiscard]] inline InputDistribution fig1_mixture(int d, double mu = 0.96) {
  require(d >= 1, ErrorCode::argument, "needs d >= 1");
  require(mu >= -1.0 && mu <= 1.0, ErrorCode::argument, "scalar bias must lie in [-1, 1]");
  return make_mixture({0.5, 0.5},
                      {make_product_rademacher(BiasVector(static_cast<std::size_t>(d), mu)), make_uniform(d)});
}

/// D_mu alone: the biased product with scalar bias mu on every coordinate.
[[nodiscard]] inline InputDistribution biased_product(int d, double mu) {
  require(d >= 1, ErrorCode::argument, "needs d >= 1");
  require(mu >= -1.0 && mu <= 1.0, ErrorCode::argument, "scalar bias must lie in [-1, 1]");
  return make_product_rademacher(BiasVector(static_cast<std::size_t>(d), mu));
}

/// Dispatch by name; `support` feeds fpds-parity-DS, `mu` feeds fig1-mixture
/// and biased-product, `rng` feeds the rdspac meta-draw.
[[nodiscard]] inline InputDistribution build_named_distribution(std::string_view name, int d,
                                                                const std::vector<int>& support, double mu,
                                                                Rng& rng) {
  if (name == "thm3-parity") return thm3_parity_train(d);
  if (name == "thm4-parity-slice") return thm4_parity_slice_train(d);
  if (name == "fpds-parity-DS") return fpds_parity_train(d, support);
  if (name == "rdspac-junta-meta") return rdspac_junta_meta(d, rng);
  if (name == "fig1-mixture") return fig1_mixture(d, mu);
  if (name == "biased-product") return biased_product(d, mu);
  if (name == "uniform") return make_uniform(d);
  fail(ErrorCode::argument, "unknown distribution name: " + std::string(name));
}

}  // namespace pdslab
