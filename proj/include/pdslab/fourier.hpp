#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "pdslab/errors.hpp"
#include "pdslab/targets.hpp"

namespace pdslab {

/// Per-coordinate means of a product distribution, length dim, entries in
/// [-1, 1].
using BiasVector = std::vector<double>;

/// Biased Fourier coefficient f_hat_mu(S) = E_{D_mu}[f(x) * phi_S(x)] with
/// phi_S(x) = prod_{i in S} (x_i - mu_i)/sqrt(1 - mu_i^2), computed exactly.
/// Coordinates outside support(t) are integrated out analytically; the 2^k
/// cells of the target's support are enumerated with their product weights.
[[nodiscard]] inline double fourier_coefficient(const Target& t, const std::vector<int>& S, const BiasVector& mu) {
  const int d = target_dim(t);
  require(static_cast<int>(mu.size()) == d, ErrorCode::dimension_mismatch, "bias vector length must equal target dim");
  for (double m : mu) require(m >= -1.0 && m <= 1.0, ErrorCode::argument, "bias entries must lie in [-1, 1]");
  require(!std::holds_alternative<CircuitTarget>(t), ErrorCode::unsupported_combination,
          "fourier_coefficient supports parity and junta targets only");

  const std::vector<int> s = canonical_support(S, d);
  const std::vector<int>& a = std::holds_alternative<ParityTarget>(t) ? std::get<ParityTarget>(t).support
                                                                      : std::get<JuntaTarget>(t).support;
  require(a.size() <= 20, ErrorCode::argument, "target support too large for exact enumeration");
  for (int i : s)
    require(std::abs(mu[static_cast<std::size_t>(i - 1)]) < 1.0, ErrorCode::singular_bias,
            "degenerate bias on a basis coordinate");
  for (int i : a)
    require(std::abs(mu[static_cast<std::size_t>(i - 1)]) < 1.0, ErrorCode::singular_bias,
            "degenerate bias on a target support coordinate");

  // Any i in S outside support(t) contributes the factor E[phi_i] = 0.
  if (!std::includes(a.begin(), a.end(), s.begin(), s.end())) return 0.0;

  if (std::holds_alternative<ParityTarget>(t)) {
    // E[chi_A phi_S] factorizes: sqrt(1 - mu_i^2) on S, mu_i on A \ S.
    double c = 1.0;
    for (int i : a) {
      const double m = mu[static_cast<std::size_t>(i - 1)];
      c *= std::binary_search(s.begin(), s.end(), i) ? std::sqrt(1.0 - m * m) : m;
    }
    return c;
  }

  const JuntaTarget& j = std::get<JuntaTarget>(t);
  double acc = 0.0;
  for (std::uint64_t z = 0; z < j.table.size(); ++z) {
    double term = j.table[z];
    for (std::size_t p = 0; p < a.size(); ++p) {
      const double m = mu[static_cast<std::size_t>(a[p] - 1)];
      const double xi = (z >> p) & 1ull ? 1.0 : -1.0;
      term *= 0.5 * (1.0 + xi * m);
      if (std::binary_search(s.begin(), s.end(), a[p])) term *= (xi - m) / std::sqrt(1.0 - m * m);
    }
    acc += term;
  }
  return acc;
}

}  // namespace pdslab
