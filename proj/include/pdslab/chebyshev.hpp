#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "pdslab/errors.hpp"

namespace pdslab {

/// Interpolation nodes mu_r = (1/2) cos((2r-1) pi / (2k)), r = 1..k; all lie
/// in (-1/2, 1/2) and are pairwise distinct. The set is symmetric about 0,
/// and the symmetry is enforced exactly (mu_{k+1-r} = -mu_r bit for bit, the
/// middle node of an odd k is 0.0) so that odd-moment cancellations across
/// mirrored nodes are exact in floating point.
[[nodiscard]] inline std::vector<double> chebyshev_nodes(int k) {
  require(k >= 1 && k <= 20, ErrorCode::argument, "needs 1 <= k <= 20");
  std::vector<double> nodes(static_cast<std::size_t>(k), 0.0);
  for (int r = 1; 2 * r <= k; ++r) {
    const double mu = 0.5 * std::cos((2 * r - 1) * std::numbers::pi / (2 * k));
    nodes[static_cast<std::size_t>(r - 1)] = mu;
    nodes[static_cast<std::size_t>(k - r)] = -mu;
  }
  return nodes;
}

/// Horner evaluation; coeffs[j] multiplies x^j.
[[nodiscard]] inline double eval_poly(const std::vector<double>& coeffs, double x) {
  double v = 0.0;
  for (std::size_t j = coeffs.size(); j-- > 0;) v = v * x + coeffs[j];
  return v;
}

/// Unique degree < k interpolant through (nodes[j], values[j]) in the
/// monomial basis: barycentric weights w_j, the master polynomial
/// N(x) = prod (x - x_l), and per-node deflation N/(x - x_j).
[[nodiscard]] inline std::vector<double> interpolate_chebyshev(const std::vector<double>& nodes,
                                                               const std::vector<double>& values) {
  const std::size_t k = nodes.size();
  require(k >= 1 && k <= 20, ErrorCode::argument, "needs 1 <= k <= 20 nodes");
  require(values.size() == k, ErrorCode::argument, "nodes/values length mismatch");
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b)
      require(nodes[a] != nodes[b], ErrorCode::argument, "interpolation nodes must be distinct");

  std::vector<double> w(k, 1.0);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t l = 0; l < k; ++l)
      if (l != j) w[j] /= nodes[j] - nodes[l];

  // N(x) coefficients, degree k, leading coefficient 1.
  std::vector<double> master(k + 1, 0.0);
  master[0] = 1.0;
  std::size_t deg = 0;
  for (std::size_t l = 0; l < k; ++l) {
    for (std::size_t j = deg + 2; j-- > 1;) master[j] = master[j - 1] - nodes[l] * master[j];
    master[0] *= -nodes[l];
    ++deg;
  }

  std::vector<double> coeffs(k, 0.0);
  std::vector<double> quotient(k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    // Synthetic division of N by (x - x_j): remainder is 0 by construction.
    double carry = master[k];
    for (std::size_t p = k; p-- > 0;) {
      quotient[p] = carry;
      carry = master[p] + nodes[j] * carry;
    }
    const double scale = values[j] * w[j];
    for (std::size_t p = 0; p < k; ++p) coeffs[p] += scale * quotient[p];
  }
  return coeffs;
}

}  // namespace pdslab
