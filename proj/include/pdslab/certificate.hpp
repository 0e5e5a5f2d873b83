#pragma once

#include <vector>

#include "pdslab/errors.hpp"
#include "pdslab/nets.hpp"
#include "pdslab/targets.hpp"

namespace pdslab {

namespace detail {

/// Indicator row of S into neuron j of net, scaled by sgn.
inline void set_support_row(TwoLayerNet& net, int j, const std::vector<int>& support, int sgn) {
  double* row = net.w.data() + static_cast<std::size_t>(j) * static_cast<std::size_t>(net.d);
  for (int i : support) row[static_cast<std::size_t>(i - 1)] = sgn;
}

}  // namespace detail

/// Exact ReLU realization of an odd parity: a k+3-neuron net whose first-layer
/// rows are +-1_S and whose value equals chi_S(x) on every point (exactly, in
/// integer arithmetic). With u = sum_{i in S} x_i, the network computes
///   g(u) = c*u + sum_{t in {1,3,..,k}} beta_t * (ReLU(u - t) - ReLU(-u - t)),
///   c = (-1)^((k-1)/2),  beta_t = -2*(-1)^((k-t)/2),
/// the odd piecewise-linear interpolant of u -> (-1)^((k-u)/2) on the levels
/// u in {-k, -k+2, .., k}; the linear term is realized as ReLU(u) - ReLU(-u).
/// Even |S| is rejected; build_parity_interpolant covers every arity.
[[nodiscard]] inline TwoLayerNet build_parity_certificate(int k, int d, const std::vector<int>& support) {
  require(d >= 1, ErrorCode::argument, "certificate needs d >= 1");
  const std::vector<int> s = canonical_support(support, d);
  require(static_cast<int>(s.size()) == k, ErrorCode::argument, "certificate k must equal |support|");
  require(k >= 1 && k <= 25, ErrorCode::argument, "certificate needs 1 <= k <= 25");
  require(k % 2 == 1, ErrorCode::unsupported_combination,
          "certificate covers odd |S| only; use build_parity_interpolant for even arity");
  TwoLayerNet net = make_zero_net(k + 3, d);
  const double c = ((k - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
  net.a[0] = c;
  net.a[1] = -c;
  detail::set_support_row(net, 0, s, +1);
  detail::set_support_row(net, 1, s, -1);
  int j = 2;
  for (int t = 1; t <= k; t += 2) {
    const double beta = ((k - t) / 2) % 2 == 0 ? -2.0 : 2.0;
    net.a[static_cast<std::size_t>(j)] = beta;
    net.b[static_cast<std::size_t>(j)] = -t;
    detail::set_support_row(net, j, s, +1);
    ++j;
    net.a[static_cast<std::size_t>(j)] = -beta;
    net.b[static_cast<std::size_t>(j)] = -t;
    detail::set_support_row(net, j, s, -1);
    ++j;
  }
  return net;
}

/// Exact ReLU realization of chi_S for any arity k = |S| as a k+2-neuron grid
/// interpolant in u = sum_{i in S} x_i: a constant term realized as
/// v0 * (ReLU(u + k + 2) - ReLU(u + k + 1)) (both active on |u| <= k, their
/// difference is exactly 1) plus k slope-change neurons ReLU(u - u_{m-1})
/// interpolating the level values v_m = (-1)^(k-m) at u_m = -k + 2m. All
/// coefficients are integers, so outputs are exactly +-1.
[[nodiscard]] inline TwoLayerNet build_parity_interpolant(int k, int d, const std::vector<int>& support) {
  require(d >= 1, ErrorCode::argument, "interpolant needs d >= 1");
  const std::vector<int> s = canonical_support(support, d);
  require(static_cast<int>(s.size()) == k, ErrorCode::argument, "interpolant k must equal |support|");
  require(k >= 1 && k <= 25, ErrorCode::argument, "interpolant needs 1 <= k <= 25");
  TwoLayerNet net = make_zero_net(k + 2, d);
  const double v0 = k % 2 == 0 ? 1.0 : -1.0;  // value at the all-minus level u = -k
  net.a[0] = v0;
  net.b[0] = k + 2;
  detail::set_support_row(net, 0, s, +1);
  net.a[1] = -v0;
  net.b[1] = k + 1;
  detail::set_support_row(net, 1, s, +1);
  double prev_slope = 0.0;
  for (int m = 1; m <= k; ++m) {
    const double vm = (k - m) % 2 == 0 ? 1.0 : -1.0;
    const double vprev = (k - m + 1) % 2 == 0 ? 1.0 : -1.0;
    const double slope = (vm - vprev) / 2.0;
    net.a[static_cast<std::size_t>(m + 1)] = slope - prev_slope;
    net.b[static_cast<std::size_t>(m + 1)] = -(-k + 2 * (m - 1));
    detail::set_support_row(net, m + 1, s, +1);
    prev_slope = slope;
  }
  return net;
}

}  // namespace pdslab
