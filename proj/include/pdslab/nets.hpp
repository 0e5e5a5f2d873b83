#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "pdslab/errors.hpp"
#include "pdslab/hypercube.hpp"
#include "pdslab/rng.hpp"

namespace pdslab {

/// Soft-thresholding rho_lambda(z) = sign(z) * max(|z| - lambda, 0).
[[nodiscard]] inline double soft_threshold(double z, double lambda) {
  require(lambda >= 0.0, ErrorCode::argument, "soft_threshold needs lambda >= 0");
  const double m = std::abs(z) - lambda;
  return m > 0.0 ? (z < 0.0 ? -m : m) : 0.0;
}

[[nodiscard]] inline std::vector<double> soft_threshold(const std::vector<double>& z, double lambda) {
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = soft_threshold(z[i], lambda);
  return out;
}

/// f(x) = sum_j a_j * ReLU(<w_j, x> + b_j). Rows of W are stored row-major in
/// `w` (w[j*d + i] is coordinate i+1 of neuron j); there is no output bias.
struct TwoLayerNet {
  int n = 0;
  int d = 0;
  std::vector<double> a;  // n
  std::vector<double> w;  // n * d, row-major
  std::vector<double> b;  // n

  [[nodiscard]] double weight(int j, int i) const {  // neuron j (0-based), coordinate i (1-based)
    return w[static_cast<std::size_t>(j) * static_cast<std::size_t>(d) + static_cast<std::size_t>(i - 1)];
  }
};

[[nodiscard]] inline TwoLayerNet make_zero_net(int n, int d) {
  require(n >= 1 && d >= 1, ErrorCode::argument, "network needs n >= 1 and d >= 1");
  TwoLayerNet net;
  net.n = n;
  net.d = d;
  net.a.assign(static_cast<std::size_t>(n), 0.0);
  net.w.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(d), 0.0);
  net.b.assign(static_cast<std::size_t>(n), 0.0);
  return net;
}

[[nodiscard]] inline double forward(const TwoLayerNet& net, const HypercubeInput& x) {
  require(x.dim() == net.d, ErrorCode::dimension_mismatch, "forward input dim mismatch");
  double f = 0.0;
  for (int j = 0; j < net.n; ++j) {
    double z = net.b[static_cast<std::size_t>(j)];
    const double* row = net.w.data() + static_cast<std::size_t>(j) * static_cast<std::size_t>(net.d);
    for (int i = 0; i < net.d; ++i) z += row[i] * x.bits()[static_cast<std::size_t>(i)];
    if (z > 0.0) f += net.a[static_cast<std::size_t>(j)] * z;
  }
  return f;
}

/// sign(forward), with sign(0) = +1 so the zero predictor is well defined.
[[nodiscard]] inline int predict_sign(const TwoLayerNet& net, const HypercubeInput& x) {
  return forward(net, x) >= 0.0 ? +1 : -1;
}

/// Per-layer uniform init in [-1/sqrt(fan_in), +1/sqrt(fan_in)]. Draw order is
/// part of the determinism contract: W row by row, then b, then a.
[[nodiscard]] inline TwoLayerNet standard_uniform_init(int n, int d, Rng& rng) {
  TwoLayerNet net = make_zero_net(n, d);
  const double s1 = 1.0 / std::sqrt(static_cast<double>(d));
  const double s2 = 1.0 / std::sqrt(static_cast<double>(n));
  for (double& v : net.w) v = s1 * (2.0 * rng.uniform01() - 1.0);
  for (double& v : net.b) v = s1 * (2.0 * rng.uniform01() - 1.0);
  for (double& v : net.a) v = s2 * (2.0 * rng.uniform01() - 1.0);
  return net;
}

/// Layerwise-l1 init: N = 4d+6 neurons covering every (a0 in {+1,-1},
/// b0 in {-d-1..d+1}) pair, W0 = 0. Neurons are ordered b ascending with the
/// a=+1 twin first; the pairing makes forward identically 0 at init.
[[nodiscard]] inline TwoLayerNet alg1_init(int d) {
  require(d >= 1, ErrorCode::argument, "alg1_init needs d >= 1");
  TwoLayerNet net = make_zero_net(4 * d + 6, d);
  int j = 0;
  for (int bv = -(d + 1); bv <= d + 1; ++bv)
    for (int av : {+1, -1}) {
      net.a[static_cast<std::size_t>(j)] = av;
      net.b[static_cast<std::size_t>(j)] = bv;
      ++j;
    }
  return net;
}

/// Layerwise-covariance init: W0 = 0, a0 = +kappa on the first half of the
/// neurons and -kappa on the rest, b0 = kappa. Requires even width so the
/// initial function is identically 0.
[[nodiscard]] inline TwoLayerNet alg2_init(int n, int d, double kappa) {
  require(n >= 2 && n % 2 == 0, ErrorCode::argument, "alg2_init needs even width >= 2");
  require(kappa > 0.0, ErrorCode::argument, "alg2_init needs kappa > 0");
  TwoLayerNet net = make_zero_net(n, d);
  for (int j = 0; j < n; ++j) net.a[static_cast<std::size_t>(j)] = j < n / 2 ? kappa : -kappa;
  for (double& v : net.b) v = kappa;
  return net;
}

/// Fully-connected ReLU stack: hidden layers widths[0..L-1] (each with bias),
/// then a linear head with no bias. widths empty is not allowed.
struct MultiLayerNet {
  int d = 0;
  std::vector<int> widths;
  std::vector<std::vector<double>> w;     // layer l: widths[l] x fan_in, row-major
  std::vector<std::vector<double>> bias;  // layer l: widths[l]
  std::vector<double> head;               // widths.back()
};

[[nodiscard]] inline MultiLayerNet make_zero_mlp(int d, std::vector<int> widths) {
  require(d >= 1, ErrorCode::argument, "network needs d >= 1");
  require(!widths.empty(), ErrorCode::argument, "mlp needs at least one hidden layer");
  for (int h : widths) require(h >= 1, ErrorCode::argument, "mlp widths must be >= 1");
  MultiLayerNet net;
  net.d = d;
  net.widths = std::move(widths);
  int fan_in = d;
  for (int h : net.widths) {
    net.w.emplace_back(static_cast<std::size_t>(h) * static_cast<std::size_t>(fan_in), 0.0);
    net.bias.emplace_back(static_cast<std::size_t>(h), 0.0);
    fan_in = h;
  }
  net.head.assign(static_cast<std::size_t>(net.widths.back()), 0.0);
  return net;
}

[[nodiscard]] inline MultiLayerNet standard_uniform_init_mlp(int d, std::vector<int> widths, Rng& rng) {
  MultiLayerNet net = make_zero_mlp(d, std::move(widths));
  int fan_in = d;
  for (std::size_t l = 0; l < net.widths.size(); ++l) {
    const double s = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (double& v : net.w[l]) v = s * (2.0 * rng.uniform01() - 1.0);
    for (double& v : net.bias[l]) v = s * (2.0 * rng.uniform01() - 1.0);
    fan_in = net.widths[l];
  }
  const double s = 1.0 / std::sqrt(static_cast<double>(net.widths.back()));
  for (double& v : net.head) v = s * (2.0 * rng.uniform01() - 1.0);
  return net;
}

[[nodiscard]] inline double forward(const MultiLayerNet& net, const HypercubeInput& x) {
  require(x.dim() == net.d, ErrorCode::dimension_mismatch, "forward input dim mismatch");
  std::vector<double> act(x.bits().begin(), x.bits().end());
  for (std::size_t l = 0; l < net.widths.size(); ++l) {
    const int h = net.widths[l];
    const int fan_in = static_cast<int>(act.size());
    std::vector<double> next(static_cast<std::size_t>(h));
    for (int j = 0; j < h; ++j) {
      double z = net.bias[l][static_cast<std::size_t>(j)];
      const double* row = net.w[l].data() + static_cast<std::size_t>(j) * static_cast<std::size_t>(fan_in);
      for (int i = 0; i < fan_in; ++i) z += row[i] * act[static_cast<std::size_t>(i)];
      next[static_cast<std::size_t>(j)] = z > 0.0 ? z : 0.0;
    }
    act = std::move(next);
  }
  double f = 0.0;
  for (std::size_t j = 0; j < act.size(); ++j) f += net.head[j] * act[j];
  return f;
}

[[nodiscard]] inline int predict_sign(const MultiLayerNet& net, const HypercubeInput& x) {
  return forward(net, x) >= 0.0 ? +1 : -1;
}

namespace detail {

inline void put_u32_le(std::ostream& os, std::uint32_t v) {
  unsigned char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
  os.write(reinterpret_cast<const char*>(buf), 4);
}

inline void put_f64_le(std::ostream& os, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xFF);
  os.write(reinterpret_cast<const char*>(buf), 8);
}

[[nodiscard]] inline std::uint32_t get_u32_le(std::istream& is) {
  unsigned char buf[4];
  is.read(reinterpret_cast<char*>(buf), 4);
  require(is.good(), ErrorCode::io, "checkpoint truncated");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(buf[i]) << (8 * i);
  return v;
}

[[nodiscard]] inline double get_f64_le(std::istream& is) {
  unsigned char buf[8];
  is.read(reinterpret_cast<char*>(buf), 8);
  require(is.good(), ErrorCode::io, "checkpoint truncated");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace detail

/// Checkpoint layout (all integers uint32, all reals float64, little-endian):
/// header N (first hidden width), d, L (affine layer count); then the extra
/// hidden widths for L > 2 (L-2 words, absent for a two-layer net); then
/// row-major parameter blocks in layer order, each hidden layer as W then
/// bias, and finally the head weights. A TwoLayerNet is exactly the L = 2
/// case: header, W (N x d), b (N), a (N).
inline void save_checkpoint(const TwoLayerNet& net, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  require(os.good(), ErrorCode::io, "cannot open checkpoint for writing: " + path);
  detail::put_u32_le(os, static_cast<std::uint32_t>(net.n));
  detail::put_u32_le(os, static_cast<std::uint32_t>(net.d));
  detail::put_u32_le(os, 2);
  for (double v : net.w) detail::put_f64_le(os, v);
  for (double v : net.b) detail::put_f64_le(os, v);
  for (double v : net.a) detail::put_f64_le(os, v);
  os.flush();
  require(os.good(), ErrorCode::io, "checkpoint write failed: " + path);
}

[[nodiscard]] inline TwoLayerNet load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  require(is.good(), ErrorCode::io, "cannot open checkpoint: " + path);
  const std::uint32_t n = detail::get_u32_le(is);
  const std::uint32_t d = detail::get_u32_le(is);
  const std::uint32_t layers = detail::get_u32_le(is);
  require(layers == 2, ErrorCode::io, "checkpoint is not a two-layer network");
  require(n >= 1 && d >= 1, ErrorCode::io, "checkpoint header is malformed");
  TwoLayerNet net = make_zero_net(static_cast<int>(n), static_cast<int>(d));
  for (double& v : net.w) v = detail::get_f64_le(is);
  for (double& v : net.b) v = detail::get_f64_le(is);
  for (double& v : net.a) v = detail::get_f64_le(is);
  return net;
}

inline void save_checkpoint(const MultiLayerNet& net, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  require(os.good(), ErrorCode::io, "cannot open checkpoint for writing: " + path);
  const std::uint32_t layers = static_cast<std::uint32_t>(net.widths.size()) + 1;
  detail::put_u32_le(os, static_cast<std::uint32_t>(net.widths.front()));
  detail::put_u32_le(os, static_cast<std::uint32_t>(net.d));
  detail::put_u32_le(os, layers);
  for (std::size_t l = 1; l < net.widths.size(); ++l)
    detail::put_u32_le(os, static_cast<std::uint32_t>(net.widths[l]));
  for (std::size_t l = 0; l < net.widths.size(); ++l) {
    for (double v : net.w[l]) detail::put_f64_le(os, v);
    for (double v : net.bias[l]) detail::put_f64_le(os, v);
  }
  for (double v : net.head) detail::put_f64_le(os, v);
  os.flush();
  require(os.good(), ErrorCode::io, "checkpoint write failed: " + path);
}

[[nodiscard]] inline MultiLayerNet load_checkpoint_mlp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  require(is.good(), ErrorCode::io, "cannot open checkpoint: " + path);
  const std::uint32_t n = detail::get_u32_le(is);
  const std::uint32_t d = detail::get_u32_le(is);
  const std::uint32_t layers = detail::get_u32_le(is);
  require(n >= 1 && d >= 1 && layers >= 2, ErrorCode::io, "checkpoint header is malformed");
  std::vector<int> widths{static_cast<int>(n)};
  for (std::uint32_t l = 2; l < layers; ++l) widths.push_back(static_cast<int>(detail::get_u32_le(is)));
  MultiLayerNet net = make_zero_mlp(static_cast<int>(d), std::move(widths));
  for (std::size_t l = 0; l < net.widths.size(); ++l) {
    for (double& v : net.w[l]) v = detail::get_f64_le(is);
    for (double& v : net.bias[l]) v = detail::get_f64_le(is);
  }
  for (double& v : net.head) v = detail::get_f64_le(is);
  return net;
}

}  // namespace pdslab
