#pragma once

#include <algorithm>
#include <cstdint>
#include <variant>
#include <vector>

#include "pdslab/circuit.hpp"
#include "pdslab/errors.hpp"
#include "pdslab/hypercube.hpp"

namespace pdslab {

/// Sorted, deduplicated, 1-based coordinate set within [1, dim].
[[nodiscard]] inline std::vector<int> canonical_support(std::vector<int> support, int dim) {
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  for (int i : support)
    require(i >= 1 && i <= dim, ErrorCode::argument, "support coordinate out of [1, dim]");
  return support;
}

/// chi_S(x) = prod_{i in S} x_i, valued in {-1,+1}.
struct ParityTarget {
  int dim = 0;
  std::vector<int> support;

  friend bool operator==(const ParityTarget&, const ParityTarget&) = default;
};

[[nodiscard]] inline ParityTarget make_parity(int dim, std::vector<int> support) {
  require(dim >= 1, ErrorCode::argument, "parity dim must be >= 1");
  return ParityTarget{dim, canonical_support(std::move(support), dim)};
}

[[nodiscard]] inline int eval_parity(const ParityTarget& t, const HypercubeInput& x) {
  require(x.dim() == t.dim, ErrorCode::dimension_mismatch, "parity input dim mismatch");
  int v = 1;
  for (int i : t.support) v *= x.bit(i);
  return v;
}

/// +-1 function of the coordinates in `support`; table[z] is the value on the
/// cell whose restriction index z packs coordinate support[j] into bit j
/// (bit = 1 means +1).
struct JuntaTarget {
  int dim = 0;
  std::vector<int> support;
  std::vector<int8_t> table;

  /// Canonical forms compare exactly: same effective support, same table.
  friend bool operator==(const JuntaTarget&, const JuntaTarget&) = default;
};

/// Drops coordinates the table does not depend on, collapsing the table to the
/// effective support. The stored support of a junta is always effective.
[[nodiscard]] inline JuntaTarget canonicalize_junta(JuntaTarget t) {
  for (int j = static_cast<int>(t.support.size()) - 1; j >= 0; --j) {
    const std::uint64_t bit = 1ull << j;
    bool relevant = false;
    for (std::uint64_t z = 0; z < t.table.size(); ++z)
      if (!(z & bit) && t.table[z] != t.table[z | bit]) {
        relevant = true;
        break;
      }
    if (relevant) continue;
    std::vector<int8_t> shrunk(t.table.size() / 2);
    for (std::uint64_t z = 0; z < shrunk.size(); ++z) {
      const std::uint64_t low = z & (bit - 1);
      shrunk[z] = t.table[low | ((z & ~(bit - 1)) << 1)];
    }
    t.table = std::move(shrunk);
    t.support.erase(t.support.begin() + j);
  }
  return t;
}

[[nodiscard]] inline JuntaTarget make_junta(int dim, std::vector<int> support, std::vector<int8_t> table) {
  require(dim >= 1, ErrorCode::argument, "junta dim must be >= 1");
  auto canon = canonical_support(std::move(support), dim);
  require(canon.size() < 64, ErrorCode::argument, "junta support too large");
  require(table.size() == (1ull << canon.size()), ErrorCode::argument, "junta table size must be 2^|support|");
  for (int8_t v : table) require(v == 1 || v == -1, ErrorCode::argument, "junta table values must be +-1");
  return canonicalize_junta(JuntaTarget{dim, std::move(canon), std::move(table)});
}

/// Restriction index of x onto the junta's support cells.
[[nodiscard]] inline std::uint64_t junta_cell(const JuntaTarget& t, const HypercubeInput& x) {
  std::uint64_t z = 0;
  for (std::size_t j = 0; j < t.support.size(); ++j)
    if (x.bit(t.support[j]) > 0) z |= 1ull << j;
  return z;
}

[[nodiscard]] inline int eval_junta(const JuntaTarget& t, const HypercubeInput& x) {
  require(x.dim() == t.dim, ErrorCode::dimension_mismatch, "junta input dim mismatch");
  return t.table[junta_cell(t, x)];
}

/// Boolean circuit target; circuit output bit b maps to label 2b - 1.
struct CircuitTarget {
  int dim = 0;
  BooleanCircuit circuit;
};

[[nodiscard]] inline CircuitTarget make_circuit_target(int dim, BooleanCircuit circuit) {
  require(dim >= 1, ErrorCode::argument, "circuit target dim must be >= 1");
  validate_circuit(circuit);
  require(max_input_coordinate(circuit) <= dim, ErrorCode::argument, "circuit reads coordinates beyond dim");
  return CircuitTarget{dim, std::move(circuit)};
}

[[nodiscard]] inline int eval_circuit_target(const CircuitTarget& t, const HypercubeInput& x) {
  require(x.dim() == t.dim, ErrorCode::dimension_mismatch, "circuit input dim mismatch");
  return 2 * eval_circuit(t.circuit, x) - 1;
}

using Target = std::variant<ParityTarget, JuntaTarget, CircuitTarget>;

[[nodiscard]] inline int target_dim(const Target& t) {
  return std::visit([](const auto& v) { return v.dim; }, t);
}

/// Clean +-1 label of x under the target.
[[nodiscard]] inline int eval_target(const Target& t, const HypercubeInput& x) {
  return std::visit(
      [&x](const auto& v) -> int {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ParityTarget>) return eval_parity(v, x);
        if constexpr (std::is_same_v<T, JuntaTarget>) return eval_junta(v, x);
        if constexpr (std::is_same_v<T, CircuitTarget>) return eval_circuit_target(v, x);
      },
      t);
}

/// k-junta on coordinates 1..k:
/// f_k(x) = (1/2) * prod_{i=1}^{k-2} x_i * (1 + x_{k-1} + x_k - x_{k-1} x_k).
/// The trailing factor is -1 iff x_{k-1} = x_k = -1, else +1.
[[nodiscard]] inline JuntaTarget build_fk(int k, int dim) {
  require(k >= 3 && k <= 20, ErrorCode::argument, "build_fk needs 3 <= k <= 20");
  require(dim >= k, ErrorCode::argument, "build_fk needs dim >= k");
  std::vector<int8_t> table(1ull << k);
  for (std::uint64_t z = 0; z < table.size(); ++z) {
    int prefix = 1;
    for (int i = 0; i < k - 2; ++i)
      if (!((z >> i) & 1ull)) prefix = -prefix;
    const int a = ((z >> (k - 2)) & 1ull) ? 1 : -1;
    const int b = ((z >> (k - 1)) & 1ull) ? 1 : -1;
    table[z] = static_cast<int8_t>(prefix * ((a == -1 && b == -1) ? -1 : 1));
  }
  std::vector<int> support(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) support[static_cast<std::size_t>(i)] = i + 1;
  return make_junta(dim, std::move(support), std::move(table));
}

}  // namespace pdslab
