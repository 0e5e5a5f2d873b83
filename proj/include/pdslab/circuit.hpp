#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pdslab/errors.hpp"
#include "pdslab/hypercube.hpp"
#include "pdslab/rng.hpp"

namespace pdslab {

enum class GateKind : std::uint8_t { INPUT = 0, NOT = 1, AND = 2, OR = 3 };

/// One circuit node. For INPUT, a is the input coordinate (1-based); otherwise
/// a (and b for AND/OR) are 1-based predecessor node ids, always earlier in
/// the list. Unused fields are 0.
struct CircuitNode {
  GateKind kind = GateKind::INPUT;
  std::uint32_t a = 0;
  std::uint32_t b = 0;
};

/// Fan-in-2 Boolean circuit as a topologically ordered node list.
/// Node ids are 1-based positions in the list.
struct BooleanCircuit {
  std::vector<CircuitNode> nodes;
  std::uint32_t output = 0;
};

/// Validates structure: arity, topological predecessor order, output id,
/// INPUT coordinates >= 1. Throws a structural error otherwise.
inline void validate_circuit(const BooleanCircuit& c) {
  const std::size_t m = c.nodes.size();
  require(m >= 1, ErrorCode::structural, "circuit needs at least one node");
  for (std::size_t i = 0; i < m; ++i) {
    const CircuitNode& n = c.nodes[i];
    const std::uint32_t id = static_cast<std::uint32_t>(i + 1);
    switch (n.kind) {
      case GateKind::INPUT:
        require(n.a >= 1, ErrorCode::structural, "INPUT coordinate must be >= 1");
        require(n.b == 0, ErrorCode::structural, "INPUT has no second field");
        break;
      case GateKind::NOT:
        require(n.a >= 1 && n.a < id, ErrorCode::structural, "NOT predecessor must be an earlier node");
        require(n.b == 0, ErrorCode::structural, "NOT has exactly one predecessor");
        break;
      case GateKind::AND:
      case GateKind::OR:
        require(n.a >= 1 && n.a < id, ErrorCode::structural, "gate predecessor must be an earlier node");
        require(n.b >= 1 && n.b < id, ErrorCode::structural, "gate predecessor must be an earlier node");
        break;
    }
  }
  require(c.output >= 1 && c.output <= m, ErrorCode::structural, "output id out of range");
}

[[nodiscard]] inline BooleanCircuit make_circuit(std::vector<CircuitNode> nodes, std::uint32_t output) {
  BooleanCircuit c{std::move(nodes), output};
  validate_circuit(c);
  return c;
}

/// Largest input coordinate referenced by the circuit.
[[nodiscard]] inline int max_input_coordinate(const BooleanCircuit& c) {
  std::uint32_t m = 0;
  for (const CircuitNode& n : c.nodes)
    if (n.kind == GateKind::INPUT && n.a > m) m = n.a;
  return static_cast<int>(m);
}

/// Single forward pass in list order over the {0,1} view; returns the output
/// node's bit.
[[nodiscard]] inline int eval_circuit(const BooleanCircuit& c, const HypercubeInput& x) {
  require(max_input_coordinate(c) <= x.dim(), ErrorCode::argument, "circuit reads coordinates beyond x.dim");
  std::vector<std::uint8_t> value(c.nodes.size());
  for (std::size_t i = 0; i < c.nodes.size(); ++i) {
    const CircuitNode& n = c.nodes[i];
    switch (n.kind) {
      case GateKind::INPUT: value[i] = static_cast<std::uint8_t>(x.bit01(static_cast<int>(n.a))); break;
      case GateKind::NOT: value[i] = value[n.a - 1] ? 0 : 1; break;
      case GateKind::AND: value[i] = value[n.a - 1] & value[n.b - 1]; break;
      case GateKind::OR: value[i] = value[n.a - 1] | value[n.b - 1]; break;
    }
  }
  return value[c.output - 1];
}

/// Random circuit with d input nodes (coordinates 1..d) followed by `gates`
/// random NOT/AND/OR nodes; the last node is the output.
[[nodiscard]] inline BooleanCircuit random_circuit(int d, int gates, Rng& rng) {
  require(d >= 1 && gates >= 1, ErrorCode::argument, "random_circuit needs d >= 1 and gates >= 1");
  BooleanCircuit c;
  for (int i = 1; i <= d; ++i) c.nodes.push_back({GateKind::INPUT, static_cast<std::uint32_t>(i), 0});
  for (int g = 0; g < gates; ++g) {
    const std::uint32_t id = static_cast<std::uint32_t>(c.nodes.size() + 1);
    const std::uint64_t kind = rng.below(3);
    CircuitNode n;
    n.a = static_cast<std::uint32_t>(rng.below(id - 1)) + 1;
    if (kind == 0) {
      n.kind = GateKind::NOT;
    } else {
      n.kind = kind == 1 ? GateKind::AND : GateKind::OR;
      n.b = static_cast<std::uint32_t>(rng.below(id - 1)) + 1;
    }
    c.nodes.push_back(n);
  }
  c.output = static_cast<std::uint32_t>(c.nodes.size());
  validate_circuit(c);
  return c;
}

/// Textual netlist: one node per line, `INPUT <i>` | `<id> = NOT <a>` |
/// `<id> = AND <a> <b>` | `<id> = OR <a> <b>`, final line `OUTPUT <id>`;
/// ids are 1-based line numbers.
[[nodiscard]] inline std::string emit_netlist(const BooleanCircuit& c) {
  validate_circuit(c);
  std::ostringstream out;
  for (std::size_t i = 0; i < c.nodes.size(); ++i) {
    const CircuitNode& n = c.nodes[i];
    const std::size_t id = i + 1;
    switch (n.kind) {
      case GateKind::INPUT: out << "INPUT " << n.a << "\n"; break;
      case GateKind::NOT: out << id << " = NOT " << n.a << "\n"; break;
      case GateKind::AND: out << id << " = AND " << n.a << " " << n.b << "\n"; break;
      case GateKind::OR: out << id << " = OR " << n.a << " " << n.b << "\n"; break;
    }
  }
  out << "OUTPUT " << c.output << "\n";
  return out.str();
}

[[nodiscard]] inline BooleanCircuit parse_netlist(std::string_view text) {
  BooleanCircuit c;
  bool saw_output = false;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    require(!saw_output, ErrorCode::structural, "netlist has content after OUTPUT");
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok == "INPUT") {
      std::uint32_t coord = 0;
      require(static_cast<bool>(ls >> coord), ErrorCode::structural, "bad INPUT line");
      c.nodes.push_back({GateKind::INPUT, coord, 0});
      continue;
    }
    if (tok == "OUTPUT") {
      require(static_cast<bool>(ls >> c.output), ErrorCode::structural, "bad OUTPUT line");
      saw_output = true;
      --line_no;  // OUTPUT is not a node
      continue;
    }
    std::uint64_t id = 0;
    try {
      id = std::stoull(tok);
    } catch (const std::exception&) {
      fail(ErrorCode::structural, "unrecognized netlist line: " + line);
    }
    require(id == line_no, ErrorCode::structural, "node id must equal its 1-based line number");
    std::string eq, op;
    require(static_cast<bool>(ls >> eq >> op) && eq == "=", ErrorCode::structural, "expected `<id> = <op> ...`");
    CircuitNode n;
    if (op == "NOT") {
      n.kind = GateKind::NOT;
      require(static_cast<bool>(ls >> n.a), ErrorCode::structural, "bad NOT line");
    } else if (op == "AND" || op == "OR") {
      n.kind = op == "AND" ? GateKind::AND : GateKind::OR;
      require(static_cast<bool>(ls >> n.a >> n.b), ErrorCode::structural, "bad gate line");
    } else {
      fail(ErrorCode::structural, "unknown gate kind: " + op);
    }
    c.nodes.push_back(n);
  }
  require(saw_output, ErrorCode::structural, "netlist missing OUTPUT line");
  validate_circuit(c);
  return c;
}

}  // namespace pdslab
