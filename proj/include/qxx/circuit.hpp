#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qxx {

using Qubit = std::size_t;

enum class GateKind { cnot, swap };

/// A two-qubit gate. For CNOTs the first element is the control.
struct Gate {
  Qubit control = 0;
  Qubit target = 0;
  GateKind kind = GateKind::cnot;

  friend bool operator==(const Gate&, const Gate&) = default;
};

/**
 * Ordered list of two-qubit gates over a fixed number of qubits.
 *
 * Gate order is program order. Construction validates every gate, so a
 * Circuit value always satisfies control != target and both indices
 * below num_qubits().
 */
class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(std::size_t num_qubits) : num_qubits_(num_qubits) {}
  Circuit(std::size_t num_qubits, std::vector<Gate> gates);

  void add_gate(Gate gate);
  void add_cnot(Qubit control, Qubit target) {
    add_gate({control, target, GateKind::cnot});
  }
  void add_swap(Qubit a, Qubit b) { add_gate({a, b, GateKind::swap}); }

  std::size_t num_qubits() const { return num_qubits_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }
  bool empty() const { return gates_.empty(); }
  std::size_t count(GateKind kind) const;

  auto begin() const { return gates_.begin(); }
  auto end() const { return gates_.end(); }

  friend bool operator==(const Circuit&, const Circuit&) = default;

 private:
  void check_gate(const Gate& gate) const;

  std::size_t num_qubits_ = 0;
  std::vector<Gate> gates_;
};

/// ASAP depth. Each gate starts when both of its qubits are free and
/// occupies them for 1 layer (CNOT) or `swap_weight` layers (SWAP).
std::size_t depth(const Circuit& circuit, std::size_t swap_weight = 3);

/// Simple undirected graph with sorted, deduplicated edges (a < b).
struct UndirectedGraph {
  std::size_t num_vertices = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  std::vector<std::vector<std::size_t>> adjacency() const;
  std::vector<std::size_t> degrees() const;
};

/// Qubit interaction graph: an edge {a, b} for every pair some gate acts on.
UndirectedGraph interaction_graph(const Circuit& circuit);

/// Returns a copy of `circuit` with qubit q renamed to relabel[q].
Circuit relabel(const Circuit& circuit, const std::vector<Qubit>& relabel);

// ---------------------------------------------------------------------------
// JSON serialization: {"qubits": Q, "gates": [[c, t], [a, b, "swap"], ...]}

enum class ParseErrorKind {
  malformed_json,
  bad_schema,
  index_out_of_range,
  degenerate_gate,
  unsupported_gate,
};

class CircuitParseError : public std::runtime_error {
 public:
  CircuitParseError(ParseErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ParseErrorKind kind() const { return kind_; }

 private:
  ParseErrorKind kind_;
};

Circuit parse_circuit(std::string_view text);
std::string emit_circuit(const Circuit& circuit);

Circuit load_circuit(const std::string& path);
void save_circuit(const Circuit& circuit, const std::string& path);

}  // namespace qxx
