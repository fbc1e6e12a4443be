#include "qxx/circuit.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qxx {

using json = nlohmann::ordered_json;

Circuit::Circuit(std::size_t num_qubits, std::vector<Gate> gates)
    : num_qubits_(num_qubits) {
  gates_.reserve(gates.size());
  for (const Gate& g : gates) add_gate(g);
}

void Circuit::check_gate(const Gate& gate) const {
  if (gate.control == gate.target) {
    throw std::invalid_argument("gate acts twice on qubit " +
                                std::to_string(gate.control));
  }
  if (gate.control >= num_qubits_ || gate.target >= num_qubits_) {
    throw std::out_of_range("gate (" + std::to_string(gate.control) + "," +
                            std::to_string(gate.target) +
                            ") outside a circuit of " +
                            std::to_string(num_qubits_) + " qubits");
  }
}

void Circuit::add_gate(Gate gate) {
  check_gate(gate);
  gates_.push_back(gate);
}

std::size_t Circuit::count(GateKind kind) const {
  return static_cast<std::size_t>(std::count_if(
      gates_.begin(), gates_.end(),
      [kind](const Gate& g) { return g.kind == kind; }));
}

std::size_t depth(const Circuit& circuit, std::size_t swap_weight) {
  if (swap_weight == 0) throw std::invalid_argument("swap_weight must be >= 1");
  std::vector<std::size_t> ready(circuit.num_qubits(), 0);
  std::size_t result = 0;
  for (const Gate& g : circuit) {
    const std::size_t cost = g.kind == GateKind::swap ? swap_weight : 1;
    const std::size_t finish = std::max(ready[g.control], ready[g.target]) + cost;
    ready[g.control] = ready[g.target] = finish;
    result = std::max(result, finish);
  }
  return result;
}

std::vector<std::vector<std::size_t>> UndirectedGraph::adjacency() const {
  std::vector<std::vector<std::size_t>> adj(num_vertices);
  for (const auto& [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& row : adj) std::sort(row.begin(), row.end());
  return adj;
}

std::vector<std::size_t> UndirectedGraph::degrees() const {
  std::vector<std::size_t> deg(num_vertices, 0);
  for (const auto& [a, b] : edges) {
    ++deg[a];
    ++deg[b];
  }
  return deg;
}

UndirectedGraph interaction_graph(const Circuit& circuit) {
  UndirectedGraph g;
  g.num_vertices = circuit.num_qubits();
  for (const Gate& gate : circuit) {
    g.edges.emplace_back(std::min(gate.control, gate.target),
                         std::max(gate.control, gate.target));
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  return g;
}

Circuit relabel(const Circuit& circuit, const std::vector<Qubit>& relabel) {
  if (relabel.size() != circuit.num_qubits()) {
    throw std::invalid_argument("relabel size differs from qubit count");
  }
  Circuit out(circuit.num_qubits());
  for (const Gate& g : circuit) {
    out.add_gate({relabel[g.control], relabel[g.target], g.kind});
  }
  return out;
}

namespace {

std::size_t parse_index(const json& v, std::size_t num_qubits) {
  if (!v.is_number_integer()) {
    throw CircuitParseError(ParseErrorKind::bad_schema,
                            "gate operand must be an integer");
  }
  const auto raw = v.get<long long>();
  if (raw < 0 || static_cast<unsigned long long>(raw) >= num_qubits) {
    throw CircuitParseError(ParseErrorKind::index_out_of_range,
                            "qubit index " + std::to_string(raw) +
                                " out of range for " +
                                std::to_string(num_qubits) + " qubits");
  }
  return static_cast<std::size_t>(raw);
}

}  // namespace

Circuit parse_circuit(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw CircuitParseError(ParseErrorKind::malformed_json, e.what());
  }
  if (!doc.is_object() || !doc.contains("qubits") || !doc.contains("gates")) {
    throw CircuitParseError(ParseErrorKind::bad_schema,
                            "expected an object with 'qubits' and 'gates'");
  }
  const json& qubits = doc["qubits"];
  if (!qubits.is_number_integer() || qubits.get<long long>() < 0) {
    throw CircuitParseError(ParseErrorKind::bad_schema,
                            "'qubits' must be a nonnegative integer");
  }
  if (!doc["gates"].is_array()) {
    throw CircuitParseError(ParseErrorKind::bad_schema, "'gates' must be an array");
  }
  const auto num_qubits = qubits.get<std::size_t>();
  Circuit circuit(num_qubits);
  std::size_t index = 0;
  for (const json& entry : doc["gates"]) {
    if (!entry.is_array()) {
      throw CircuitParseError(ParseErrorKind::bad_schema,
                              "gate " + std::to_string(index) + " is not an array");
    }
    if (entry.size() < 2) {
      throw CircuitParseError(ParseErrorKind::unsupported_gate,
                              "gate " + std::to_string(index) +
                                  " is not a two-qubit gate");
    }
    if (entry.size() > 3) {
      throw CircuitParseError(ParseErrorKind::bad_schema,
                              "gate " + std::to_string(index) + " has extra fields");
    }
    Gate g;
    g.control = parse_index(entry[0], num_qubits);
    g.target = parse_index(entry[1], num_qubits);
    if (entry.size() == 3) {
      if (!entry[2].is_string()) {
        throw CircuitParseError(ParseErrorKind::bad_schema,
                                "gate kind must be a string");
      }
      const auto kind = entry[2].get<std::string>();
      if (kind == "swap") {
        g.kind = GateKind::swap;
      } else if (kind != "cx" && kind != "cnot") {
        throw CircuitParseError(ParseErrorKind::unsupported_gate,
                                "unknown gate kind '" + kind + "'");
      }
    }
    if (g.control == g.target) {
      throw CircuitParseError(ParseErrorKind::degenerate_gate,
                              "gate " + std::to_string(index) +
                                  " acts twice on qubit " +
                                  std::to_string(g.control));
    }
    circuit.add_gate(g);
    ++index;
  }
  return circuit;
}

std::string emit_circuit(const Circuit& circuit) {
  json gates = json::array();
  for (const Gate& g : circuit) {
    json entry = json::array({g.control, g.target});
    if (g.kind == GateKind::swap) entry.push_back("swap");
    gates.push_back(std::move(entry));
  }
  json doc;
  doc["qubits"] = circuit.num_qubits();
  doc["gates"] = std::move(gates);
  return doc.dump();
}

Circuit load_circuit(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open circuit file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_circuit(buffer.str());
}

void save_circuit(const Circuit& circuit, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write circuit file " + path);
  out << emit_circuit(circuit) << '\n';
}

}  // namespace qxx
