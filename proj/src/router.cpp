#include "qxx/router.hpp"

#include <random>

#include <json.hpp>

namespace qxx {

namespace {
constexpr std::size_t kEmpty = static_cast<std::size_t>(-1);
}

RoutedCircuit route(const Circuit& circuit, const Device& device,
                    const PartialMapping& initial_mapping, std::uint64_t seed) {
  if (!initial_mapping.is_complete()) {
    throw std::invalid_argument("route: initial mapping is not complete");
  }
  if (initial_mapping.num_qubits() != circuit.num_qubits() ||
      initial_mapping.num_registers() != device.num_registers()) {
    throw std::invalid_argument("route: mapping does not fit circuit/device");
  }
  const std::size_t n = device.num_registers();
  std::vector<Register> reg_of = initial_mapping.assignment();
  std::vector<Qubit> qubit_at(n, kEmpty);
  for (Qubit q = 0; q < reg_of.size(); ++q) qubit_at[reg_of[q]] = q;

  std::mt19937_64 rng(seed);
  RoutedCircuit out{Circuit(n), reg_of, seed};
  struct Move {
    Register from;
    Register to;
  };
  std::vector<Move> best;

  auto apply_swap = [&](Register a, Register b) {
    const Qubit qa = qubit_at[a];
    const Qubit qb = qubit_at[b];
    qubit_at[a] = qb;
    qubit_at[b] = qa;
    if (qa != kEmpty) reg_of[qa] = b;
    if (qb != kEmpty) reg_of[qb] = a;
    out.circuit.add_swap(a, b);
  };

  for (const Gate& g : circuit) {
    while (device.hop(reg_of[g.control], reg_of[g.target]) > 1) {
      const Register ra = reg_of[g.control];
      const Register rb = reg_of[g.target];
      const std::size_t current = device.hop(ra, rb);
      std::size_t best_hop = current;
      best.clear();
      auto consider = [&](Register moving, Register other) {
        for (Register next : device.neighbors(moving)) {
          const std::size_t h = device.hop(next, other);
          if (h < best_hop) {
            best_hop = h;
            best.clear();
          }
          if (h == best_hop && h < current) best.push_back({moving, next});
        }
      };
      consider(ra, rb);
      consider(rb, ra);
      std::uniform_int_distribution<std::size_t> pick(0, best.size() - 1);
      const Move m = best[pick(rng)];
      apply_swap(m.from, m.to);
    }
    out.circuit.add_cnot(reg_of[g.control], reg_of[g.target]);
  }
  return out;
}

VerifyReport verify(const RoutedCircuit& routed, const Circuit& original,
                    const Device& device) {
  auto fail = [](std::size_t index, std::string message) {
    return VerifyReport{false, index, std::move(message)};
  };
  const std::size_t n = device.num_registers();
  if (routed.circuit.num_qubits() != n) {
    return fail(0, "routed circuit is not over the device registers");
  }
  if (routed.initial_mapping.size() != original.num_qubits()) {
    return fail(0, "initial mapping does not cover the original qubits");
  }
  std::vector<Qubit> qubit_at(n, kEmpty);
  for (Qubit q = 0; q < routed.initial_mapping.size(); ++q) {
    const Register r = routed.initial_mapping[q];
    if (r >= n || qubit_at[r] != kEmpty) {
      return fail(0, "initial mapping is not injective");
    }
    qubit_at[r] = q;
  }

  std::size_t next_logical = 0;
  const auto& gates = routed.circuit.gates();
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const Gate& g = gates[i];
    if (!device.adjacent(g.control, g.target)) {
      return fail(i, "gate " + std::to_string(i) + " on registers (" +
                         std::to_string(g.control) + "," +
                         std::to_string(g.target) + ") is not a device edge");
    }
    if (g.kind == GateKind::swap) {
      std::swap(qubit_at[g.control], qubit_at[g.target]);
      continue;
    }
    if (next_logical >= original.size()) {
      return fail(i, "gate " + std::to_string(i) + " has no counterpart in the input");
    }
    const Gate& want = original.gates()[next_logical];
    if (qubit_at[g.control] != want.control || qubit_at[g.target] != want.target) {
      return fail(i, "gate " + std::to_string(i) + " does not implement input gate " +
                         std::to_string(next_logical));
    }
    ++next_logical;
  }
  if (next_logical != original.size()) {
    return fail(gates.size(), "input gate " + std::to_string(next_logical) +
                                  " was never emitted");
  }
  return {};
}

double ratio(const Circuit& c_in, const Circuit& c_out, std::size_t swap_weight) {
  const std::size_t in = depth(c_in, swap_weight);
  if (in == 0) throw std::domain_error("ratio: input circuit has zero depth");
  return static_cast<double>(depth(c_out, swap_weight)) / static_cast<double>(in);
}

std::string emit_routed(const RoutedCircuit& routed) {
  auto doc = nlohmann::ordered_json::parse(emit_circuit(routed.circuit));
  doc["initial_mapping"] = routed.initial_mapping;
  doc["seed"] = routed.seed;
  return doc.dump();
}

}  // namespace qxx
