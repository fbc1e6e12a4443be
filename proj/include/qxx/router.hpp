#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qxx/circuit.hpp"
#include "qxx/device.hpp"
#include "qxx/placer.hpp"

namespace qxx {

/// A circuit over device registers (CNOTs and SWAPs) together with the
/// initial placement it was routed from.
struct RoutedCircuit {
  Circuit circuit;
  std::vector<Register> initial_mapping;  ///< M[q] = register
  std::uint64_t seed = 0;

  std::size_t swap_count() const { return circuit.count(GateKind::swap); }
};

/**
 * Greedy stochastic SWAP insertion.
 *
 * Gates are processed in program order. While the two registers of the
 * current gate are not adjacent, a SWAP on an edge touching either register
 * that shortens their distance the most is inserted (uniformly at random
 * among equally good edges). Deterministic for a fixed seed.
 */
RoutedCircuit route(const Circuit& circuit, const Device& device,
                    const PartialMapping& initial_mapping, std::uint64_t seed);

struct VerifyReport {
  bool ok = true;
  std::optional<std::size_t> gate_index;  ///< first offending emitted gate
  std::string message;

  explicit operator bool() const { return ok; }
};

/// Checks that every gate sits on a device edge and that replaying the
/// SWAPs reproduces `original` gate for gate.
VerifyReport verify(const RoutedCircuit& routed, const Circuit& original,
                    const Device& device);

/// depth(c_out) / depth(c_in). Throws std::domain_error if c_in has depth 0.
double ratio(const Circuit& c_in, const Circuit& c_out, std::size_t swap_weight = 3);

/// Circuit JSON plus "initial_mapping" and "seed" keys.
std::string emit_routed(const RoutedCircuit& routed);

}  // namespace qxx
