#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qxx/circuit.hpp"
#include "qxx/device.hpp"

namespace qxx {

/// A circuit whose optimal layout is known by construction.
struct KnownOptimalCircuit {
  Circuit circuit;
  std::vector<Register> optimal_mapping;  ///< every gate lands on an edge
  std::size_t optimal_depth = 0;
};

inline constexpr double kDefaultGateDensity = 0.5;

/**
 * Builds `target_depth` layers, each a random matching over device edges
 * with about gate_density * floor(N/2) gates. One designated register takes
 * part in every layer, which pins the depth to exactly target_depth. Qubit
 * labels are then scrambled by a random permutation, which becomes the
 * returned optimal mapping.
 */
KnownOptimalCircuit generate_known_optimal(const Device& device,
                                           std::size_t target_depth,
                                           double gate_density,
                                           std::uint64_t seed);

/// A named benchmark circuit, optionally with its known optimum.
struct BenchCircuit {
  std::string name;
  Circuit circuit;
  std::optional<std::size_t> optimal_depth;
  std::optional<std::vector<Register>> optimal_mapping;
};

struct SuiteSpec {
  std::vector<std::size_t> depths = {5, 10, 15, 20, 25, 30, 35, 40, 45};
  std::size_t per_depth = 10;
  double gate_density = kDefaultGateDensity;
  std::uint64_t seed = 0;
};

/// Depth-major suite: per_depth circuits for each depth in spec.depths.
std::vector<BenchCircuit> generate_suite(const Device& device, const SuiteSpec& spec);

/// Parses "5..45:5" (range with step), "5,10,20", or a single number.
std::vector<std::size_t> parse_depth_list(const std::string& text);

/// Writes <name>.json (circuit) and <name>.opt.json (sidecar) per circuit.
void write_suite(const std::vector<BenchCircuit>& suite, const std::string& dir);
/// Reads every circuit file in `dir` (sorted by name) with its sidecar, if any.
std::vector<BenchCircuit> read_suite(const std::string& dir);

}  // namespace qxx
