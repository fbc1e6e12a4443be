#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qxx {

using Register = std::size_t;

class DeviceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * Register connectivity graph of a quantum device.
 *
 * All edges carry the same weight; distances are stored as hop counts and
 * scaled by an edge cost at query time. The graph must be connected.
 */
class Device {
 public:
  Device(std::size_t num_registers,
         std::vector<std::pair<Register, Register>> edges,
         std::string name = {});

  std::size_t num_registers() const { return num_registers_; }
  const std::string& name() const { return name_; }
  /// Sorted, deduplicated edge list with a < b.
  const std::vector<std::pair<Register, Register>>& edges() const {
    return edges_;
  }
  const std::vector<Register>& neighbors(Register r) const {
    return adjacency_.at(r);
  }

  std::size_t hop(Register a, Register b) const {
    return hops_[index(a, b)];
  }
  bool adjacent(Register a, Register b) const { return hop(a, b) == 1; }
  std::size_t diameter() const;

 private:
  std::size_t index(Register a, Register b) const {
    if (a >= num_registers_ || b >= num_registers_) {
      throw std::out_of_range("register index out of range");
    }
    return a * num_registers_ + b;
  }

  std::size_t num_registers_;
  std::string name_;
  std::vector<std::pair<Register, Register>> edges_;
  std::vector<std::vector<Register>> adjacency_;
  std::vector<std::size_t> hops_;  // row-major N x N
};

/// Movement cost between two registers under a uniform edge weight.
/// Zero on the same register or an edge; hop count x edge_cost otherwise.
double dist(const Device& device, Register a, Register b, double edge_cost);

Device linear_chain(std::size_t n);
Device grid(std::size_t rows, std::size_t cols);
/// 16 registers as two 8-rings joined by two bridge edges (Aspen-like).
Device two_octagons();

/// Resolves "chain:N", "grid:RxC", "grid4x4", "aspen16"; nullopt otherwise.
std::optional<Device> builtin_device(std::string_view name);

Device parse_device(std::string_view text);
std::string emit_device(const Device& device);
/// Loads a built-in by name or a JSON file by path.
Device load_device(const std::string& name_or_path);

}  // namespace qxx
