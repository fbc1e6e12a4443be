#pragma once

#include <chrono>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "qxx/circuit.hpp"
#include "qxx/device.hpp"
#include "qxx/params.hpp"

namespace qxx {

/**
 * Injective assignment of circuit qubits to device registers, built up one
 * qubit at a time, plus a per-qubit movement offset.
 */
class PartialMapping {
 public:
  static constexpr Register kUnmapped = std::numeric_limits<Register>::max();

  PartialMapping(std::size_t num_qubits, std::size_t num_registers);
  /// A complete mapping with M[q] = assignment[q].
  static PartialMapping complete(std::vector<Register> assignment,
                                 std::size_t num_registers);

  void assign(Qubit q, Register r);

  Register operator[](Qubit q) const { return assignment_.at(q); }
  bool is_mapped(Qubit q) const { return assignment_.at(q) != kUnmapped; }
  bool in_use(Register r) const { return used_.at(r); }

  std::size_t num_qubits() const { return assignment_.size(); }
  std::size_t num_registers() const { return used_.size(); }
  std::size_t mapped_count() const { return mapped_; }
  bool is_complete() const { return mapped_ == assignment_.size(); }

  const std::vector<Register>& assignment() const { return assignment_; }
  std::span<const double> offsets() const { return offsets_; }
  std::span<double> offsets() { return offsets_; }

  friend bool operator==(const PartialMapping&, const PartialMapping&) = default;

 private:
  std::vector<Register> assignment_;
  std::vector<bool> used_;
  std::vector<double> offsets_;
  std::size_t mapped_ = 0;
};

/// Adds a gate's movement to the offsets of its two qubits: the lower-index
/// qubit moves effective_dist / mf, the higher-index one the remainder.
void update_offsets(std::span<double> offsets, const Gate& gate,
                    double effective_dist, int movement_factor);

struct GDepthTrace {
  double cost = 0.0;
  std::size_t mapped_gates = 0;  ///< N_c
  std::vector<double> offsets;   ///< accumulators after the last mapped gate
};

/// Evaluates the Gaussian-weighted depth estimate, tolerating N_c = 0
/// (cost 0). Offsets start from the mapping's stored offsets.
GDepthTrace trace_gdepth(const Circuit& circuit, const PartialMapping& mapping,
                         const Device& device, const QxxParams& params);

/**
 * Gaussian-weighted estimate of the laid-out depth.
 *
 * The i-th mapped gate (1-based, program order) contributes
 * max(0, dist - offset_a - offset_b) * exp(-b * (i / N_c - c)^2).
 * Throws std::domain_error when no gate has both qubits mapped.
 */
double gdepth(const Circuit& circuit, const PartialMapping& mapping,
              const Device& device, const QxxParams& params);

/// Cooperative wall-clock budget.
class Deadline {
 public:
  using clock = std::chrono::steady_clock;

  static Deadline never() { return Deadline{}; }
  template <class Rep, class Period>
  static Deadline after(std::chrono::duration<Rep, Period> budget) {
    Deadline d;
    d.at_ = clock::now() + std::chrono::duration_cast<clock::duration>(budget);
    return d;
  }

  bool expired() const { return at_ && clock::now() >= *at_; }

 private:
  std::optional<clock::time_point> at_;
};

/// Which children of an expanded node survive.
enum class ChildRetention {
  /// The max_children cheapest candidates (ties by register index).
  lowest_cost,
  /// Only candidates tied at the minimum cost, at most max_children.
  minimum_ties,
};

struct PlaceOptions {
  ChildRetention retention = ChildRetention::lowest_cost;
  /// Frontier size at which the search gives up as if it had timed out.
  std::size_t max_frontier = 20'000'000;
  /// Node expansions allowed before giving up (0: unlimited). Unlike the
  /// wall-clock deadline this budget gives reproducible timeouts.
  std::size_t max_expansions = 0;
};

struct Placement {
  PartialMapping mapping;           ///< complete, zero offsets
  double cost = 0.0;                ///< gdepth of `mapping`
  std::vector<double> offsets;      ///< estimated movement after all gates
  std::size_t expanded_nodes = 0;
};

/// Qubits in order of first appearance in the gate list, then unused ones.
std::vector<Qubit> placement_order(const Circuit& circuit);

/**
 * Tree search for an initial placement minimising gdepth.
 *
 * One qubit is placed per level. Each expanded node tries every free
 * register, keeps up to max_children children, and at levels divisible by
 * max_depth the tree collapses onto the path of its cheapest leaf.
 * Returns std::nullopt if the deadline passes first.
 */
std::optional<Placement> place(const Circuit& circuit, const Device& device,
                               const QxxParams& params,
                               const Deadline& deadline = Deadline::never(),
                               const PlaceOptions& options = {});

}  // namespace qxx
