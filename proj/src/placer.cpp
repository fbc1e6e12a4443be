#include "qxx/placer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace qxx {

PartialMapping::PartialMapping(std::size_t num_qubits, std::size_t num_registers)
    : assignment_(num_qubits, kUnmapped),
      used_(num_registers, false),
      offsets_(num_qubits, 0.0) {
  if (num_qubits > num_registers) {
    throw std::invalid_argument("more qubits (" + std::to_string(num_qubits) +
                                ") than registers (" +
                                std::to_string(num_registers) + ")");
  }
}

PartialMapping PartialMapping::complete(std::vector<Register> assignment,
                                        std::size_t num_registers) {
  PartialMapping m(assignment.size(), num_registers);
  for (Qubit q = 0; q < assignment.size(); ++q) m.assign(q, assignment[q]);
  return m;
}

void PartialMapping::assign(Qubit q, Register r) {
  if (q >= assignment_.size()) throw std::out_of_range("qubit out of range");
  if (r >= used_.size()) throw std::out_of_range("register out of range");
  if (assignment_[q] != kUnmapped) {
    throw std::logic_error("qubit " + std::to_string(q) + " already mapped");
  }
  if (used_[r]) {
    throw std::logic_error("register " + std::to_string(r) + " already in use");
  }
  assignment_[q] = r;
  used_[r] = true;
  ++mapped_;
}

void update_offsets(std::span<double> offsets, const Gate& gate,
                    double effective_dist, int movement_factor) {
  if (movement_factor < 1) throw std::invalid_argument("movement_factor must be >= 1");
  const Qubit low = std::min(gate.control, gate.target);
  const Qubit high = std::max(gate.control, gate.target);
  const double mf = movement_factor;
  offsets[low] += effective_dist / mf;
  offsets[high] += effective_dist * (mf - 1.0) / mf;
}

namespace {

double gaussian_weight(std::size_t i, std::size_t n_c, double b, double c) {
  const double x = static_cast<double>(i) / static_cast<double>(n_c) - c;
  return std::exp(-b * x * x);
}

std::vector<double> gaussian_weights(std::size_t n_c, const QxxParams& params) {
  std::vector<double> w(n_c);
  for (std::size_t i = 1; i <= n_c; ++i) {
    w[i - 1] = gaussian_weight(i, n_c, params.b, params.c);
  }
  return w;
}

// Shared by trace_gdepth and the search so both produce identical bits.
double accumulate_cost(std::span<const Gate> gates, std::span<const double> weights,
                       std::span<const Register> reg_of,
                       std::span<const double> dist_matrix, std::size_t n,
                       std::span<double> offsets, int movement_factor) {
  double cost = 0.0;
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const Gate& g = gates[i];
    const double d = dist_matrix[reg_of[g.control] * n + reg_of[g.target]];
    const double effective = std::max(0.0, d - offsets[g.control] - offsets[g.target]);
    cost += effective * weights[i];
    update_offsets(offsets, g, effective, movement_factor);
  }
  return cost;
}

std::vector<double> distance_matrix(const Device& device, double edge_cost) {
  const std::size_t n = device.num_registers();
  std::vector<double> m(n * n);
  for (Register a = 0; a < n; ++a) {
    for (Register b = 0; b < n; ++b) m[a * n + b] = dist(device, a, b, edge_cost);
  }
  return m;
}

}  // namespace

GDepthTrace trace_gdepth(const Circuit& circuit, const PartialMapping& mapping,
                         const Device& device, const QxxParams& params) {
  if (mapping.num_qubits() != circuit.num_qubits()) {
    throw std::invalid_argument("mapping and circuit disagree on qubit count");
  }
  if (mapping.num_registers() != device.num_registers()) {
    throw std::invalid_argument("mapping and device disagree on register count");
  }
  std::vector<Gate> mapped;
  for (const Gate& g : circuit) {
    if (mapping.is_mapped(g.control) && mapping.is_mapped(g.target)) {
      mapped.push_back(g);
    }
  }
  GDepthTrace trace;
  trace.mapped_gates = mapped.size();
  trace.offsets.assign(mapping.offsets().begin(), mapping.offsets().end());
  if (mapped.empty()) return trace;
  const auto weights = gaussian_weights(mapped.size(), params);
  const auto dm = distance_matrix(device, params.edge_cost);
  trace.cost = accumulate_cost(mapped, weights, mapping.assignment(), dm,
                               device.num_registers(), trace.offsets,
                               params.movement_factor);
  return trace;
}

double gdepth(const Circuit& circuit, const PartialMapping& mapping,
              const Device& device, const QxxParams& params) {
  auto trace = trace_gdepth(circuit, mapping, device, params);
  if (trace.mapped_gates == 0) {
    throw std::domain_error("gdepth: no mapped gates");
  }
  return trace.cost;
}

std::vector<Qubit> placement_order(const Circuit& circuit) {
  std::vector<Qubit> order;
  std::vector<bool> seen(circuit.num_qubits(), false);
  auto visit = [&](Qubit q) {
    if (!seen[q]) {
      seen[q] = true;
      order.push_back(q);
    }
  };
  for (const Gate& g : circuit) {
    visit(g.control);
    visit(g.target);
  }
  for (Qubit q = 0; q < circuit.num_qubits(); ++q) visit(q);
  return order;
}

namespace {

struct Node {
  std::uint32_t parent;
  std::uint32_t reg;
  double cost;
};

struct Candidate {
  double cost;
  Register reg;
};

std::size_t cheapest(const std::vector<Node>& nodes) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (nodes[i].cost < nodes[best].cost) best = i;
  }
  return best;
}

}  // namespace

std::optional<Placement> place(const Circuit& circuit, const Device& device,
                               const QxxParams& params, const Deadline& deadline,
                               const PlaceOptions& options) {
  params.validate();
  const std::size_t num_qubits = circuit.num_qubits();
  const std::size_t n = device.num_registers();
  if (num_qubits > n) {
    throw std::invalid_argument("circuit needs " + std::to_string(num_qubits) +
                                " qubits but the device has " + std::to_string(n) +
                                " registers");
  }

  const auto order = placement_order(circuit);
  std::vector<std::size_t> position(num_qubits);
  for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;

  // level_gates[l]: gates fully mapped once the first l qubits of `order`
  // are placed, in program order, with their Gaussian weights.
  std::vector<std::vector<Gate>> level_gates(num_qubits + 1);
  std::vector<std::vector<double>> level_weights(num_qubits + 1);
  for (std::size_t l = 1; l <= num_qubits; ++l) {
    for (const Gate& g : circuit) {
      if (std::max(position[g.control], position[g.target]) < l) {
        level_gates[l].push_back(g);
      }
    }
    level_weights[l] = gaussian_weights(level_gates[l].size(), params);
  }
  const auto dm = distance_matrix(device, params.edge_cost);

  std::vector<Register> prefix;          // registers of order[0 .. prefix.size())
  std::vector<std::vector<Node>> tree;   // tree[k]: level prefix.size() + k + 1
  std::vector<Register> reg_of(num_qubits, PartialMapping::kUnmapped);
  std::vector<bool> used(n);
  std::vector<double> offsets(num_qubits);
  std::vector<Candidate> candidates;
  candidates.reserve(n);
  std::size_t expanded = 0;
  const auto max_children = static_cast<std::size_t>(params.max_children);

  // Loads the mapping of tree[depth][index] (or the prefix root when
  // depth < 0) into reg_of / used.
  auto load = [&](std::ptrdiff_t depth, std::size_t index) {
    std::fill(reg_of.begin(), reg_of.end(), PartialMapping::kUnmapped);
    std::fill(used.begin(), used.end(), false);
    for (std::size_t i = 0; i < prefix.size(); ++i) {
      reg_of[order[i]] = prefix[i];
      used[prefix[i]] = true;
    }
    for (std::ptrdiff_t k = depth; k >= 0; --k) {
      const Node& node = tree[static_cast<std::size_t>(k)][index];
      const Qubit q = order[prefix.size() + static_cast<std::size_t>(k)];
      reg_of[q] = node.reg;
      used[node.reg] = true;
      index = node.parent;
    }
  };

  for (std::size_t level = 0; level < num_qubits; ++level) {
    const std::ptrdiff_t parent_depth = static_cast<std::ptrdiff_t>(tree.size()) - 1;
    const std::size_t parent_count = tree.empty() ? 1 : tree.back().size();
    const Qubit qubit = order[level];
    const auto& gates = level_gates[level + 1];
    const auto& weights = level_weights[level + 1];
    std::vector<Node> next;

    for (std::size_t p = 0; p < parent_count; ++p) {
      if (deadline.expired()) return std::nullopt;
      if (options.max_expansions != 0 && expanded >= options.max_expansions) {
        return std::nullopt;
      }
      ++expanded;
      load(parent_depth, p);
      candidates.clear();
      for (Register r = 0; r < n; ++r) {
        if (used[r]) continue;
        reg_of[qubit] = r;
        std::fill(offsets.begin(), offsets.end(), 0.0);
        const double cost = accumulate_cost(gates, weights, reg_of, dm, n, offsets,
                                            params.movement_factor);
        candidates.push_back({cost, r});
      }
      std::stable_sort(candidates.begin(), candidates.end(),
                       [](const Candidate& a, const Candidate& b) {
                         return a.cost < b.cost;
                       });
      std::size_t keep = std::min(max_children, candidates.size());
      if (options.retention == ChildRetention::minimum_ties) {
        const double floor = candidates.front().cost;
        const double tol = 1e-12 * std::max(1.0, std::abs(floor));
        std::size_t ties = 0;
        while (ties < keep && candidates[ties].cost <= floor + tol) ++ties;
        keep = ties;
      }
      for (std::size_t i = 0; i < keep; ++i) {
        next.push_back({static_cast<std::uint32_t>(p),
                        static_cast<std::uint32_t>(candidates[i].reg),
                        candidates[i].cost});
      }
      if (next.size() > options.max_frontier) return std::nullopt;
    }
    tree.push_back(std::move(next));

    const std::size_t placed = level + 1;
    if (placed % static_cast<std::size_t>(params.max_depth) == 0 &&
        placed < num_qubits) {
      // Collapse onto the ancestor path of the cheapest leaf.
      load(static_cast<std::ptrdiff_t>(tree.size()) - 1, cheapest(tree.back()));
      for (std::size_t i = prefix.size(); i < placed; ++i) {
        prefix.push_back(reg_of[order[i]]);
      }
      tree.clear();
    }
  }

  std::vector<Register> assignment(num_qubits, PartialMapping::kUnmapped);
  if (!tree.empty()) {
    load(static_cast<std::ptrdiff_t>(tree.size()) - 1, cheapest(tree.back()));
    assignment = reg_of;
  } else {
    for (std::size_t i = 0; i < prefix.size(); ++i) assignment[order[i]] = prefix[i];
  }

  Placement result{PartialMapping::complete(std::move(assignment), n), 0.0, {},
                   expanded};
  auto trace = trace_gdepth(circuit, result.mapping, device, params);
  result.cost = trace.cost;
  result.offsets = std::move(trace.offsets);
  return result;
}

}  // namespace qxx
