#pragma once

// Straightforward reference implementations used as test oracles. They are
// written independently of the library code paths they check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "qxx/circuit.hpp"
#include "qxx/device.hpp"
#include "qxx/params.hpp"

namespace oracle {

using Edges = std::vector<std::pair<std::size_t, std::size_t>>;

// Longest path through the gate dependency DAG (gate j depends on the latest
// earlier gate sharing a qubit), each node weighted by its layer cost.
inline std::size_t dag_depth(const qxx::Circuit& c, std::size_t swap_weight) {
  const auto& g = c.gates();
  std::vector<std::size_t> finish(g.size(), 0);
  std::size_t best = 0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    std::size_t start = 0;
    for (std::size_t i = 0; i < j; ++i) {
      const bool shares = g[i].control == g[j].control || g[i].control == g[j].target ||
                          g[i].target == g[j].control || g[i].target == g[j].target;
      if (shares) start = std::max(start, finish[i]);
    }
    finish[j] = start + (g[j].kind == qxx::GateKind::swap ? swap_weight : 1);
    best = std::max(best, finish[j]);
  }
  return best;
}

// Single-source BFS per call; returns SIZE_MAX when unreachable.
inline std::size_t bfs_hop(std::size_t n, const Edges& edges, std::size_t a, std::size_t b) {
  std::vector<std::size_t> d(n, std::numeric_limits<std::size_t>::max());
  std::deque<std::size_t> q{a};
  d[a] = 0;
  while (!q.empty()) {
    const auto u = q.front();
    q.pop_front();
    for (const auto& [x, y] : edges) {
      for (auto [from, to] : {std::pair{x, y}, std::pair{y, x}}) {
        if (from == u && d[to] == std::numeric_limits<std::size_t>::max()) {
          d[to] = d[u] + 1;
          q.push_back(to);
        }
      }
    }
  }
  return d[b];
}

// The cost estimate written out gate by gate. `mapping[q]` is a register or
// SIZE_MAX for an unmapped qubit. Offsets start at zero.
inline double gdepth(const qxx::Circuit& c, const std::vector<std::size_t>& mapping,
                     std::size_t n, const Edges& edges, const qxx::QxxParams& p) {
  constexpr auto kNone = std::numeric_limits<std::size_t>::max();
  std::vector<const qxx::Gate*> mapped;
  for (const auto& g : c.gates()) {
    if (mapping[g.control] != kNone && mapping[g.target] != kNone) mapped.push_back(&g);
  }
  const double nc = static_cast<double>(mapped.size());
  std::vector<double> offset(mapping.size(), 0.0);
  double total = 0.0;
  for (std::size_t k = 0; k < mapped.size(); ++k) {
    const auto& g = *mapped[k];
    const std::size_t hop = bfs_hop(n, edges, mapping[g.control], mapping[g.target]);
    const double raw = hop <= 1 ? 0.0 : static_cast<double>(hop) * p.edge_cost;
    double eff = raw - offset[g.control] - offset[g.target];
    if (eff < 0.0) eff = 0.0;
    const double x = static_cast<double>(k + 1) / nc - p.c;
    total += eff * std::exp(-p.b * x * x);
    const std::size_t lo = std::min(g.control, g.target);
    const std::size_t hi = std::max(g.control, g.target);
    offset[lo] += eff / p.movement_factor;
    offset[hi] += eff * (p.movement_factor - 1) / p.movement_factor;
  }
  return total;
}

// Minimum of gdepth over every injective qubit -> register assignment.
inline double brute_force_min(const qxx::Circuit& c, std::size_t n, const Edges& edges,
                              const qxx::QxxParams& p) {
  const std::size_t q = c.num_qubits();
  std::vector<std::size_t> regs(n);
  for (std::size_t i = 0; i < n; ++i) regs[i] = i;
  double best = std::numeric_limits<double>::infinity();
  // Enumerate permutations of all n registers; the first q entries give
  // every injective mapping (each repeated (n-q)! times).
  do {
    std::vector<std::size_t> m(regs.begin(), regs.begin() + static_cast<std::ptrdiff_t>(q));
    best = std::min(best, gdepth(c, m, n, edges, p));
  } while (std::next_permutation(regs.begin(), regs.end()));
  return best;
}

inline qxx::Circuit random_circuit(std::size_t qubits, std::size_t gates, std::mt19937_64& rng) {
  qxx::Circuit c(qubits);
  std::uniform_int_distribution<std::size_t> pick(0, qubits - 1);
  for (std::size_t i = 0; i < gates; ++i) {
    std::size_t a = pick(rng), b = pick(rng);
    while (b == a) b = pick(rng);
    c.add_cnot(a, b);
  }
  return c;
}

// Random connected graph: a random spanning tree plus extra edges.
inline Edges random_connected(std::size_t n, std::size_t extra, std::mt19937_64& rng) {
  Edges e;
  for (std::size_t v = 1; v < n; ++v) {
    e.emplace_back(std::uniform_int_distribution<std::size_t>(0, v - 1)(rng), v);
  }
  for (std::size_t i = 0; i < extra && n > 2; ++i) {
    std::size_t a = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    std::size_t b = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    if (a != b) e.emplace_back(std::min(a, b), std::max(a, b));
  }
  return e;
}

}  // namespace oracle
