#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qxx/benchgen.hpp"
#include "qxx/placer.hpp"

using namespace qxx;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

PartialMapping mapping_of(const std::vector<Register>& regs, std::size_t n) {
  return PartialMapping::complete(regs, n);
}

oracle::Edges edges_of(const Device& d) { return {d.edges().begin(), d.edges().end()}; }

QxxParams make(int md, int mc, double b, double c, int mf, double ec) {
  return {md, mc, b, c, mf, ec};
}

}  // namespace

TEST_CASE("offset update splits movement by the movement factor") {
  std::vector<double> off(4, 0.0);
  update_offsets(off, {1, 3, GateKind::cnot}, 5.0, 2);
  CHECK(off[1] == 2.5);
  CHECK(off[3] == 2.5);

  std::fill(off.begin(), off.end(), 0.0);
  update_offsets(off, {3, 1, GateKind::cnot}, 5.0, 5);
  CHECK(off[1] == 1.0);  // lower index
  CHECK(off[3] == 4.0);

  std::fill(off.begin(), off.end(), 0.0);
  update_offsets(off, {0, 2, GateKind::cnot}, 0.0, 3);
  CHECK(off == std::vector<double>(4, 0.0));

  CHECK_THROWS(update_offsets(off, {0, 2, GateKind::cnot}, 1.0, 0));
}

TEST_CASE("partial mapping stays injective") {
  PartialMapping m(3, 4);
  m.assign(0, 2);
  CHECK_THROWS(m.assign(1, 2));
  CHECK_THROWS(m.assign(0, 1));
  CHECK(m.mapped_count() == 1);
  CHECK_FALSE(m.is_complete());
  CHECK_THROWS(PartialMapping::complete({0, 0}, 3));
}

TEST_CASE("gdepth worked example on a four-register chain") {
  const auto chain = linear_chain(4);
  Circuit c(3);
  c.add_cnot(0, 1);
  c.add_cnot(1, 2);
  c.add_cnot(0, 2);
  const auto p = make(1, 1, 5.0, 0.5, 2, 1.0);
  // Gate 1: hop 3, no offsets -> 3, offsets q0 = q1 = 1.5.
  // Gate 2: hop 2 minus q1's 1.5 -> 0.5. Gate 3: adjacent -> 0.
  // Both weighted gates sit 1/6 from the centre.
  const double expected = 3.5 * std::exp(-5.0 / 36.0);
  const auto m = mapping_of({0, 3, 1}, 4);
  CHECK_THAT(gdepth(c, m, chain, p), WithinAbs(expected, 1e-12));
  CHECK_THAT(gdepth(c, m, chain, p),
             WithinAbs(oracle::gdepth(c, {0, 3, 1}, 4, edges_of(chain), p), 1e-12));

  const auto trace = trace_gdepth(c, m, chain, p);
  CHECK(trace.mapped_gates == 3);
  CHECK(trace.offsets == std::vector<double>{1.5, 1.75, 0.25});
}

TEST_CASE("gdepth agrees with the straight-line oracle") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 3 + rng() % 8;
    const auto edges = oracle::random_connected(n, rng() % 4, rng);
    const Device d(n, edges);
    const std::size_t q = 2 + rng() % (n - 1);
    const auto c = oracle::random_circuit(q, 1 + rng() % 25, rng);
    std::vector<Register> regs(n);
    std::iota(regs.begin(), regs.end(), Register{0});
    std::shuffle(regs.begin(), regs.end(), rng);
    regs.resize(q);
    // Leave some qubits unmapped.
    std::vector<std::size_t> partial = regs;
    PartialMapping pm(q, n);
    for (Qubit i = 0; i < q; ++i) {
      if (rng() % 4 == 0) {
        partial[i] = std::numeric_limits<std::size_t>::max();
      } else {
        pm.assign(i, regs[i]);
      }
    }
    const QxxParams p = make(1, 1, static_cast<double>(rng() % 500) / 10.0,
                             static_cast<double>(rng() % 101) / 100.0,
                             1 + static_cast<int>(rng() % 10),
                             static_cast<double>(1 + rng() % 10) / 10.0);
    const double want = oracle::gdepth(c, partial, n, edges, p);
    const auto trace = trace_gdepth(c, pm, d, p);
    CHECK_THAT(trace.cost, WithinAbs(want, 1e-12));
    CHECK(trace.cost >= 0.0);
  }
}

TEST_CASE("with b = 0 every gate counts fully") {
  std::mt19937_64 rng(22);
  const auto d = two_octagons();
  for (int trial = 0; trial < 50; ++trial) {
    const auto c = oracle::random_circuit(10, 30, rng);
    std::vector<Register> regs(16);
    std::iota(regs.begin(), regs.end(), Register{0});
    std::shuffle(regs.begin(), regs.end(), rng);
    regs.resize(10);
    const auto m = mapping_of(regs, 16);
    double sum = 0.0;
    std::vector<double> off(10, 0.0);
    for (const auto& g : c) {
      const double eff =
          std::max(0.0, dist(d, regs[g.control], regs[g.target], 0.7) - off[g.control] -
                            off[g.target]);
      sum += eff;
      update_offsets(off, g, eff, 3);
    }
    for (double centre : {0.0, 0.4, 1.0}) {
      CHECK_THAT(gdepth(c, m, d, make(1, 1, 0.0, centre, 3, 0.7)), WithinAbs(sum, 1e-12));
    }
  }
}

TEST_CASE("gdepth edge cases") {
  const auto chain = linear_chain(4);
  Circuit one(2);
  one.add_cnot(0, 1);
  CHECK(gdepth(one, mapping_of({1, 2}, 4), chain, make(1, 1, 3, 0.2, 2, 1)) == 0.0);

  PartialMapping partial(2, 4);
  partial.assign(0, 0);
  CHECK_THROWS_AS(gdepth(one, partial, chain, {}), std::domain_error);
  CHECK(trace_gdepth(one, partial, chain, {}).cost == 0.0);
}

TEST_CASE("gdepth is zero exactly when every effective distance is zero") {
  std::mt19937_64 rng(23);
  const auto d = grid(3, 3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = oracle::random_circuit(5, 1 + rng() % 8, rng);
    std::vector<Register> regs(9);
    std::iota(regs.begin(), regs.end(), Register{0});
    std::shuffle(regs.begin(), regs.end(), rng);
    regs.resize(5);
    const auto p = make(1, 1, 2.0, 0.5, 2, 1.0);
    const auto trace = trace_gdepth(c, mapping_of(regs, 9), d, p);
    bool all_zero = true;
    std::vector<double> off(5, 0.0);
    for (const auto& g : c) {
      const double eff = std::max(
          0.0, dist(d, regs[g.control], regs[g.target], 1.0) - off[g.control] - off[g.target]);
      all_zero = all_zero && eff == 0.0;
      update_offsets(off, g, eff, 2);
    }
    CHECK((trace.cost == 0.0) == all_zero);
  }
}

TEST_CASE("edge cost scales gdepth linearly") {
  std::mt19937_64 rng(24);
  const auto d = two_octagons();
  for (int trial = 0; trial < 50; ++trial) {
    const auto c = oracle::random_circuit(8, 20, rng);
    std::vector<Register> regs(16);
    std::iota(regs.begin(), regs.end(), Register{0});
    std::shuffle(regs.begin(), regs.end(), rng);
    regs.resize(8);
    const auto m = mapping_of(regs, 16);
    const double base = gdepth(c, m, d, make(1, 1, 4.0, 0.3, 4, 0.2));
    for (double k : {2.0, 3.0, 4.0, 5.0}) {
      CHECK_THAT(gdepth(c, m, d, make(1, 1, 4.0, 0.3, 4, 0.2 * k)),
                 WithinAbs(k * base, 1e-12 * std::max(1.0, k * base)));
    }
  }
}

TEST_CASE("device automorphisms preserve gdepth") {
  std::mt19937_64 rng(25);
  const auto chain = linear_chain(7);
  const auto g = grid(3, 4);
  for (int trial = 0; trial < 40; ++trial) {
    const auto c = oracle::random_circuit(5, 15, rng);
    const auto p = make(1, 1, 1.5, 0.6, 3, 0.5);
    {
      std::vector<Register> regs{0, 1, 2, 3, 4, 5, 6};
      std::shuffle(regs.begin(), regs.end(), rng);
      regs.resize(5);
      auto mirrored = regs;
      for (auto& r : mirrored) r = 6 - r;
      CHECK(gdepth(c, mapping_of(regs, 7), chain, p) ==
            gdepth(c, mapping_of(mirrored, 7), chain, p));
    }
    {
      std::vector<Register> regs(12);
      std::iota(regs.begin(), regs.end(), Register{0});
      std::shuffle(regs.begin(), regs.end(), rng);
      regs.resize(5);
      auto rotated = regs;  // 180 degree rotation of the 3x4 grid
      for (auto& r : rotated) r = 11 - r;
      CHECK(gdepth(c, mapping_of(regs, 12), g, p) ==
            gdepth(c, mapping_of(rotated, 12), g, p));
    }
  }
}

TEST_CASE("placement order is first appearance") {
  Circuit c(5);
  c.add_cnot(3, 1);
  c.add_cnot(1, 4);
  c.add_cnot(0, 3);
  CHECK(placement_order(c) == std::vector<Qubit>{3, 1, 4, 0, 2});
}

TEST_CASE("two qubits on a two-register chain") {
  Circuit c(2);
  c.add_cnot(0, 1);
  const auto p = place(c, linear_chain(2), {});
  REQUIRE(p);
  CHECK(p->cost == 0.0);
  CHECK(p->mapping.is_complete());
  CHECK(linear_chain(2).adjacent(p->mapping[0], p->mapping[1]));
}

TEST_CASE("unpruned search finds the global minimum") {
  std::mt19937_64 rng(26);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 3 + rng() % 3;
    const std::size_t q = 2 + rng() % (n - 1);
    const auto edges = oracle::random_connected(n, rng() % 3, rng);
    const Device d(n, edges);
    const auto c = oracle::random_circuit(q, 1 + rng() % 12, rng);
    const auto p = make(static_cast<int>(q), static_cast<int>(n),
                        static_cast<double>(rng() % 50) / 10.0,
                        static_cast<double>(rng() % 5) / 4.0, 1 + static_cast<int>(rng() % 6),
                        static_cast<double>(1 + rng() % 10) / 10.0);
    const auto placed = place(c, d, p);
    REQUIRE(placed);
    CHECK(placed->cost == oracle::brute_force_min(c, n, edges, p));
    CHECK(placed->cost == gdepth(c, placed->mapping, d, p));
  }
}

TEST_CASE("placement is deterministic and respects qubit and register counts") {
  const auto d = two_octagons();
  const auto bench = generate_known_optimal(d, 15, 0.5, 4);
  const auto p = make(3, 3, 2.0, 0.5, 4, 0.6);
  const auto a = place(bench.circuit, d, p);
  const auto b = place(bench.circuit, d, p);
  REQUIRE(a);
  REQUIRE(b);
  CHECK(a->mapping == b->mapping);
  CHECK(a->cost == b->cost);

  Circuit big(6);
  big.add_cnot(0, 5);
  CHECK_THROWS_AS(place(big, linear_chain(5), {}), std::invalid_argument);
}

TEST_CASE("placement gives up on the deadline or the expansion budget") {
  const auto d = two_octagons();
  const auto bench = generate_known_optimal(d, 45, 0.5, 9);
  const auto p = make(9, 9, 1.0, 0.5, 2, 1.0);
  CHECK_FALSE(place(bench.circuit, d, p, Deadline::after(std::chrono::milliseconds(1))));
  PlaceOptions budget;
  budget.max_expansions = 100;
  CHECK_FALSE(place(bench.circuit, d, p, Deadline::never(), budget));
  budget.max_expansions = 0;
  budget.max_frontier = 1000;
  CHECK_FALSE(place(bench.circuit, d, p, Deadline::never(), budget));
}

TEST_CASE("minimum-ties retention keeps only cheapest children") {
  const auto d = grid(3, 3);
  std::mt19937_64 rng(27);
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = oracle::random_circuit(6, 12, rng);
    PlaceOptions o;
    o.retention = ChildRetention::minimum_ties;
    const auto p = make(3, 4, 0.5, 0.5, 2, 1.0);
    const auto ties = place(c, d, p, Deadline::never(), o);
    const auto lowest = place(c, d, p);
    REQUIRE(ties);
    REQUIRE(lowest);
    CHECK(ties->mapping.is_complete());
    CHECK(ties->expanded_nodes <= lowest->expanded_nodes);
  }
}
