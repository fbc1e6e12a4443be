#include <catch_amalgamated.hpp>

#include <filesystem>
#include <numeric>

#include "qxx/benchgen.hpp"
#include "qxx/placer.hpp"
#include "qxx/router.hpp"

using namespace qxx;

TEST_CASE("generated circuits hit their target depth exactly") {
  const auto d = two_octagons();
  for (std::size_t t : {1u, 5u, 17u, 45u}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto k = generate_known_optimal(d, t, 0.5, seed);
      CHECK(depth(k.circuit, 1) == t);
      CHECK(depth(k.circuit, 3) == t);
      CHECK(k.optimal_depth == t);
      CHECK(k.circuit.num_qubits() == 16);
      CHECK(k.circuit.count(GateKind::swap) == 0);
    }
  }
}

TEST_CASE("the optimal mapping puts every gate on an edge") {
  for (const auto& d : {two_octagons(), grid(3, 3), linear_chain(5)}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto k = generate_known_optimal(d, 12, 0.7, seed);
      std::vector<Register> sorted = k.optimal_mapping;
      std::sort(sorted.begin(), sorted.end());
      std::vector<Register> all(d.num_registers());
      std::iota(all.begin(), all.end(), Register{0});
      CHECK(sorted == all);
      for (const auto& g : k.circuit) {
        CHECK(d.adjacent(k.optimal_mapping[g.control], k.optimal_mapping[g.target]));
      }
      const auto routed =
          route(k.circuit, d, PartialMapping::complete(k.optimal_mapping, d.num_registers()),
                seed);
      CHECK(routed.swap_count() == 0);
      CHECK(ratio(k.circuit, routed.circuit) == 1.0);
    }
  }
}

TEST_CASE("generation is seeded") {
  const auto d = two_octagons();
  const auto a = generate_known_optimal(d, 10, 0.5, 3);
  const auto b = generate_known_optimal(d, 10, 0.5, 3);
  const auto c = generate_known_optimal(d, 10, 0.5, 4);
  CHECK(a.circuit == b.circuit);
  CHECK(a.optimal_mapping == b.optimal_mapping);
  CHECK_FALSE(a.circuit == c.circuit);
}

TEST_CASE("gate density sets gates per layer") {
  const auto d = two_octagons();
  const auto sparse = generate_known_optimal(d, 20, 0.1, 1);
  const auto dense = generate_known_optimal(d, 20, 1.0, 1);
  CHECK(sparse.circuit.size() == 20);  // one gate per layer at the floor
  CHECK(dense.circuit.size() > sparse.circuit.size());
  CHECK_THROWS(generate_known_optimal(d, 0, 0.5, 1));
  CHECK_THROWS(generate_known_optimal(d, 5, 0.0, 1));
  CHECK_THROWS(generate_known_optimal(d, 5, 1.5, 1));
}

TEST_CASE("the default suite has nine depth buckets of ten") {
  const auto suite = generate_suite(two_octagons(), {});
  REQUIRE(suite.size() == 90);
  std::map<std::size_t, std::size_t> buckets;
  for (const auto& b : suite) {
    REQUIRE(b.optimal_depth);
    ++buckets[*b.optimal_depth];
    CHECK(depth(b.circuit, 1) == *b.optimal_depth);
  }
  CHECK(buckets.size() == 9);
  for (const auto& [t, n] : buckets) {
    CHECK(t % 5 == 0);
    CHECK(n == 10);
  }
  CHECK(suite.front().name == "q16_d005_00");
}

TEST_CASE("depth lists") {
  CHECK(parse_depth_list("5..45:5") == std::vector<std::size_t>{5, 10, 15, 20, 25, 30, 35, 40, 45});
  CHECK(parse_depth_list("3..5") == std::vector<std::size_t>{3, 4, 5});
  CHECK(parse_depth_list("5,10,20") == std::vector<std::size_t>{5, 10, 20});
  CHECK(parse_depth_list("7") == std::vector<std::size_t>{7});
  CHECK_THROWS(parse_depth_list("x"));
  CHECK_THROWS(parse_depth_list("0"));
}

TEST_CASE("suites round-trip through a directory") {
  const auto dir = std::filesystem::temp_directory_path() / "qxx_suite_roundtrip";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  SuiteSpec spec;
  spec.depths = {5, 10};
  spec.per_depth = 3;
  spec.seed = 2;
  const auto suite = generate_suite(linear_chain(6), spec);
  write_suite(suite, dir.string());
  const auto back = read_suite(dir.string());
  REQUIRE(back.size() == suite.size());
  for (std::size_t i = 0; i < suite.size(); ++i) {
    CHECK(back[i].name == suite[i].name);
    CHECK(back[i].circuit == suite[i].circuit);
    CHECK(back[i].optimal_depth == suite[i].optimal_depth);
    CHECK(back[i].optimal_mapping == suite[i].optimal_mapping);
  }
  std::filesystem::remove_all(dir);
}
