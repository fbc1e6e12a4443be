#include <catch_amalgamated.hpp>

#include <numeric>
#include <random>

#include "oracles.hpp"
#include "qxx/features.hpp"

using namespace qxx;
using Catch::Matchers::WithinAbs;

namespace {

UndirectedGraph graph(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> e) {
  return {n, std::move(e)};
}

// Mean of 1/d over ordered pairs, one BFS per pair.
double pairwise_efficiency(const UndirectedGraph& g) {
  const std::size_t n = g.num_vertices;
  if (n < 2) return 0.0;
  oracle::Edges edges(g.edges.begin(), g.edges.end());
  double sum = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      const auto h = oracle::bfs_hop(n, edges, a, b);
      if (h != std::numeric_limits<std::size_t>::max()) sum += 1.0 / static_cast<double>(h);
    }
  }
  return sum / static_cast<double>(n * (n - 1));
}

}  // namespace

TEST_CASE("triangle") {
  const auto f = graph_features(graph(3, {{0, 1}, {1, 2}, {0, 2}}));
  CHECK(f.smetric == 12.0);
  CHECK(f.nr_conn_comp == 1.0);
  CHECK(f.edges == 3.0);
  CHECK(f.nodes == 3.0);
  CHECK_THAT(f.efficiency, WithinAbs(1.0, 1e-15));
  CHECK_THAT(f.max_page_rank, WithinAbs(1.0 / 3.0, 1e-9));
}

TEST_CASE("two isolated edges on four nodes") {
  const auto f = graph_features(graph(4, {{0, 1}, {2, 3}}));
  CHECK_THAT(f.efficiency, WithinAbs(4.0 / 12.0, 1e-15));
  CHECK(f.nr_conn_comp == 2.0);
  CHECK(f.smetric == 2.0);
}

TEST_CASE("empty graph") {
  for (std::size_t q : {1u, 2u, 5u}) {
    const auto f = graph_features(graph(q, {}));
    CHECK_THAT(f.max_page_rank, WithinAbs(1.0 / static_cast<double>(q), 1e-12));
    CHECK(f.efficiency == 0.0);
    CHECK(f.nr_conn_comp == static_cast<double>(q));
  }
}

TEST_CASE("efficiency agrees with pairwise BFS") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t q = 2 + rng() % 10;
    const auto c = oracle::random_circuit(q, rng() % 15, rng);
    const auto g = interaction_graph(c);
    CHECK_THAT(global_efficiency(g), WithinAbs(pairwise_efficiency(g), 1e-12));
  }
}

TEST_CASE("pagerank on a star") {
  // Closed form for an undirected star with k leaves and damping a:
  // centre = (1 - a)/n + a * k * leaf, leaf = (1 - a)/n + a * centre / k.
  const std::size_t k = 5;
  const double a = 0.85, n = k + 1.0;
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 1; i <= k; ++i) e.emplace_back(0, i);
  const auto pr = pagerank(graph(k + 1, e));
  const double leaf = ((1 - a) / n + a * (1 - a) / n / static_cast<double>(k)) / (1 - a * a);
  const double centre = (1 - a) / n + a * static_cast<double>(k) * leaf;
  CHECK_THAT(pr[0], WithinAbs(centre, 1e-8));
  CHECK_THAT(pr[1], WithinAbs(leaf, 1e-8));
  CHECK_THAT(std::accumulate(pr.begin(), pr.end(), 0.0), WithinAbs(1.0, 1e-12));
}

TEST_CASE("pagerank spreads isolated vertices' mass uniformly") {
  const auto pr = pagerank(graph(3, {{0, 1}}));
  CHECK_THAT(std::accumulate(pr.begin(), pr.end(), 0.0), WithinAbs(1.0, 1e-12));
  CHECK(pr[0] == pr[1]);
  CHECK(pr[2] < pr[0]);
}

TEST_CASE("features are label-free") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    const auto c = oracle::random_circuit(9, 20, rng);
    std::vector<Qubit> perm(9);
    std::iota(perm.begin(), perm.end(), Qubit{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto a = features(c).to_array();
    const auto b = features(relabel(c, perm)).to_array();
    for (std::size_t i = 0; i < a.size(); ++i) CHECK_THAT(a[i], WithinAbs(b[i], 1e-12));
  }
}

TEST_CASE("feature vector order") {
  GraphFeatures g{0.1, 2, 3, 4, 0.5, 6};
  const auto v = feature_vector(g, {9, 8, 1.5, 0.32, 10, 0.8});
  CHECK(v == FeatureVector{0.1, 2, 3, 4, 0.5, 6, 9, 8, 1.5, 0.32, 10, 0.8});
  CHECK(kFeatureNames.size() == 12);
}
