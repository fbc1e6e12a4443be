#include "qxx/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace qxx {

std::vector<double> pagerank(const UndirectedGraph& g, double damping, double tol,
                             std::size_t max_iter) {
  const std::size_t n = g.num_vertices;
  if (n == 0) return {};
  const auto adj = g.adjacency();
  const double uniform = 1.0 / static_cast<double>(n);
  std::vector<double> x(n, uniform);
  std::vector<double> last(n);
  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    last.swap(x);
    double dangling = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      if (adj[v].empty()) dangling += last[v];
    }
    const double base = (damping * dangling + (1.0 - damping)) * uniform;
    std::fill(x.begin(), x.end(), base);
    for (std::size_t v = 0; v < n; ++v) {
      if (adj[v].empty()) continue;
      const double share = damping * last[v] / static_cast<double>(adj[v].size());
      for (std::size_t u : adj[v]) x[u] += share;
    }
    double err = 0.0;
    for (std::size_t v = 0; v < n; ++v) err += std::abs(x[v] - last[v]);
    if (err < static_cast<double>(n) * tol) break;
  }
  return x;
}

std::size_t connected_components(const UndirectedGraph& g) {
  const auto adj = g.adjacency();
  std::vector<bool> seen(g.num_vertices, false);
  std::size_t components = 0;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < g.num_vertices; ++s) {
    if (seen[s]) continue;
    ++components;
    seen[s] = true;
    stack.push_back(s);
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      for (auto v : adj[u]) {
        if (!seen[v]) {
          seen[v] = true;
          stack.push_back(v);
        }
      }
    }
  }
  return components;
}

double global_efficiency(const UndirectedGraph& g) {
  const std::size_t n = g.num_vertices;
  if (n < 2) return 0.0;
  const auto adj = g.adjacency();
  constexpr auto kInf = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> d(n);
  std::queue<std::size_t> frontier;
  double sum = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(d.begin(), d.end(), kInf);
    d[s] = 0;
    frontier.push(s);
    while (!frontier.empty()) {
      const auto u = frontier.front();
      frontier.pop();
      for (auto v : adj[u]) {
        if (d[v] == kInf) {
          d[v] = d[u] + 1;
          sum += 1.0 / static_cast<double>(d[v]);
          frontier.push(v);
        }
      }
    }
  }
  return sum / static_cast<double>(n * (n - 1));
}

double s_metric(const UndirectedGraph& g) {
  const auto deg = g.degrees();
  double s = 0.0;
  for (const auto& [a, b] : g.edges) {
    s += static_cast<double>(deg[a]) * static_cast<double>(deg[b]);
  }
  return s;
}

GraphFeatures graph_features(const UndirectedGraph& g) {
  GraphFeatures f;
  const auto pr = pagerank(g);
  f.max_page_rank = pr.empty() ? 0.0 : *std::max_element(pr.begin(), pr.end());
  f.nr_conn_comp = static_cast<double>(connected_components(g));
  f.edges = static_cast<double>(g.edges.size());
  f.nodes = static_cast<double>(g.num_vertices);
  f.efficiency = global_efficiency(g);
  f.smetric = s_metric(g);
  return f;
}

FeatureVector feature_vector(const GraphFeatures& graph, const QxxParams& params) {
  FeatureVector v{};
  const auto gf = graph.to_array();
  const auto pf = params.to_array();
  std::copy(gf.begin(), gf.end(), v.begin());
  std::copy(pf.begin(), pf.end(), v.begin() + 6);
  return v;
}

}  // namespace qxx
