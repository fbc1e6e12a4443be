#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include "qxx/circuit.hpp"
#include "qxx/params.hpp"

namespace qxx {

/// Label-free descriptors of a circuit's interaction graph.
struct GraphFeatures {
  double max_page_rank = 0.0;
  double nr_conn_comp = 0.0;
  double edges = 0.0;
  double nodes = 0.0;
  double efficiency = 0.0;
  double smetric = 0.0;

  std::array<double, 6> to_array() const {
    return {max_page_rank, nr_conn_comp, edges, nodes, efficiency, smetric};
  }
};

inline constexpr std::array<std::string_view, 6> kGraphFeatureNames = {
    "max_page_rank", "nr_conn_comp", "edges", "nodes", "efficiency", "smetric"};

/// The 12 surrogate inputs: graph features, then the six QXX parameters.
inline constexpr std::array<std::string_view, 12> kFeatureNames = {
    "max_page_rank", "nr_conn_comp", "edges", "nodes", "efficiency", "smetric",
    "max_depth", "max_children", "b", "c", "movement_factor", "edge_cost"};

using FeatureVector = std::array<double, 12>;

/// PageRank on the undirected graph; isolated vertices spread their mass
/// uniformly. Iterates until the L1 change drops below n * tol.
std::vector<double> pagerank(const UndirectedGraph& g, double damping = 0.85,
                             double tol = 1e-9, std::size_t max_iter = 10000);
std::size_t connected_components(const UndirectedGraph& g);
/// Mean of 1/d(u,v) over ordered pairs u != v, with 1/inf = 0.
double global_efficiency(const UndirectedGraph& g);
/// Sum over edges of deg(u) * deg(v).
double s_metric(const UndirectedGraph& g);

GraphFeatures graph_features(const UndirectedGraph& g);
inline GraphFeatures features(const Circuit& c) {
  return graph_features(interaction_graph(c));
}

FeatureVector feature_vector(const GraphFeatures& graph, const QxxParams& params);

}  // namespace qxx
