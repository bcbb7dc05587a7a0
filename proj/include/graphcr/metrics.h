#ifndef GRAPHCR_METRICS_H_
#define GRAPHCR_METRICS_H_

#include <vector>

#include "graphcr/graph.h"

namespace graphcr {

// Per-cluster graph metrics. Every function takes the induced subgraph of a
// cluster; node results are indexed by node index and edge results by edge
// index of that graph.

struct PageRankOptions {
  double damping = 0.85;
  double tolerance = 1e-10;
  int max_iterations = 200;
};

struct PageRankResult {
  std::vector<double> scores;
  int iterations = 0;
  // False when max_iterations was hit before the L1 change fell below
  // tolerance; scores then hold the last iterate.
  bool converged = true;
};

// Similarity-weighted PageRank by power iteration. A node whose incident
// similarities sum to zero is treated as dangling (mass spread uniformly).
PageRankResult PageRank(const SimilarityGraph& graph,
                        const PageRankOptions& options = {});

// (n-1) / sum of hop distances to reachable nodes; 0 for singletons.
std::vector<double> Closeness(const SimilarityGraph& graph);

struct BetweennessResult {
  std::vector<double> node;
  std::vector<double> edge;
};

// Exact unweighted betweenness over unordered pairs (Brandes), without
// normalization. Node scores exclude path endpoints.
BetweennessResult Betweenness(const SimilarityGraph& graph);

std::vector<double> ClusteringCoefficients(const SimilarityGraph& graph);

// is_bridge per edge.
std::vector<bool> Bridges(const SimilarityGraph& graph);

// |E| / (|V|(|V|-1)/2); 1 for a single node.
double CompleteRatio(const SimilarityGraph& graph);

struct ClusterMetrics {
  PageRankResult pagerank;
  std::vector<double> closeness;
  BetweennessResult betweenness;
  std::vector<double> clustering;
  std::vector<bool> bridges;
  std::vector<LinkCategory> categories;
  double complete_ratio = 1.0;
};

ClusterMetrics ComputeClusterMetrics(const SimilarityGraph& graph,
                                     const PageRankOptions& options = {});

}  // namespace graphcr

#endif  // GRAPHCR_METRICS_H_
