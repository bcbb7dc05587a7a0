#ifndef GRAPHCR_FEATURES_H_
#define GRAPHCR_FEATURES_H_

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "graphcr/graph.h"
#include "graphcr/metrics.h"

namespace graphcr {

inline constexpr size_t kFeatureDim = 13;
inline constexpr size_t kNodeBlockDim = 4;

using FeatureValues = std::array<double, kFeatureDim>;
// [pagerank, closeness, betweenness, clustering_coefficient]
using NodeBlock = std::array<double, kNodeBlockDim>;

// Layout of FeatureValues.
enum FeatureIndex : size_t {
  kFirstBlock = 0,   // 4 entries
  kSecondBlock = 4,  // 4 entries
  kSimilarity = 8,
  kLinkCategory = 9,
  kIsBridge = 10,
  kEdgeBetweenness = 11,
  kCompleteRatio = 12,
};

// Rounds to 6 decimal places; the equality notion used for deduplication.
double RoundFeature(double x);

// Orders the endpoint blocks lexicographically by their rounded values.
std::pair<NodeBlock, NodeBlock> CanonicalBlockOrder(const NodeBlock& a,
                                                    const NodeBlock& b);

struct EdgeRef {
  int cluster_id;
  size_t edge;  // index into the cluster's graph.edges()

  auto operator<=>(const EdgeRef&) const = default;
};

struct EdgeFeatureVector {
  int vector_id = 0;
  FeatureValues values{};
  // Sorted by (cluster_id, edge).
  std::vector<EdgeRef> member_edges;
};

// Raw (unrounded) feature tuple of each edge in a cluster.
std::vector<FeatureValues> EdgeFeatures(const SimilarityGraph& graph,
                                        const ClusterMetrics& metrics);

// Unique rounded edge vectors with their n:m mapping onto cluster edges.
class FeatureSpace {
 public:
  FeatureSpace() = default;

  std::span<const EdgeFeatureVector> vectors() const { return vectors_; }
  const EdgeFeatureVector& vector(int vector_id) const {
    return vectors_[vector_id];
  }
  size_t size() const { return vectors_.size(); }

  const FeatureValues& min() const { return min_; }
  const FeatureValues& max() const { return max_; }

  // Throws Error{kMissingFeature} if the edge was not part of the build.
  int VectorIdFor(int cluster_id, size_t edge) const;

  // Per-dimension min-max scaling to [0,1]; constant dimensions map to 0.
  FeatureValues Normalize(const FeatureValues& values) const;

  friend FeatureSpace BuildFeatures(std::span<const Cluster> clusters,
                                    const PageRankOptions& options);

 private:
  std::vector<EdgeFeatureVector> vectors_;
  FeatureValues min_{};
  FeatureValues max_{};
  std::unordered_map<int, std::vector<int>> edge_vector_;
};

FeatureSpace BuildFeatures(std::span<const Cluster> clusters,
                           const PageRankOptions& options = {});

// Comma-separated, one row per unique vector: 13 feature columns then
// vector_id.
void WriteFeatureMatrix(std::ostream& out, const FeatureSpace& space);

}  // namespace graphcr

#endif  // GRAPHCR_FEATURES_H_
