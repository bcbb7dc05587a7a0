#include "graphcr/features.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>

namespace graphcr {

double RoundFeature(double x) { return std::round(x * 1e6) / 1e6; }

std::pair<NodeBlock, NodeBlock> CanonicalBlockOrder(const NodeBlock& a,
                                                    const NodeBlock& b) {
  NodeBlock ra;
  NodeBlock rb;
  for (size_t i = 0; i < kNodeBlockDim; ++i) {
    ra[i] = RoundFeature(a[i]);
    rb[i] = RoundFeature(b[i]);
  }
  if (rb < ra) return {b, a};
  return {a, b};
}

std::vector<FeatureValues> EdgeFeatures(const SimilarityGraph& graph,
                                        const ClusterMetrics& metrics) {
  auto block = [&](NodeIndex n) {
    return NodeBlock{metrics.pagerank.scores[n], metrics.closeness[n],
                     metrics.betweenness.node[n], metrics.clustering[n]};
  };
  std::vector<FeatureValues> out;
  out.reserve(graph.num_edges());
  for (size_t e = 0; e < graph.num_edges(); ++e) {
    const Edge& edge = graph.edge(e);
    auto [first, second] = CanonicalBlockOrder(block(edge.u), block(edge.v));
    FeatureValues v{};
    std::copy(first.begin(), first.end(), v.begin() + kFirstBlock);
    std::copy(second.begin(), second.end(), v.begin() + kSecondBlock);
    v[kSimilarity] = edge.similarity;
    v[kLinkCategory] = static_cast<double>(metrics.categories[e]);
    v[kIsBridge] = metrics.bridges[e] ? 1.0 : 0.0;
    v[kEdgeBetweenness] = metrics.betweenness.edge[e];
    v[kCompleteRatio] = metrics.complete_ratio;
    out.push_back(v);
  }
  return out;
}

int FeatureSpace::VectorIdFor(int cluster_id, size_t edge) const {
  auto it = edge_vector_.find(cluster_id);
  if (it == edge_vector_.end() || edge >= it->second.size()) {
    throw Error(ErrorCode::kMissingFeature,
                "no feature vector for cluster " + std::to_string(cluster_id) +
                    " edge " + std::to_string(edge));
  }
  return it->second[edge];
}

FeatureValues FeatureSpace::Normalize(const FeatureValues& values) const {
  FeatureValues out{};
  for (size_t d = 0; d < kFeatureDim; ++d) {
    const double span = max_[d] - min_[d];
    if (span > 0.0) {
      out[d] = std::clamp((values[d] - min_[d]) / span, 0.0, 1.0);
    }
  }
  return out;
}

FeatureSpace BuildFeatures(std::span<const Cluster> clusters,
                           const PageRankOptions& options) {
  using Key = std::array<int64_t, kFeatureDim>;
  FeatureSpace space;
  std::map<Key, int> index;

  std::vector<const Cluster*> order;
  for (const Cluster& c : clusters) order.push_back(&c);
  std::sort(order.begin(), order.end(), [](const Cluster* a, const Cluster* b) {
    return a->cluster_id < b->cluster_id;
  });

  for (const Cluster* cluster : order) {
    const SimilarityGraph& g = cluster->graph;
    std::vector<int>& ids = space.edge_vector_[cluster->cluster_id];
    if (g.num_edges() == 0) continue;
    const ClusterMetrics metrics = ComputeClusterMetrics(g, options);
    const std::vector<FeatureValues> raw = EdgeFeatures(g, metrics);
    ids.resize(raw.size());
    for (size_t e = 0; e < raw.size(); ++e) {
      Key key;
      FeatureValues rounded;
      for (size_t d = 0; d < kFeatureDim; ++d) {
        key[d] = std::llround(raw[e][d] * 1e6);
        rounded[d] = RoundFeature(raw[e][d]);
      }
      auto [it, inserted] =
          index.try_emplace(key, static_cast<int>(space.vectors_.size()));
      if (inserted) {
        EdgeFeatureVector v;
        v.vector_id = it->second;
        v.values = rounded;
        space.vectors_.push_back(std::move(v));
      }
      space.vectors_[it->second].member_edges.push_back(
          {cluster->cluster_id, e});
      ids[e] = it->second;
    }
  }

  if (space.vectors_.empty()) return space;
  space.min_.fill(std::numeric_limits<double>::infinity());
  space.max_.fill(-std::numeric_limits<double>::infinity());
  for (const EdgeFeatureVector& v : space.vectors_) {
    for (size_t d = 0; d < kFeatureDim; ++d) {
      space.min_[d] = std::min(space.min_[d], v.values[d]);
      space.max_[d] = std::max(space.max_[d], v.values[d]);
    }
  }
  return space;
}

void WriteFeatureMatrix(std::ostream& out, const FeatureSpace& space) {
  static constexpr const char* kNames[kFeatureDim] = {
      "a_pagerank",     "a_closeness",      "a_betweenness",
      "a_clustering",   "b_pagerank",       "b_closeness",
      "b_betweenness",  "b_clustering",     "similarity",
      "link_category",  "is_bridge",        "edge_betweenness",
      "complete_ratio"};
  for (const char* name : kNames) out << name << ',';
  out << "vector_id\n";
  char buf[32];
  for (const EdgeFeatureVector& v : space.vectors()) {
    for (double x : v.values) {
      std::snprintf(buf, sizeof(buf), "%.6f", x);
      out << buf << ',';
    }
    out << v.vector_id << '\n';
  }
}

}  // namespace graphcr
