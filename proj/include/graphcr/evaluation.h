#ifndef GRAPHCR_EVALUATION_H_
#define GRAPHCR_EVALUATION_H_

#include <cstdint>
#include <string>
#include <vector>

#include "graphcr/graph.h"
#include "graphcr/oracle.h"

namespace graphcr {

using Partition = std::vector<std::vector<std::string>>;

struct QualityReport {
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 1.0;
  int64_t true_positives = 0;
  int64_t false_positives = 0;
  int64_t false_negatives = 0;

  bool operator==(const QualityReport&) const = default;
};

// Pairwise quality over unordered record pairs: predicted pairs are all
// intra-cluster pairs, gold pairs all same-entity pairs among the clustered
// records. P = 1 without predicted pairs, R = 1 without gold pairs.
// Throws Error{kMissingGold} for a record without an entity and
// Error{kInvalidArgument} when a record appears twice.
QualityReport PairwisePrf(const Partition& clusters, const GoldStandard& gold);

// Replaces the similarity of floor(ratio * |E|) distinct, uniformly chosen
// edges by a uniform draw in [0, 1). Topology is unchanged.
SimilarityGraph InjectNoise(const SimilarityGraph& graph, double ratio,
                            uint64_t seed);

// Drops edges whose similarity is below `threshold`.
SimilarityGraph FilterByThreshold(const SimilarityGraph& graph,
                                  double threshold);

// Partition of the graph's connected components.
Partition ComponentPartition(const SimilarityGraph& graph);

}  // namespace graphcr

#endif  // GRAPHCR_EVALUATION_H_
