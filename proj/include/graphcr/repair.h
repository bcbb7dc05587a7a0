#ifndef GRAPHCR_REPAIR_H_
#define GRAPHCR_REPAIR_H_

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "graphcr/ensemble.h"
#include "graphcr/features.h"
#include "graphcr/graph.h"

namespace graphcr {

// Match flag per edge of a cluster's induced graph: E_M where true, E_NM
// where false.
struct EdgePartition {
  std::vector<bool> is_match;

  std::vector<size_t> matches() const;
  std::vector<size_t> non_matches() const;
};

// Classifies each induced edge through its feature vector at `threshold`.
// Throws Error{kMissingFeature} for an edge without a vector.
EdgePartition PartitionEdges(const Cluster& cluster, const FeatureSpace& space,
                             const EnsembleModel& model,
                             double threshold = 0.5);

struct RepairEvent {
  enum class Kind { kSeed, kAssign, kMove, kKeep };

  Kind kind = Kind::kAssign;
  int iteration = 0;
  NodeIndex record = 0;
  // Cluster the record was compared against and its support there.
  int cluster = -1;
  int support = 0;
  // Assignment before the comparison (-1 when unassigned).
  int previous_cluster = -1;
  int previous_support = 0;
};

// Repair result for one input cluster. Repaired cluster ids are local:
// seed clusters first (ascending seed record id), then orphan groups.
struct RepairedClustering {
  int origin_cluster_id = 0;
  std::vector<std::vector<std::string>> clusters;
  // Local repaired id per node of the origin cluster's graph.
  std::vector<int> assignment;
  int iterations = 0;
  bool hit_iteration_cap = false;
  std::vector<RepairEvent> trace;
};

// Support-based split of one cluster. Every endpoint of an E_NM edge seeds
// an immovable cluster; remaining records join via E_M edges, moving only on
// a strictly higher support; passes repeat until nothing changes or the
// pass count reaches the cluster size. Records no seed reaches are grouped
// by E_M connectivity.
RepairedClustering RepairCluster(const Cluster& cluster,
                                 const EdgePartition& partition);

// sup(u, c) under `assignment`: E_M neighbors in c minus E_NM neighbors in c.
int Support(const SimilarityGraph& graph, const EdgePartition& partition,
            std::span<const int> assignment, NodeIndex record, int cluster);

struct RepairProvenance {
  int origin_cluster_id = 0;
  int repaired_cluster_id = 0;
};

struct RepairResult {
  std::vector<RepairedClustering> per_cluster;
  // Global repaired clusters, ids 0.. in origin order then local order.
  std::vector<std::vector<std::string>> clusters;
  std::unordered_map<std::string, RepairProvenance> provenance;
  // Parallel to per_cluster.
  std::vector<EdgePartition> partitions;
};

RepairResult RepairAll(std::span<const Cluster> clusters,
                       const FeatureSpace& space, const EnsembleModel& model,
                       double threshold = 0.5);

// Assembles global ids from already repaired clusters.
RepairResult CombineRepairs(std::vector<RepairedClustering> per_cluster);

}  // namespace graphcr

#endif  // GRAPHCR_REPAIR_H_
