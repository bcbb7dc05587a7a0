#ifndef GRAPHCR_PIPELINE_H_
#define GRAPHCR_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graphcr/active_learning.h"
#include "graphcr/evaluation.h"
#include "graphcr/features.h"
#include "graphcr/graph.h"
#include "graphcr/repair.h"

namespace graphcr {

struct Dataset {
  std::string name;
  std::vector<Record> records;
  SimilarityGraph graph;
  std::optional<GoldStandard> gold;
};

struct PrepareOptions {
  // Edges below this similarity are dropped before anything else; 0 keeps
  // every edge.
  double threshold = 0.0;
  double noise_ratio = 0.0;
  uint64_t noise_seed = 0;
};

// Graph after threshold and noise, its weak-edge-pruned copy, the clusters
// of the pruned graph and their feature space.
struct PreparedGraph {
  SimilarityGraph input;
  SimilarityGraph pruned;
  std::vector<Cluster> clusters;
  FeatureSpace features;
};

PreparedGraph PrepareGraph(const SimilarityGraph& graph,
                           const PrepareOptions& options);

struct PipelineConfig {
  SelectionConfig selection;
  PrepareOptions prepare;
  double match_threshold = 0.5;
};

struct PipelineResult {
  PreparedGraph prepared;
  ActiveLearningResult learning;
  RepairResult repair;
};

// threshold/noise -> prune -> components -> features -> active learning ->
// repair.
PipelineResult RunPipeline(const SimilarityGraph& graph, Oracle& oracle,
                           const PipelineConfig& config);

}  // namespace graphcr

#endif  // GRAPHCR_PIPELINE_H_
