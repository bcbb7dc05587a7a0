#include "graphcr/pipeline.h"

namespace graphcr {

PreparedGraph PrepareGraph(const SimilarityGraph& graph,
                           const PrepareOptions& options) {
  PreparedGraph out;
  out.input = options.threshold > 0.0
                  ? FilterByThreshold(graph, options.threshold)
                  : graph;
  out.input = InjectNoise(out.input, options.noise_ratio, options.noise_seed);
  out.pruned = PruneWeakEdges(out.input);
  out.clusters = ConnectedComponents(out.pruned);
  out.features = BuildFeatures(out.clusters);
  return out;
}

PipelineResult RunPipeline(const SimilarityGraph& graph, Oracle& oracle,
                           const PipelineConfig& config) {
  PipelineResult result;
  result.prepared = PrepareGraph(graph, config.prepare);
  result.learning =
      RunActiveLearning(result.prepared.clusters, result.prepared.features,
                        oracle, config.selection);
  result.repair = RepairAll(result.prepared.clusters, result.prepared.features,
                            result.learning.model, config.match_threshold);
  return result;
}

}  // namespace graphcr
