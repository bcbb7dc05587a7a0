#include "graphcr/evaluation.h"

#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "graphcr/rng.h"

namespace graphcr {

namespace {

int64_t Pairs(int64_t n) { return n * (n - 1) / 2; }

}  // namespace

QualityReport PairwisePrf(const Partition& clusters,
                          const GoldStandard& gold) {
  std::unordered_set<std::string> seen;
  std::unordered_map<std::string, int64_t> entity_total;
  int64_t predicted = 0;
  int64_t tp = 0;
  for (const auto& cluster : clusters) {
    std::unordered_map<std::string, int64_t> entity_count;
    for (const std::string& record : cluster) {
      if (!seen.insert(record).second) {
        throw Error(ErrorCode::kInvalidArgument,
                    "record '" + record + "' appears in two clusters");
      }
      auto it = gold.find(record);
      if (it == gold.end()) {
        throw Error(ErrorCode::kMissingGold,
                    "no gold entity for '" + record + "'");
      }
      ++entity_count[it->second];
      ++entity_total[it->second];
    }
    predicted += Pairs(static_cast<int64_t>(cluster.size()));
    for (const auto& [entity, count] : entity_count) tp += Pairs(count);
  }
  int64_t gold_pairs = 0;
  for (const auto& [entity, count] : entity_total) gold_pairs += Pairs(count);

  QualityReport r;
  r.true_positives = tp;
  r.false_positives = predicted - tp;
  r.false_negatives = gold_pairs - tp;
  r.precision = predicted > 0 ? static_cast<double>(tp) / predicted : 1.0;
  r.recall = gold_pairs > 0 ? static_cast<double>(tp) / gold_pairs : 1.0;
  const double sum = r.precision + r.recall;
  r.f1 = sum > 0.0 ? 2.0 * r.precision * r.recall / sum : 0.0;
  return r;
}

SimilarityGraph InjectNoise(const SimilarityGraph& graph, double ratio,
                            uint64_t seed) {
  if (!(ratio >= 0.0 && ratio <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "noise ratio outside [0,1]");
  }
  const size_t m = graph.num_edges();
  const size_t count = static_cast<size_t>(
      std::floor(ratio * static_cast<double>(m)));
  if (count == 0) return graph;

  std::vector<double> sims(m);
  for (size_t e = 0; e < m; ++e) sims[e] = graph.edge(e).similarity;
  std::vector<size_t> order(m);
  std::iota(order.begin(), order.end(), size_t{0});
  Rng rng(seed);
  // Partial Fisher-Yates: the first `count` slots are the chosen edges.
  for (size_t i = 0; i < count; ++i) {
    std::swap(order[i], order[i + rng.UniformIndex(m - i)]);
    sims[order[i]] = rng.UniformUnit();
  }
  return graph.WithSimilarities(sims);
}

SimilarityGraph FilterByThreshold(const SimilarityGraph& graph,
                                  double threshold) {
  std::vector<bool> keep(graph.num_edges());
  for (size_t e = 0; e < keep.size(); ++e) {
    keep[e] = graph.edge(e).similarity >= threshold;
  }
  return graph.FilterEdges(keep);
}

Partition ComponentPartition(const SimilarityGraph& graph) {
  int count = 0;
  const std::vector<int> label = ComponentLabels(graph, &count);
  Partition out(count);
  for (NodeIndex n = 0; n < graph.num_nodes(); ++n) {
    out[label[n]].push_back(graph.id(n));
  }
  return out;
}

}  // namespace graphcr
