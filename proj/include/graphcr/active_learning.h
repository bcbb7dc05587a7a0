#ifndef GRAPHCR_ACTIVE_LEARNING_H_
#define GRAPHCR_ACTIVE_LEARNING_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "graphcr/ensemble.h"
#include "graphcr/features.h"
#include "graphcr/graph.h"
#include "graphcr/oracle.h"

namespace graphcr {

enum class Strategy { kBootstrap, kBootstrapExt };

const char* StrategyName(Strategy strategy);
// "bootstrap" or "bootstrap-ext" (also "bootstrap_ext").
Strategy ParseStrategy(std::string_view text);

struct SelectionConfig {
  int budget = 0;
  int iter_budget = 20;
  Strategy strategy = Strategy::kBootstrapExt;
  int k = 100;
  uint64_t seed = 0;

  // Throws Error{kInvalidArgument} unless budget > 0,
  // 1 <= iter_budget <= budget and k >= 1.
  void Validate() const;
};

// entries[s] is the share of clusters (or assignments) of size s; entry 0 is
// unused and always 0.
using SizeDistribution = std::vector<double>;

SizeDistribution ClusterSizeDistribution(std::span<const Cluster> clusters);

// Looks up cluster sizes by cluster_id.
class ClusterSizes {
 public:
  explicit ClusterSizes(std::span<const Cluster> clusters);
  size_t operator()(int cluster_id) const { return sizes_.at(cluster_id); }
  size_t max_size() const { return max_size_; }

 private:
  std::unordered_map<int, size_t> sizes_;
  size_t max_size_ = 0;
};

// Distribution of (labeled vector, distinct cluster) assignments over
// cluster sizes, with `dimension` entries. All zero when nothing is labeled.
SizeDistribution TrainingDistribution(const FeatureSpace& space,
                                      const ClusterSizes& sizes,
                                      std::span<const int> labeled_vectors,
                                      size_t dimension);

// d_C - d_T with the shorter vector zero-padded.
std::vector<double> SizeWeights(const SizeDistribution& clusters,
                                const SizeDistribution& training);

// Mean of w[size(c)] over the distinct clusters c holding a member edge.
double ClusterWeight(const EdgeFeatureVector& vector,
                     std::span<const double> weights,
                     const ClusterSizes& sizes);

// 1 - cos(a, b); 1 when either vector has zero magnitude.
double CosineDistance(const FeatureValues& a, const FeatureValues& b);

// Mean cosine distance to the training vectors; 1 for an empty set.
// All inputs are expected to be normalized already.
double AvgCosineDistance(const FeatureValues& normalized,
                         std::span<const FeatureValues> training);

struct CandidateMeasures {
  int vector_id = 0;
  double fraction = 0.0;
  double unc = 0.0;
  double weight = 0.0;
  double cos = 0.0;
  double score = 0.0;
};

// Fills `score`: BOOTSTRAP uses unc; BOOTSTRAP_EXT min-max rescales each of
// unc, weight and cos across the pool (constant measure -> 0) and averages.
void ScoreCandidates(Strategy strategy, std::span<CandidateMeasures> pool);

// Sorts by descending score, then ascending vector_id.
void RankCandidates(std::span<CandidateMeasures> pool);

struct Question {
  int iteration = 0;
  int vector_id = 0;
  int cluster_id = 0;
  std::string record_a;
  std::string record_b;
  double similarity = 0.0;
  // Seeding questions are chosen by similarity and carry no measures.
  bool seeding = false;
  CandidateMeasures measures;
};

struct AuditEntry {
  Question question;
  Label label = Label::kNonMatch;
  double elapsed_ms = 0.0;
};

// Stepwise active-learning state. Each Advance() issues one batch of at
// most iter_budget questions; answers may arrive in any order. The first
// batches seed T with the highest- and lowest-similarity vectors until both
// classes are present; later batches rank unlabeled vectors by
// informativeness under an ensemble trained on the current T.
class LabelSession {
 public:
  // `clusters` and `space` must outlive the session.
  LabelSession(std::span<const Cluster> clusters, const FeatureSpace& space,
               const SelectionConfig& config);

  // Issues the next batch if nothing is pending. Returns true when
  // questions are pending afterwards.
  bool Advance();

  const std::vector<Question>& pending() const { return pending_; }

  // Throws Error{kInvalidArgument} when vector_id is not pending.
  void Answer(int vector_id, Label label);

  // Budget spent or every vector labeled, and nothing pending.
  bool Finished() const;

  // Ensemble on the full T. Throws Error{kInsufficientTraining}.
  EnsembleModel TrainModel() const;

  const TrainingSet& training_set() const { return training_; }
  int remaining_budget() const {
    return config_.budget - static_cast<int>(training_.size()) -
           static_cast<int>(pending_.size());
  }
  int iteration() const { return iteration_; }
  const SelectionConfig& config() const { return config_; }
  std::span<const AuditEntry> audit() const { return audit_; }
  const SizeDistribution& cluster_distribution() const { return d_c_; }
  SizeDistribution training_distribution() const;

 private:
  std::vector<int> Unlabeled() const;
  std::vector<CandidateMeasures> SelectSeeds(std::vector<int> unlabeled,
                                             size_t count) const;
  std::vector<CandidateMeasures> SelectInformative(
      const std::vector<int>& unlabeled, size_t count) const;
  Question MakeQuestion(const CandidateMeasures& m, bool seeding) const;

  std::span<const Cluster> clusters_;
  std::unordered_map<int, const Cluster*> by_id_;
  const FeatureSpace& space_;
  SelectionConfig config_;
  ClusterSizes sizes_;
  SizeDistribution d_c_;
  TrainingSet training_;
  std::vector<int> labeled_order_;
  std::vector<Question> pending_;
  std::vector<AuditEntry> audit_;
  int iteration_ = 0;
  double batch_elapsed_ms_ = 0.0;
};

struct ActiveLearningResult {
  EnsembleModel model;
  TrainingSet training;
  std::vector<AuditEntry> audit;
  int iterations = 0;
};

// Drives a LabelSession against a synchronous oracle until the budget or the
// pool is exhausted, then trains the final ensemble.
ActiveLearningResult RunActiveLearning(std::span<const Cluster> clusters,
                                       const FeatureSpace& space,
                                       Oracle& oracle,
                                       const SelectionConfig& config);

}  // namespace graphcr

#endif  // GRAPHCR_ACTIVE_LEARNING_H_
