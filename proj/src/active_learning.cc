#include "graphcr/active_learning.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "graphcr/rng.h"

namespace graphcr {

const char* StrategyName(Strategy strategy) {
  return strategy == Strategy::kBootstrap ? "bootstrap" : "bootstrap-ext";
}

Strategy ParseStrategy(std::string_view text) {
  if (text == "bootstrap") return Strategy::kBootstrap;
  if (text == "bootstrap-ext" || text == "bootstrap_ext") {
    return Strategy::kBootstrapExt;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown strategy '" + std::string(text) + "'");
}

void SelectionConfig::Validate() const {
  if (budget <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "budget must be positive");
  }
  if (iter_budget < 1 || iter_budget > budget) {
    throw Error(ErrorCode::kInvalidArgument,
                "iter_budget must lie in [1, budget]");
  }
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
}

SizeDistribution ClusterSizeDistribution(std::span<const Cluster> clusters) {
  size_t max_size = 0;
  for (const Cluster& c : clusters) max_size = std::max(max_size, c.size());
  SizeDistribution d(max_size + 1, 0.0);
  if (clusters.empty()) return d;
  for (const Cluster& c : clusters) d[c.size()] += 1.0;
  for (double& x : d) x /= static_cast<double>(clusters.size());
  return d;
}

ClusterSizes::ClusterSizes(std::span<const Cluster> clusters) {
  for (const Cluster& c : clusters) {
    sizes_[c.cluster_id] = c.size();
    max_size_ = std::max(max_size_, c.size());
  }
}

namespace {

std::vector<int> DistinctClusters(const EdgeFeatureVector& vector) {
  std::vector<int> ids;
  for (const EdgeRef& ref : vector.member_edges) {
    if (ids.empty() || ids.back() != ref.cluster_id) {
      ids.push_back(ref.cluster_id);
    }
  }
  return ids;
}

}  // namespace

SizeDistribution TrainingDistribution(const FeatureSpace& space,
                                      const ClusterSizes& sizes,
                                      std::span<const int> labeled_vectors,
                                      size_t dimension) {
  SizeDistribution d(dimension, 0.0);
  double total = 0.0;
  for (int id : labeled_vectors) {
    for (int cluster : DistinctClusters(space.vector(id))) {
      const size_t s = sizes(cluster);
      if (s >= d.size()) d.resize(s + 1, 0.0);
      d[s] += 1.0;
      total += 1.0;
    }
  }
  if (total > 0.0) {
    for (double& x : d) x /= total;
  }
  return d;
}

std::vector<double> SizeWeights(const SizeDistribution& clusters,
                                const SizeDistribution& training) {
  std::vector<double> w(std::max(clusters.size(), training.size()), 0.0);
  for (size_t i = 0; i < w.size(); ++i) {
    const double c = i < clusters.size() ? clusters[i] : 0.0;
    const double t = i < training.size() ? training[i] : 0.0;
    w[i] = c - t;
  }
  return w;
}

double ClusterWeight(const EdgeFeatureVector& vector,
                     std::span<const double> weights,
                     const ClusterSizes& sizes) {
  const std::vector<int> clusters = DistinctClusters(vector);
  if (clusters.empty()) return 0.0;
  double total = 0.0;
  for (int cluster : clusters) {
    const size_t s = sizes(cluster);
    total += s < weights.size() ? weights[s] : 0.0;
  }
  return total / static_cast<double>(clusters.size());
}

double CosineDistance(const FeatureValues& a, const FeatureValues& b) {
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (size_t d = 0; d < kFeatureDim; ++d) {
    dot += a[d] * b[d];
    na += a[d] * a[d];
    nb += b[d] * b[d];
  }
  if (na <= 0.0 || nb <= 0.0) return 1.0;
  return 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
}

double AvgCosineDistance(const FeatureValues& normalized,
                         std::span<const FeatureValues> training) {
  if (training.empty()) return 1.0;
  double total = 0.0;
  for (const FeatureValues& t : training) {
    total += CosineDistance(normalized, t);
  }
  return total / static_cast<double>(training.size());
}

namespace {

void Rescale(std::span<CandidateMeasures> pool,
             double CandidateMeasures::*field, std::vector<double>& out) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& c : pool) {
    lo = std::min(lo, c.*field);
    hi = std::max(hi, c.*field);
  }
  out.resize(pool.size());
  for (size_t i = 0; i < pool.size(); ++i) {
    out[i] = hi > lo ? (pool[i].*field - lo) / (hi - lo) : 0.0;
  }
}

}  // namespace

void ScoreCandidates(Strategy strategy, std::span<CandidateMeasures> pool) {
  if (strategy == Strategy::kBootstrap) {
    for (auto& c : pool) c.score = c.unc;
    return;
  }
  std::vector<double> unc, weight, cos;
  Rescale(pool, &CandidateMeasures::unc, unc);
  Rescale(pool, &CandidateMeasures::weight, weight);
  Rescale(pool, &CandidateMeasures::cos, cos);
  for (size_t i = 0; i < pool.size(); ++i) {
    pool[i].score = (unc[i] + weight[i] + cos[i]) / 3.0;
  }
}

void RankCandidates(std::span<CandidateMeasures> pool) {
  std::sort(pool.begin(), pool.end(),
            [](const CandidateMeasures& a, const CandidateMeasures& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.vector_id < b.vector_id;
            });
}

namespace {

std::vector<const Cluster*> WithEdges(std::span<const Cluster> clusters) {
  std::vector<const Cluster*> out;
  for (const Cluster& c : clusters) {
    if (c.graph.num_edges() > 0) out.push_back(&c);
  }
  return out;
}

}  // namespace

LabelSession::LabelSession(std::span<const Cluster> clusters,
                           const FeatureSpace& space,
                           const SelectionConfig& config)
    : clusters_(clusters), space_(space), config_(config), sizes_(clusters) {
  config_.Validate();
  for (const Cluster& c : clusters_) by_id_[c.cluster_id] = &c;
  // Clusters without edges can never contribute a training vector, so the
  // target distribution covers clusters with at least one edge.
  std::vector<double> counts;
  size_t total = 0;
  for (const Cluster* c : WithEdges(clusters_)) {
    if (c->size() >= counts.size()) counts.resize(c->size() + 1, 0.0);
    counts[c->size()] += 1.0;
    ++total;
  }
  d_c_.assign(sizes_.max_size() + 1, 0.0);
  for (size_t s = 0; s < counts.size(); ++s) {
    if (total > 0) d_c_[s] = counts[s] / static_cast<double>(total);
  }
}

std::vector<int> LabelSession::Unlabeled() const {
  std::vector<int> out;
  for (const EdgeFeatureVector& v : space_.vectors()) {
    if (training_.Contains(v.vector_id)) continue;
    bool is_pending = false;
    for (const Question& q : pending_) {
      if (q.vector_id == v.vector_id) is_pending = true;
    }
    if (!is_pending) out.push_back(v.vector_id);
  }
  return out;
}

SizeDistribution LabelSession::training_distribution() const {
  return TrainingDistribution(space_, sizes_, labeled_order_, d_c_.size());
}

bool LabelSession::Finished() const {
  if (!pending_.empty()) return false;
  return remaining_budget() <= 0 ||
         training_.size() == space_.size();
}

Question LabelSession::MakeQuestion(const CandidateMeasures& m,
                                    bool seeding) const {
  const EdgeFeatureVector& v = space_.vector(m.vector_id);
  const EdgeRef& ref = v.member_edges.front();
  const Cluster& cluster = *by_id_.at(ref.cluster_id);
  const Edge& edge = cluster.graph.edge(ref.edge);
  Question q;
  q.iteration = iteration_;
  q.vector_id = m.vector_id;
  q.cluster_id = ref.cluster_id;
  q.record_a = cluster.graph.id(edge.u);
  q.record_b = cluster.graph.id(edge.v);
  q.similarity = edge.similarity;
  q.seeding = seeding;
  q.measures = m;
  return q;
}

std::vector<CandidateMeasures> LabelSession::SelectSeeds(
    std::vector<int> unlabeled, size_t count) const {
  std::sort(unlabeled.begin(), unlabeled.end(), [&](int a, int b) {
    const double sa = space_.vector(a).values[kSimilarity];
    const double sb = space_.vector(b).values[kSimilarity];
    if (sa != sb) return sa > sb;
    return a < b;
  });
  std::vector<CandidateMeasures> out;
  if (count >= unlabeled.size()) {
    for (int id : unlabeled) out.push_back({.vector_id = id});
    return out;
  }
  const size_t high = count - count / 2;
  const size_t low = count / 2;
  for (size_t i = 0; i < high; ++i) out.push_back({.vector_id = unlabeled[i]});
  for (size_t i = 0; i < low; ++i) {
    out.push_back({.vector_id = unlabeled[unlabeled.size() - 1 - i]});
  }
  return out;
}

std::vector<CandidateMeasures> LabelSession::SelectInformative(
    const std::vector<int>& unlabeled, size_t count) const {
  const EnsembleModel model = EnsembleModel::Train(
      training_, config_.k,
      DeriveSeed(config_.seed, static_cast<uint64_t>(iteration_)));

  std::vector<CandidateMeasures> pool;
  pool.reserve(unlabeled.size());
  const bool ext = config_.strategy == Strategy::kBootstrapExt;
  std::vector<double> weights;
  std::vector<FeatureValues> normalized_training;
  if (ext) {
    weights = SizeWeights(d_c_, training_distribution());
    for (const LabeledExample& e : training_.examples()) {
      normalized_training.push_back(space_.Normalize(e.values));
    }
  }
  for (int id : unlabeled) {
    const EdgeFeatureVector& v = space_.vector(id);
    CandidateMeasures m;
    m.vector_id = id;
    m.fraction = model.PredictFraction(v.values);
    m.unc = Uncertainty(m.fraction);
    if (ext) {
      m.weight = ClusterWeight(v, weights, sizes_);
      m.cos = AvgCosineDistance(space_.Normalize(v.values),
                                normalized_training);
    }
    pool.push_back(m);
  }
  ScoreCandidates(config_.strategy, pool);
  RankCandidates(pool);
  if (pool.size() > count) pool.resize(count);
  return pool;
}

bool LabelSession::Advance() {
  if (!pending_.empty()) return true;
  if (Finished()) return false;
  const std::vector<int> unlabeled = Unlabeled();
  if (unlabeled.empty()) return false;
  const size_t count =
      std::min({static_cast<size_t>(config_.iter_budget),
                static_cast<size_t>(remaining_budget()), unlabeled.size()});

  const auto start = std::chrono::steady_clock::now();
  ++iteration_;
  const bool seeding = !training_.HasBothClasses();
  const std::vector<CandidateMeasures> chosen =
      seeding ? SelectSeeds(unlabeled, count)
              : SelectInformative(unlabeled, count);
  for (const CandidateMeasures& m : chosen) {
    pending_.push_back(MakeQuestion(m, seeding));
  }
  batch_elapsed_ms_ = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  return !pending_.empty();
}

void LabelSession::Answer(int vector_id, Label label) {
  auto it = std::find_if(pending_.begin(), pending_.end(),
                         [&](const Question& q) {
                           return q.vector_id == vector_id;
                         });
  if (it == pending_.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                "vector " + std::to_string(vector_id) + " is not pending");
  }
  training_.Add({vector_id, space_.vector(vector_id).values, label});
  labeled_order_.push_back(vector_id);
  audit_.push_back({*it, label, batch_elapsed_ms_});
  pending_.erase(it);
}

EnsembleModel LabelSession::TrainModel() const {
  return EnsembleModel::Train(training_, config_.k,
                              DeriveSeed(config_.seed, 0));
}

ActiveLearningResult RunActiveLearning(std::span<const Cluster> clusters,
                                       const FeatureSpace& space,
                                       Oracle& oracle,
                                       const SelectionConfig& config) {
  LabelSession session(clusters, space, config);
  while (session.Advance()) {
    const std::vector<Question> batch = session.pending();
    for (const Question& q : batch) {
      session.Answer(q.vector_id, oracle.Query(q.record_a, q.record_b));
    }
  }
  ActiveLearningResult result;
  result.model = session.TrainModel();
  result.training = session.training_set();
  result.audit.assign(session.audit().begin(), session.audit().end());
  result.iterations = session.iteration();
  return result;
}

}  // namespace graphcr
