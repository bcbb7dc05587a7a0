#ifndef GRAPHCR_ENSEMBLE_H_
#define GRAPHCR_ENSEMBLE_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "graphcr/features.h"

namespace graphcr {

enum class Label : int { kNonMatch = 0, kMatch = 1 };

const char* LabelName(Label label);
// Accepts "match"/"non_match" (also "1"/"0"). Throws kInvalidArgument.
Label ParseLabel(std::string_view text);

struct LabeledExample {
  int vector_id = 0;
  FeatureValues values{};
  Label label = Label::kNonMatch;
};

class TrainingSet {
 public:
  // Throws Error{kInvalidArgument} for a vector_id already present.
  void Add(const LabeledExample& example);

  bool Contains(int vector_id) const { return ids_.contains(vector_id); }
  size_t size() const { return examples_.size(); }
  bool empty() const { return examples_.empty(); }
  std::span<const LabeledExample> examples() const { return examples_; }
  size_t CountLabel(Label label) const;
  bool HasBothClasses() const {
    return CountLabel(Label::kMatch) > 0 && CountLabel(Label::kNonMatch) > 0;
  }

 private:
  std::vector<LabeledExample> examples_;
  std::unordered_set<int> ids_;
};

struct TreeOptions {
  int max_depth = 12;
  int min_leaf = 1;
};

// Binary CART tree with Gini impurity and midpoint thresholds. Ties between
// candidate splits go to the lowest feature index, then the lowest threshold.
class DecisionTree {
 public:
  // Leaves have feature == -1; internal nodes send values[feature] <=
  // threshold to `left`.
  struct Node {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    Label label = Label::kNonMatch;

    bool operator==(const Node&) const = default;
  };

  DecisionTree() = default;
  explicit DecisionTree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}

  // `sample` indexes into `examples` and may repeat entries.
  static DecisionTree Fit(std::span<const LabeledExample> examples,
                          std::span<const size_t> sample,
                          const TreeOptions& options = {});

  Label Predict(const FeatureValues& values) const;
  std::span<const Node> nodes() const { return nodes_; }

 private:
  std::vector<Node> nodes_;
};

// k bootstrap-trained trees; m_i(e) is 1 for a MATCH vote.
class EnsembleModel {
 public:
  EnsembleModel() = default;
  EnsembleModel(uint64_t seed, std::vector<DecisionTree> trees)
      : seed_(seed), trees_(std::move(trees)) {}

  // Each tree is fit on |T| draws with replacement; a draw missing one class
  // is redrawn up to 10 times, after which the tree uses all of T. Tree i
  // draws from DeriveSeed(seed, i).
  // Throws Error{kInsufficientTraining} unless T holds both classes.
  static EnsembleModel Train(const TrainingSet& training, int k, uint64_t seed,
                             const TreeOptions& options = {});

  // Fraction of trees voting MATCH.
  double PredictFraction(const FeatureValues& values) const;
  // MATCH iff PredictFraction >= threshold.
  Label Classify(const FeatureValues& values, double threshold = 0.5) const;

  int k() const { return static_cast<int>(trees_.size()); }
  uint64_t seed() const { return seed_; }
  std::span<const DecisionTree> trees() const { return trees_; }

  // Text container "graphcr-ensemble 1"; round trip is prediction-identical.
  void Serialize(std::ostream& out) const;
  static EnsembleModel Deserialize(std::istream& in);

 private:
  uint64_t seed_ = 0;
  std::vector<DecisionTree> trees_;
};

// p(1-p), the disagreement of a bootstrap vote fraction p.
constexpr double Uncertainty(double p) { return p * (1.0 - p); }

}  // namespace graphcr

#endif  // GRAPHCR_ENSEMBLE_H_
