#include "graphcr/ensemble.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "graphcr/rng.h"

namespace graphcr {

const char* LabelName(Label label) {
  return label == Label::kMatch ? "match" : "non_match";
}

Label ParseLabel(std::string_view text) {
  if (text == "match" || text == "1" || text == "MATCH") return Label::kMatch;
  if (text == "non_match" || text == "0" || text == "NON_MATCH" ||
      text == "nonmatch") {
    return Label::kNonMatch;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown label '" + std::string(text) + "'");
}

void TrainingSet::Add(const LabeledExample& example) {
  if (!ids_.insert(example.vector_id).second) {
    throw Error(ErrorCode::kInvalidArgument,
                "vector " + std::to_string(example.vector_id) +
                    " already labeled");
  }
  examples_.push_back(example);
}

size_t TrainingSet::CountLabel(Label label) const {
  return static_cast<size_t>(
      std::count_if(examples_.begin(), examples_.end(),
                    [label](const LabeledExample& e) { return e.label == label; }));
}

namespace {

class TreeBuilder {
 public:
  TreeBuilder(std::span<const LabeledExample> examples,
              std::span<const size_t> sample, const TreeOptions& options)
      : examples_(examples), sample_(sample), options_(options) {}

  std::vector<DecisionTree::Node> Build() {
    const size_t n = sample_.size();
    std::vector<std::vector<uint32_t>> sorted(kFeatureDim);
    for (size_t f = 0; f < kFeatureDim; ++f) {
      sorted[f].resize(n);
      std::iota(sorted[f].begin(), sorted[f].end(), 0u);
      std::stable_sort(sorted[f].begin(), sorted[f].end(),
                       [&](uint32_t a, uint32_t b) {
                         return Value(a, f) < Value(b, f);
                       });
    }
    goes_left_.assign(n, 0);
    Grow(std::move(sorted), 0);
    return std::move(nodes_);
  }

 private:
  double Value(uint32_t pos, size_t f) const {
    return examples_[sample_[pos]].values[f];
  }
  bool IsMatch(uint32_t pos) const {
    return examples_[sample_[pos]].label == Label::kMatch;
  }

  static double WeightedGini(double matches, double total) {
    if (total <= 0.0) return 0.0;
    const double others = total - matches;
    return total - (matches * matches + others * others) / total;
  }

  int Grow(std::vector<std::vector<uint32_t>> sorted, int depth) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    const std::vector<uint32_t>& all = sorted[0];
    const size_t n = all.size();
    size_t matches = 0;
    for (uint32_t p : all) matches += IsMatch(p) ? 1 : 0;
    const Label majority =
        2 * matches >= n ? Label::kMatch : Label::kNonMatch;
    nodes_[id].label = majority;

    const size_t min_leaf = static_cast<size_t>(std::max(1, options_.min_leaf));
    if (matches == 0 || matches == n || depth >= options_.max_depth ||
        n < 2 * min_leaf) {
      return id;
    }

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_score = 0.0;
    for (size_t f = 0; f < kFeatureDim; ++f) {
      const std::vector<uint32_t>& list = sorted[f];
      size_t left_matches = 0;
      for (size_t i = 0; i + 1 < n; ++i) {
        left_matches += IsMatch(list[i]) ? 1 : 0;
        const double lo = Value(list[i], f);
        const double hi = Value(list[i + 1], f);
        if (!(lo < hi)) continue;
        const size_t left = i + 1;
        if (left < min_leaf || n - left < min_leaf) continue;
        const double score =
            WeightedGini(static_cast<double>(left_matches),
                         static_cast<double>(left)) +
            WeightedGini(static_cast<double>(matches - left_matches),
                         static_cast<double>(n - left));
        if (best_feature < 0 || score < best_score - 1e-12) {
          double threshold = lo + (hi - lo) / 2.0;
          if (!(threshold < hi)) threshold = lo;
          best_feature = static_cast<int>(f);
          best_threshold = threshold;
          best_score = score;
        }
      }
    }
    if (best_feature < 0) return id;

    for (uint32_t p : all) {
      goes_left_[p] = Value(p, best_feature) <= best_threshold ? 1 : 0;
    }
    std::vector<std::vector<uint32_t>> left(kFeatureDim);
    std::vector<std::vector<uint32_t>> right(kFeatureDim);
    for (size_t f = 0; f < kFeatureDim; ++f) {
      for (uint32_t p : sorted[f]) {
        (goes_left_[p] ? left[f] : right[f]).push_back(p);
      }
    }
    sorted.clear();
    sorted.shrink_to_fit();
    nodes_[id].feature = best_feature;
    nodes_[id].threshold = best_threshold;
    const int l = Grow(std::move(left), depth + 1);
    nodes_[id].left = l;
    const int r = Grow(std::move(right), depth + 1);
    nodes_[id].right = r;
    return id;
  }

  std::span<const LabeledExample> examples_;
  std::span<const size_t> sample_;
  TreeOptions options_;
  std::vector<DecisionTree::Node> nodes_;
  std::vector<char> goes_left_;
};

}  // namespace

DecisionTree DecisionTree::Fit(std::span<const LabeledExample> examples,
                               std::span<const size_t> sample,
                               const TreeOptions& options) {
  if (sample.empty()) {
    throw Error(ErrorCode::kInsufficientTraining, "empty training sample");
  }
  return DecisionTree(TreeBuilder(examples, sample, options).Build());
}

Label DecisionTree::Predict(const FeatureValues& values) const {
  int at = 0;
  while (nodes_[at].feature >= 0) {
    const Node& node = nodes_[at];
    at = values[node.feature] <= node.threshold ? node.left : node.right;
  }
  return nodes_[at].label;
}

EnsembleModel EnsembleModel::Train(const TrainingSet& training, int k,
                                   uint64_t seed, const TreeOptions& options) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  if (!training.HasBothClasses()) {
    throw Error(ErrorCode::kInsufficientTraining,
                "training set needs both MATCH and NON_MATCH examples");
  }
  constexpr int kRedraws = 10;
  const auto examples = training.examples();
  const size_t n = examples.size();
  std::vector<size_t> full(n);
  std::iota(full.begin(), full.end(), size_t{0});

  std::vector<DecisionTree> trees;
  trees.reserve(k);
  std::vector<size_t> sample(n);
  for (int i = 0; i < k; ++i) {
    Rng rng(DeriveSeed(seed, static_cast<uint64_t>(i)));
    bool usable = false;
    for (int attempt = 0; attempt <= kRedraws && !usable; ++attempt) {
      bool has_match = false;
      bool has_non_match = false;
      for (size_t j = 0; j < n; ++j) {
        sample[j] = rng.UniformIndex(n);
        (examples[sample[j]].label == Label::kMatch ? has_match
                                                    : has_non_match) = true;
      }
      usable = has_match && has_non_match;
    }
    trees.push_back(DecisionTree::Fit(
        examples, usable ? std::span<const size_t>(sample) : full, options));
  }
  return EnsembleModel(seed, std::move(trees));
}

double EnsembleModel::PredictFraction(const FeatureValues& values) const {
  if (trees_.empty()) return 0.0;
  size_t votes = 0;
  for (const DecisionTree& tree : trees_) {
    if (tree.Predict(values) == Label::kMatch) ++votes;
  }
  return static_cast<double>(votes) / static_cast<double>(trees_.size());
}

Label EnsembleModel::Classify(const FeatureValues& values,
                              double threshold) const {
  return PredictFraction(values) >= threshold ? Label::kMatch
                                              : Label::kNonMatch;
}

void EnsembleModel::Serialize(std::ostream& out) const {
  out << "graphcr-ensemble 1\n";
  out << "k " << trees_.size() << " seed " << seed_ << '\n';
  char buf[64];
  for (const DecisionTree& tree : trees_) {
    out << "tree " << tree.nodes().size() << '\n';
    for (const DecisionTree::Node& node : tree.nodes()) {
      std::snprintf(buf, sizeof(buf), "%.17g", node.threshold);
      out << node.feature << ' ' << buf << ' ' << node.left << ' '
          << node.right << ' ' << static_cast<int>(node.label) << '\n';
    }
  }
}

EnsembleModel EnsembleModel::Deserialize(std::istream& in) {
  auto fail = [](const std::string& what) {
    return Error(ErrorCode::kParseError, "ensemble: " + what);
  };
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "graphcr-ensemble") {
    throw fail("bad header");
  }
  if (version != 1) throw fail("unsupported version");
  std::string k_tag, seed_tag;
  size_t k = 0;
  uint64_t seed = 0;
  if (!(in >> k_tag >> k >> seed_tag >> seed) || k_tag != "k" ||
      seed_tag != "seed") {
    throw fail("bad k/seed line");
  }
  std::vector<DecisionTree> trees;
  trees.reserve(k);
  for (size_t t = 0; t < k; ++t) {
    std::string tag;
    size_t count = 0;
    if (!(in >> tag >> count) || tag != "tree" || count == 0) {
      throw fail("bad tree header");
    }
    std::vector<DecisionTree::Node> nodes(count);
    for (int at = 0; at < static_cast<int>(count); ++at) {
      DecisionTree::Node& node = nodes[at];
      std::string threshold;
      int label = 0;
      if (!(in >> node.feature >> threshold >> node.left >> node.right >>
            label)) {
        throw fail("truncated node table");
      }
      node.threshold = std::strtod(threshold.c_str(), nullptr);
      node.label = label ? Label::kMatch : Label::kNonMatch;
      const int limit = static_cast<int>(count);
      if (node.feature >= static_cast<int>(kFeatureDim) ||
          (node.feature >= 0 && (node.left <= at || node.left >= limit ||
                                 node.right <= at || node.right >= limit))) {
        throw fail("node references out of range");
      }
    }
    trees.emplace_back(std::move(nodes));
  }
  return EnsembleModel(seed, std::move(trees));
}

}  // namespace graphcr
