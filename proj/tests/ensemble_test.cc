#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "graphcr/ensemble.h"
#include "graphcr/error.h"

namespace graphcr {
namespace {

LabeledExample Example(int id, double x0, double x1, Label label) {
  LabeledExample e;
  e.vector_id = id;
  e.values[0] = x0;
  e.values[1] = x1;
  e.label = label;
  return e;
}

TrainingSet Separable(int n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  TrainingSet t;
  for (int i = 0; i < n; ++i) {
    const double x0 = unit(rng), x1 = unit(rng);
    t.Add(Example(i, x0, x1, x0 + 0.1 * x1 > 0.5 ? Label::kMatch
                                                  : Label::kNonMatch));
  }
  return t;
}

TEST(EnsembleTest, Uncertainty) {
  static_assert(Uncertainty(0.5) == 0.25);
  EXPECT_EQ(Uncertainty(0.0), 0.0);
  EXPECT_EQ(Uncertainty(1.0), 0.0);
  EXPECT_DOUBLE_EQ(Uncertainty(0.2), Uncertainty(0.8));
}

TEST(EnsembleTest, LabelNames) {
  EXPECT_EQ(ParseLabel("match"), Label::kMatch);
  EXPECT_EQ(ParseLabel("0"), Label::kNonMatch);
  EXPECT_STREQ(LabelName(Label::kNonMatch), "non_match");
  EXPECT_THROW(ParseLabel("maybe"), Error);
}

TEST(EnsembleTest, TrainingSetRejectsDuplicates) {
  TrainingSet t;
  t.Add(Example(3, 0, 0, Label::kMatch));
  EXPECT_THROW(t.Add(Example(3, 1, 1, Label::kNonMatch)), Error);
  EXPECT_FALSE(t.HasBothClasses());
}

TEST(EnsembleTest, TreeFitsTrainingData) {
  const TrainingSet t = Separable(60, 1);
  std::vector<size_t> all(t.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = i;
  const auto tree = DecisionTree::Fit(t.examples(), all);
  for (const auto& e : t.examples()) EXPECT_EQ(tree.Predict(e.values), e.label);
}

TEST(EnsembleTest, SplitPicksLowestFeatureOnTie) {
  // Feature 0 and 1 separate equally well.
  TrainingSet t;
  t.Add(Example(0, 0.0, 0.0, Label::kNonMatch));
  t.Add(Example(1, 1.0, 1.0, Label::kMatch));
  const std::vector<size_t> all = {0, 1};
  const auto tree = DecisionTree::Fit(t.examples(), all);
  ASSERT_EQ(tree.nodes().size(), 3u);
  EXPECT_EQ(tree.nodes()[0].feature, 0);
  EXPECT_DOUBLE_EQ(tree.nodes()[0].threshold, 0.5);
}

TEST(EnsembleTest, PureSampleGivesLeaf) {
  TrainingSet t;
  t.Add(Example(0, 0.0, 0.0, Label::kMatch));
  t.Add(Example(1, 1.0, 0.0, Label::kMatch));
  const std::vector<size_t> all = {0, 1};
  const auto tree = DecisionTree::Fit(t.examples(), all);
  ASSERT_EQ(tree.nodes().size(), 1u);
  EXPECT_EQ(tree.nodes()[0].label, Label::kMatch);
}

TEST(EnsembleTest, TrainIsSeedDeterministic) {
  const TrainingSet t = Separable(40, 2);
  const auto a = EnsembleModel::Train(t, 25, 9);
  const auto b = EnsembleModel::Train(t, 25, 9);
  std::ostringstream sa, sb;
  a.Serialize(sa);
  b.Serialize(sb);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(a.k(), 25);
}

TEST(EnsembleTest, NeedsBothClasses) {
  TrainingSet t;
  t.Add(Example(0, 0.0, 0.0, Label::kMatch));
  EXPECT_THROW(EnsembleModel::Train(t, 5, 1), Error);
}

TEST(EnsembleTest, TwoExamplesStillTrain) {
  // Bootstraps of two items miss a class half the time; redraws and the
  // fallback keep every tree two-class.
  TrainingSet t;
  t.Add(Example(0, 0.0, 0.0, Label::kNonMatch));
  t.Add(Example(1, 1.0, 0.0, Label::kMatch));
  const auto m = EnsembleModel::Train(t, 50, 4);
  EXPECT_DOUBLE_EQ(m.PredictFraction(t.examples()[1].values), 1.0);
  EXPECT_DOUBLE_EQ(m.PredictFraction(t.examples()[0].values), 0.0);
}

TEST(EnsembleTest, SerializeRoundTrip) {
  const TrainingSet t = Separable(50, 3);
  const auto m = EnsembleModel::Train(t, 10, 5);
  std::stringstream buf;
  m.Serialize(buf);
  const auto back = EnsembleModel::Deserialize(buf);
  EXPECT_EQ(back.k(), m.k());
  EXPECT_EQ(back.seed(), m.seed());
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    FeatureValues v{};
    v[0] = unit(rng);
    v[1] = unit(rng);
    EXPECT_EQ(back.PredictFraction(v), m.PredictFraction(v));
  }
}

TEST(EnsembleTest, DeserializeRejectsGarbage) {
  std::istringstream bad("graphcr-ensemble 2\n");
  EXPECT_THROW(EnsembleModel::Deserialize(bad), Error);
  std::istringstream cyclic(
      "graphcr-ensemble 1\nk 1 seed 0\ntree 2\n0 0.5 1 0 0\n"
      "-1 0 -1 -1 1\n");
  EXPECT_THROW(EnsembleModel::Deserialize(cyclic), Error);
}

TEST(EnsembleTest, ClassifyThreshold) {
  const TrainingSet t = Separable(50, 6);
  const auto m = EnsembleModel::Train(t, 20, 1);
  FeatureValues v{};
  v[0] = 0.95;
  EXPECT_EQ(m.Classify(v), Label::kMatch);
  EXPECT_EQ(m.Classify(v, 1.01), Label::kNonMatch);
}

}  // namespace
}  // namespace graphcr
