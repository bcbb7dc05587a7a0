#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "graphcr/active_learning.h"
#include "graphcr/error.h"
#include "graphcr/pipeline.h"
#include "graphcr/synthetic.h"

namespace graphcr {
namespace {

class CountingOracle : public Oracle {
 public:
  explicit CountingOracle(const GoldStandard& gold) : inner_(gold) {}
  Label Query(const std::string& a, const std::string& b) override {
    ++calls;
    asked.insert(std::minmax(a, b));
    return inner_.Query(a, b);
  }
  int calls = 0;
  std::set<std::pair<std::string, std::string>> asked;

 private:
  GoldOracle inner_;
};

struct Fixture {
  Dataset data;
  PreparedGraph prepared;
};

const Fixture& Small() {
  static const Fixture f = [] {
    SyntheticConfig config;
    config.entities = 80;
    config.seed = 3;
    Fixture out{GenerateSynthetic(config), {}};
    out.prepared = PrepareGraph(out.data.graph, {});
    return out;
  }();
  return f;
}

TEST(ActiveLearningTest, ConfigValidation) {
  SelectionConfig c{10, 20, Strategy::kBootstrap, 5, 1};
  EXPECT_THROW(c.Validate(), Error);
  c.iter_budget = 0;
  EXPECT_THROW(c.Validate(), Error);
  c = {10, 5, Strategy::kBootstrap, 0, 1};
  EXPECT_THROW(c.Validate(), Error);
  EXPECT_EQ(ParseStrategy("bootstrap-ext"), Strategy::kBootstrapExt);
  EXPECT_THROW(ParseStrategy("random"), Error);
}

TEST(ActiveLearningTest, CosineAndAverage) {
  FeatureValues a{}, b{}, zero{};
  a[0] = 1.0;
  b[1] = 2.0;
  EXPECT_DOUBLE_EQ(CosineDistance(a, a), 0.0);
  EXPECT_DOUBLE_EQ(CosineDistance(a, b), 1.0);
  EXPECT_DOUBLE_EQ(CosineDistance(a, zero), 1.0);
  const std::vector<FeatureValues> t = {a, b};
  EXPECT_DOUBLE_EQ(AvgCosineDistance(a, t), 0.5);
  EXPECT_DOUBLE_EQ(AvgCosineDistance(a, {}), 1.0);
}

TEST(ActiveLearningTest, SizeWeightsPad) {
  const auto w = SizeWeights({0, 0.5, 0.5}, {0, 1.0, 0, 0});
  ASSERT_EQ(w.size(), 4u);
  EXPECT_DOUBLE_EQ(w[1], -0.5);
  EXPECT_DOUBLE_EQ(w[2], 0.5);
  EXPECT_DOUBLE_EQ(w[3], 0.0);
}

TEST(ActiveLearningTest, ScoreAndRank) {
  std::vector<CandidateMeasures> pool = {
      {.vector_id = 4, .unc = 0.25, .weight = 0.0, .cos = 0.25},
      {.vector_id = 1, .unc = 0.0, .weight = 1.0, .cos = 0.5},
      {.vector_id = 2, .unc = 0.125, .weight = 0.5, .cos = 0.25}};
  auto ext = pool;
  ScoreCandidates(Strategy::kBootstrapExt, ext);
  EXPECT_DOUBLE_EQ(ext[0].score, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(ext[1].score, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(ext[2].score, 1.0 / 3.0);
  RankCandidates(ext);
  EXPECT_EQ(ext[0].vector_id, 1);
  // Equal scores fall back to ascending vector id.
  EXPECT_EQ(ext[1].vector_id, 2);
  EXPECT_EQ(ext[2].vector_id, 4);

  auto plain = pool;
  ScoreCandidates(Strategy::kBootstrap, plain);
  RankCandidates(plain);
  EXPECT_EQ(plain[0].vector_id, 4);
}

TEST(ActiveLearningTest, ConstantMeasureScoresZero) {
  std::vector<CandidateMeasures> pool = {
      {.vector_id = 0, .unc = 0.1, .weight = 0.3, .cos = 0.5},
      {.vector_id = 1, .unc = 0.1, .weight = 0.3, .cos = 0.9}};
  ScoreCandidates(Strategy::kBootstrapExt, pool);
  EXPECT_DOUBLE_EQ(pool[0].score, 0.0);
  EXPECT_DOUBLE_EQ(pool[1].score, 1.0 / 3.0);
}

TEST(ActiveLearningTest, DistributionsSumToOne) {
  const auto& f = Small();
  const ClusterSizes sizes(f.prepared.clusters);
  const auto dc = ClusterSizeDistribution(f.prepared.clusters);
  double total = 0.0;
  for (double x : dc) total += x;
  EXPECT_NEAR(total, 1.0, 1e-12);
  const std::vector<int> labeled = {0, 1, 2};
  const auto dt = TrainingDistribution(f.prepared.features, sizes, labeled,
                                       sizes.max_size() + 1);
  total = 0.0;
  for (double x : dt) total += x;
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(ActiveLearningTest, SeedingTakesBothEnds) {
  const auto& f = Small();
  LabelSession session(f.prepared.clusters, f.prepared.features,
                       {100, 7, Strategy::kBootstrap, 5, 1});
  ASSERT_TRUE(session.Advance());
  const auto& batch = session.pending();
  ASSERT_EQ(batch.size(), 7u);
  std::vector<double> sims;
  for (const auto& v : f.prepared.features.vectors()) {
    sims.push_back(v.values[kSimilarity]);
  }
  std::sort(sims.begin(), sims.end());
  for (int i = 0; i < 4; ++i) {
    EXPECT_TRUE(batch[i].seeding);
    EXPECT_GE(f.prepared.features.vector(batch[i].vector_id).values[kSimilarity],
              sims[sims.size() - 4]);
  }
  for (int i = 4; i < 7; ++i) {
    EXPECT_LE(f.prepared.features.vector(batch[i].vector_id).values[kSimilarity],
              sims[2]);
  }
  EXPECT_EQ(session.remaining_budget(), 93);
  // Advance with pending questions issues nothing new.
  EXPECT_TRUE(session.Advance());
  EXPECT_EQ(session.pending().size(), 7u);
  EXPECT_THROW(session.Answer(-5, Label::kMatch), Error);
}

TEST(ActiveLearningTest, BudgetAndIterationAccounting) {
  const auto& f = Small();
  for (Strategy s : {Strategy::kBootstrap, Strategy::kBootstrapExt}) {
    CountingOracle oracle(*f.data.gold);
    const auto result = RunActiveLearning(f.prepared.clusters,
                                          f.prepared.features, oracle,
                                          {40, 20, s, 10, 5});
    EXPECT_EQ(oracle.calls, 40);
    EXPECT_EQ(result.iterations, 2);
    EXPECT_EQ(result.training.size(), 40u);
    EXPECT_EQ(result.audit.size(), 40u);
    EXPECT_EQ(oracle.asked.size(), 40u);
    EXPECT_EQ(result.audit.front().question.iteration, 1);
    EXPECT_EQ(result.audit.back().question.iteration, 2);
  }
}

TEST(ActiveLearningTest, UnevenLastBatch) {
  const auto& f = Small();
  CountingOracle oracle(*f.data.gold);
  const auto result = RunActiveLearning(
      f.prepared.clusters, f.prepared.features, oracle,
      {45, 20, Strategy::kBootstrapExt, 10, 5});
  EXPECT_EQ(oracle.calls, 45);
  EXPECT_EQ(result.iterations, 3);
}

TEST(ActiveLearningTest, BudgetBeyondPoolLabelsEverything) {
  const auto& f = Small();
  CountingOracle oracle(*f.data.gold);
  const auto result = RunActiveLearning(
      f.prepared.clusters, f.prepared.features, oracle,
      {100000, 50, Strategy::kBootstrap, 5, 5});
  EXPECT_EQ(result.training.size(), f.prepared.features.size());
  EXPECT_EQ(static_cast<size_t>(oracle.calls), f.prepared.features.size());
}

TEST(ActiveLearningTest, SameSeedSameQuestions) {
  const auto& f = Small();
  auto ids = [&](uint64_t seed) {
    GoldOracle oracle(*f.data.gold);
    const auto r = RunActiveLearning(f.prepared.clusters, f.prepared.features,
                                     oracle,
                                     {60, 10, Strategy::kBootstrapExt, 10,
                                      seed});
    std::vector<int> out;
    for (const auto& a : r.audit) out.push_back(a.question.vector_id);
    return out;
  };
  EXPECT_EQ(ids(17), ids(17));
}

TEST(ActiveLearningTest, ExtMeasuresFilledAfterSeeding) {
  const auto& f = Small();
  GoldOracle oracle(*f.data.gold);
  const auto r = RunActiveLearning(f.prepared.clusters, f.prepared.features,
                                   oracle,
                                   {60, 20, Strategy::kBootstrapExt, 10, 2});
  bool saw_informative = false;
  for (const auto& a : r.audit) {
    if (a.question.seeding) continue;
    saw_informative = true;
    EXPECT_GE(a.question.measures.score, 0.0);
    EXPECT_LE(a.question.measures.score, 1.0);
    EXPECT_LE(a.question.measures.unc, 0.25);
  }
  EXPECT_TRUE(saw_informative);
}

}  // namespace
}  // namespace graphcr
