#include <gtest/gtest.h>

#include <sstream>

#include "graphcr/error.h"
#include "graphcr/features.h"
#include "graphcr/metrics.h"
#include "test_util.h"

namespace graphcr {
namespace {

using testing::MakeGraph;

TEST(FeaturesTest, RoundingAndBlockOrder) {
  EXPECT_DOUBLE_EQ(RoundFeature(0.12345649), 0.123456);
  EXPECT_DOUBLE_EQ(RoundFeature(0.1234565), 0.123457);
  const NodeBlock a = {0.2, 0.5, 0.0, 1.0};
  const NodeBlock b = {0.2, 0.4, 9.0, 0.0};
  EXPECT_EQ(CanonicalBlockOrder(a, b), CanonicalBlockOrder(b, a));
  EXPECT_EQ(CanonicalBlockOrder(a, b).first, b);
  // Differences below the rounding grain do not decide the order.
  const NodeBlock c = {0.2000000001, 0.5, 0.0, 0.0};
  const NodeBlock d = {0.2, 0.5, 0.0, 1.0};
  EXPECT_EQ(CanonicalBlockOrder(c, d).first, c);
}

TEST(FeaturesTest, EdgeFeatureLayout) {
  const auto g = MakeGraph({{"a-1", "b-1", 0.9}, {"b-1", "c-1", 0.4}});
  const auto metrics = ComputeClusterMetrics(g);
  const auto f = EdgeFeatures(g, metrics);
  ASSERT_EQ(f.size(), 2u);
  EXPECT_DOUBLE_EQ(f[0][kSimilarity], 0.9);
  EXPECT_DOUBLE_EQ(f[0][kIsBridge], 1.0);
  EXPECT_DOUBLE_EQ(f[0][kEdgeBetweenness], 2.0);
  EXPECT_DOUBLE_EQ(f[0][kCompleteRatio], 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(f[0][kLinkCategory], 2.0);
  // The leaf endpoint has betweenness 0 and sorts first.
  EXPECT_DOUBLE_EQ(f[0][kFirstBlock + 2], 0.0);
  EXPECT_DOUBLE_EQ(f[0][kSecondBlock + 2], 1.0);
}

TEST(FeaturesTest, SymmetricEdgesShareOneVector) {
  // Path a-b-c with equal weights: both edges are mirror images.
  const auto g = MakeGraph({{"a", "b", 0.5}, {"b", "c", 0.5}});
  const std::vector<Cluster> clusters = {{0, g}};
  const auto space = BuildFeatures(clusters);
  ASSERT_EQ(space.size(), 1u);
  EXPECT_EQ(space.vector(0).member_edges.size(), 2u);
  EXPECT_EQ(space.VectorIdFor(0, 0), 0);
  EXPECT_EQ(space.VectorIdFor(0, 1), 0);
  EXPECT_THROW(space.VectorIdFor(5, 0), Error);
}

TEST(FeaturesTest, VectorsSharedAcrossClusters) {
  const auto g1 = MakeGraph({{"a", "b", 0.7}});
  const auto g2 = MakeGraph({{"x", "y", 0.7}});
  const auto g3 = MakeGraph({{"p", "q", 0.3}});
  const std::vector<Cluster> clusters = {{2, g3}, {0, g1}, {1, g2}};
  const auto space = BuildFeatures(clusters);
  ASSERT_EQ(space.size(), 2u);
  // Ids follow first appearance in cluster id order.
  EXPECT_EQ(space.vector(0).member_edges,
            (std::vector<EdgeRef>{{0, 0}, {1, 0}}));
  EXPECT_DOUBLE_EQ(space.vector(1).values[kSimilarity], 0.3);
}

TEST(FeaturesTest, NormalizeMinMax) {
  const auto g1 = MakeGraph({{"a", "b", 0.2}});
  const auto g2 = MakeGraph({{"x", "y", 0.6}});
  const std::vector<Cluster> clusters = {{0, g1}, {1, g2}};
  const auto space = BuildFeatures(clusters);
  const auto lo = space.Normalize(space.vector(0).values);
  const auto hi = space.Normalize(space.vector(1).values);
  EXPECT_DOUBLE_EQ(lo[kSimilarity], 0.0);
  EXPECT_DOUBLE_EQ(hi[kSimilarity], 1.0);
  // Constant dimension.
  EXPECT_DOUBLE_EQ(hi[kCompleteRatio], 0.0);
}

TEST(FeaturesTest, MatrixExport) {
  const auto g = MakeGraph({{"a", "b", 0.25}});
  const std::vector<Cluster> clusters = {{0, g}};
  std::ostringstream out;
  WriteFeatureMatrix(out, BuildFeatures(clusters));
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find(',')), "a_pagerank");
  EXPECT_NE(text.find("0.250000"), std::string::npos);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
}

}  // namespace
}  // namespace graphcr
