#include <gtest/gtest.h>

#include <sstream>

#include "graphcr/error.h"
#include "graphcr/io.h"
#include "graphcr/synthetic.h"

namespace graphcr {
namespace {

const char kRecords[] =
    "record_id,source_id,title,artist\n"
    "a1,s1,\"Hello, World\",x\n"
    "b1,s2,\"Say \"\"hi\"\"\",y\n"
    "c1,s3,plain,\n";

std::vector<Record> Records() {
  std::istringstream in(kRecords);
  return ReadRecords(in);
}

Error EdgeError(const std::string& body) {
  const auto records = Records();
  std::istringstream in("source_record_id,target_record_id,similarity\n" +
                        body);
  try {
    ReadEdges(in, records);
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "no error for " << body;
  return Error(ErrorCode::kIoError, "");
}

TEST(IoTest, RecordsWithQuoting) {
  const auto records = Records();
  ASSERT_EQ(records.size(), 3u);
  EXPECT_EQ(records[0].attributes[0],
            (std::pair<std::string, std::string>{"title", "Hello, World"}));
  EXPECT_EQ(records[1].attributes[0].second, "Say \"hi\"");
  EXPECT_EQ(records[2].attributes[1].second, "");
  std::ostringstream out;
  WriteRecords(out, records);
  std::istringstream back(out.str());
  EXPECT_EQ(ReadRecords(back), records);
}

TEST(IoTest, EdgeErrorsCarryLineNumbers) {
  Error e = EdgeError("a1,b1,0.5\na1,zz,0.5\n");
  EXPECT_EQ(e.code(), ErrorCode::kUnknownRecord);
  EXPECT_EQ(e.line(), 3);
  e = EdgeError("a1,a1,0.5\n");
  EXPECT_EQ(e.code(), ErrorCode::kSelfLoop);
  EXPECT_EQ(e.line(), 2);
  EXPECT_EQ(EdgeError("a1,b1,1.2\n").code(), ErrorCode::kInvalidSimilarity);
  EXPECT_EQ(EdgeError("a1,b1,abc\n").code(), ErrorCode::kParseError);
  e = EdgeError("a1,b1,0.5\nb1,a1,0.4\n");
  EXPECT_EQ(e.code(), ErrorCode::kDuplicateEdge);
  EXPECT_EQ(e.line(), 3);
}

TEST(IoTest, MissingHeaderRejected) {
  std::istringstream in("id,src\n");
  EXPECT_THROW(ReadRecords(in), Error);
}

TEST(IoTest, ClustersRoundTrip) {
  const Partition p = {{"b", "a"}, {"c"}};
  std::ostringstream out;
  WriteClusters(out, p);
  EXPECT_EQ(out.str(), "record_id,cluster_id\na,0\nb,0\nc,1\n");
  std::istringstream in(out.str());
  EXPECT_EQ(ReadClusters(in), (Partition{{"a", "b"}, {"c"}}));
}

TEST(IoTest, GoldRoundTrip) {
  const GoldStandard gold = {{"x", "e1"}, {"y", "e1"}, {"z", "e2"}};
  std::ostringstream out;
  WriteGold(out, gold);
  std::istringstream in(out.str());
  EXPECT_EQ(ReadGold(in), gold);
}

TEST(IoTest, DoublesRoundTrip) {
  for (double x : {0.1, 1.0 / 3.0, 0.0, 1.0, 0.123456789012345}) {
    EXPECT_EQ(*ParseDouble(FormatDouble(x)), x);
  }
  EXPECT_FALSE(ParseDouble("0.5x"));
  EXPECT_FALSE(ParseDouble(""));
}

TEST(IoTest, SyntheticFilesReload) {
  SyntheticConfig config;
  config.entities = 30;
  const Dataset data = GenerateSynthetic(config);
  const auto dir = std::filesystem::temp_directory_path() / "graphcr_io_test";
  std::filesystem::create_directories(dir);
  std::ostringstream r, e, g;
  WriteRecords(r, data.records);
  WriteEdges(e, data.graph);
  WriteGold(g, *data.gold);
  WriteFileAtomic(dir / "records.csv", r.str());
  WriteFileAtomic(dir / "edges.csv", e.str());
  WriteFileAtomic(dir / "gold.csv", g.str());
  const Dataset back =
      LoadDataset(dir / "records.csv", dir / "edges.csv", dir / "gold.csv");
  EXPECT_TRUE(back.graph == data.graph);
  EXPECT_EQ(*back.gold, *data.gold);
  EXPECT_EQ(back.records, data.records);
  std::filesystem::remove_all(dir);
}

TEST(IoTest, ReportIsStable) {
  ExperimentCell cell;
  cell.dataset = "d";
  cell.budget = 10;
  cell.f1 = 0.5;
  cell.repetitions = 1;
  cell.runs = {QualityReport{}};
  cell.seeds = {7};
  cell.baseline_runs = {0.25};
  const auto j = ReportJson(cell);
  EXPECT_EQ(j.begin().key(), "dataset");
  EXPECT_EQ(j["runs"][0]["seed"], 7);
  std::ostringstream a, b;
  const std::vector<ExperimentCell> cells = {cell};
  WriteReport(a, cells);
  WriteReport(b, cells);
  EXPECT_EQ(a.str(), b.str());
}

TEST(IoTest, ReplayOracleConflicts) {
  ReplayOracle oracle;
  oracle.Add("a", "b", Label::kMatch);
  EXPECT_EQ(oracle.Query("b", "a"), Label::kMatch);
  EXPECT_THROW(oracle.Add("b", "a", Label::kNonMatch), Error);
  EXPECT_THROW(oracle.Query("a", "c"), Error);
}

}  // namespace
}  // namespace graphcr
