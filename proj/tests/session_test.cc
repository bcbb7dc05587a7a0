#include <gtest/gtest.h>

#include <chrono>
#include <sstream>
#include <thread>

#include "graphcr/http_api.h"
#include "graphcr/io.h"
#include "graphcr/oracle.h"
#include "graphcr/session.h"
#include "graphcr/synthetic.h"
#include "httplib.h"

namespace graphcr {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class SessionTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("graphcr_session_" +
            std::string(::testing::UnitTest::GetInstance()
                            ->current_test_info()
                            ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_ / "data");
    SyntheticConfig config;
    config.entities = 80;
    config.seed = 5;
    data_ = GenerateSynthetic(config);
    std::ostringstream r, e, g;
    WriteRecords(r, data_.records);
    WriteEdges(e, data_.graph);
    WriteGold(g, *data_.gold);
    WriteFileAtomic(dir_ / "data" / "records.csv", r.str());
    WriteFileAtomic(dir_ / "data" / "edges.csv", e.str());
    WriteFileAtomic(dir_ / "data" / "gold.csv", g.str());
    StartServer();
  }

  void TearDown() override {
    StopServer();
    fs::remove_all(dir_);
  }

  void StartServer() {
    manager_ = std::make_unique<SessionManager>(dir_ / "state");
    manager_->RestoreAll();
    server_ = std::make_unique<httplib::Server>();
    RegisterRoutes(*server_, *manager_);
    port_ = server_->bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }

  void StopServer() {
    server_->stop();
    thread_.join();
    client_.reset();
    server_.reset();
    manager_.reset();
  }

  json CreateBody(int budget, uint64_t seed = 42) const {
    return {{"schema_version", 1},
            {"dataset",
             {{"records", (dir_ / "data" / "records.csv").string()},
              {"edges", (dir_ / "data" / "edges.csv").string()},
              {"gold", (dir_ / "data" / "gold.csv").string()}}},
            {"config",
             {{"budget", budget},
              {"iter_budget", 20},
              {"k", 15},
              {"strategy", "bootstrap-ext"},
              {"seed", seed}}}};
  }

  std::pair<int, json> Call(const std::string& method, const std::string& path,
                            const json& body = nullptr) {
    // A client per call keeps concurrent test threads apart.
    httplib::Client client("127.0.0.1", port_);
    httplib::Result res =
        method == "GET"
            ? client.Get(path)
            : client.Post(path, body.is_null() ? "" : body.dump(),
                            "application/json");
    EXPECT_TRUE(res) << method << " " << path;
    if (!res) return {0, nullptr};
    EXPECT_EQ(res->get_header_value("Content-Type"), "application/json");
    return {res->status, json::parse(res->body)};
  }

  std::string Create(int budget, uint64_t seed = 42) {
    auto [status, body] = Call("POST", "/sessions", CreateBody(budget, seed));
    EXPECT_EQ(status, 201) << body.dump();
    return body.value("session_id", "");
  }

  json WaitForQuestions(const std::string& id) {
    for (int i = 0; i < 2000; ++i) {
      auto [status, body] = Call("GET", "/sessions/" + id + "/next");
      EXPECT_EQ(status, 200);
      if (body["status"] != "TRAINING") return body;
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    ADD_FAILURE() << "session stuck in TRAINING";
    return nullptr;
  }

  json GoldAnswers(const json& questions) const {
    GoldOracle oracle(*data_.gold);
    json answers = json::array();
    for (const json& q : questions) {
      const Label label =
          oracle.Query(q["record_a"]["record_id"], q["record_b"]["record_id"]);
      answers.push_back(
          {{"question_id", q["question_id"]}, {"label", LabelName(label)}});
    }
    return {{"answers", answers}};
  }

  // Answers every batch with gold labels until no questions remain.
  void LabelToEnd(const std::string& id) {
    while (true) {
      const json next = WaitForQuestions(id);
      if (next["questions"].empty()) return;
      auto [status, body] = Call("POST", "/sessions/" + id + "/labels",
                                 GoldAnswers(next["questions"]));
      ASSERT_EQ(status, 200) << body.dump();
    }
  }

  std::string BatchModel(int budget, uint64_t seed) const {
    PipelineConfig config;
    config.selection = {budget, 20, Strategy::kBootstrapExt, 15, seed};
    const PreparedGraph prepared = PrepareGraph(data_.graph, {});
    GoldOracle oracle(*data_.gold);
    const auto result = RunActiveLearning(prepared.clusters, prepared.features,
                                          oracle, config.selection);
    std::ostringstream out;
    result.model.Serialize(out);
    return out.str();
  }

  std::string SessionModel(const std::string& id) {
    std::ostringstream out;
    manager_->Get(id)->TrainModel().Serialize(out);
    return out.str();
  }

  fs::path dir_;
  Dataset data_;
  std::unique_ptr<SessionManager> manager_;
  std::unique_ptr<httplib::Server> server_;
  std::unique_ptr<httplib::Client> client_;
  std::thread thread_;
  int port_ = 0;
};

TEST_F(SessionTest, LifecycleMatchesBatchRun) {
  const std::string id = Create(60);
  ASSERT_FALSE(id.empty());

  json next = WaitForQuestions(id);
  ASSERT_EQ(next["questions"].size(), 20u);
  const json& q = next["questions"][0];
  EXPECT_TRUE(q["record_a"]["attributes"].contains("title"));
  EXPECT_TRUE(q.contains("similarity"));
  EXPECT_EQ(next["schema_version"], 1);

  auto [status, body] = Call("POST", "/sessions/" + id + "/labels",
                             GoldAnswers(next["questions"]));
  ASSERT_EQ(status, 200);
  EXPECT_EQ(body["accepted"], 20);
  EXPECT_EQ(body["remaining_budget"], 40);
  auto [s2, st] = Call("GET", "/sessions/" + id + "/status");
  EXPECT_EQ(st["remaining_budget"], 40);
  EXPECT_EQ(st["labeled"], 20);

  LabelToEnd(id);
  auto [s3, done] = Call("GET", "/sessions/" + id + "/status");
  EXPECT_EQ(done["labeled"], 60);
  EXPECT_EQ(done["labeling_complete"], true);
  EXPECT_EQ(SessionModel(id), BatchModel(60, 42));

  auto [s4, repair] = Call("POST", "/sessions/" + id + "/repair");
  ASSERT_EQ(s4, 200) << repair.dump();
  EXPECT_EQ(repair["early_repair"], false);
  EXPECT_TRUE(repair.contains("quality"));
  auto [s5, clusters] = Call("GET", "/sessions/" + id + "/clusters");
  ASSERT_EQ(s5, 200);
  size_t records = 0;
  for (const json& c : clusters["clusters"]) records += c["records"].size();
  EXPECT_EQ(records, data_.records.size());
  auto [s6, final_status] = Call("GET", "/sessions/" + id + "/status");
  EXPECT_EQ(final_status["status"], "DONE");
  auto [s7, late] = Call("POST", "/sessions/" + id + "/labels",
                         json{{"answers", json::array()}});
  EXPECT_EQ(s7, 409);
}

TEST_F(SessionTest, ErrorStatuses) {
  EXPECT_EQ(Call("GET", "/sessions/nope/status").first, 404);
  EXPECT_EQ(Call("POST", "/sessions/nope/labels", json::object()).first, 404);
  EXPECT_EQ(Call("POST", "/sessions", json{{"dataset", 3}}).first, 400);
  json missing = CreateBody(40);
  missing["dataset"]["edges"] = (dir_ / "nope.csv").string();
  EXPECT_EQ(Call("POST", "/sessions", missing).first, 400);
  json bad_budget = CreateBody(5);
  EXPECT_EQ(Call("POST", "/sessions", bad_budget).first, 400);

  const std::string id = Create(60);
  const json next = WaitForQuestions(id);
  EXPECT_EQ(Call("GET", "/sessions/" + id + "/clusters").first, 409);
  EXPECT_EQ(Call("POST", "/sessions/" + id + "/labels", json{{"x", 1}}).first,
            400);
  auto raw = client_->Post("/sessions/" + id + "/labels", "{not json",
                           "application/json");
  EXPECT_EQ(raw->status, 400);

  // One valid answer, one unknown id: 409 but the valid one counts.
  json answers = GoldAnswers(json::array({next["questions"][0]}));
  answers["answers"].push_back({{"question_id", 999999}, {"label", "match"}});
  auto [status, body] = Call("POST", "/sessions/" + id + "/labels", answers);
  EXPECT_EQ(status, 409);
  EXPECT_EQ(body["accepted"], 1);
  EXPECT_EQ(body["rejected"], json::array({999999}));

  // Answering the same question again is a conflict.
  auto [again, again_body] = Call("POST", "/sessions/" + id + "/labels",
                                  GoldAnswers(json::array({next["questions"][0]})));
  EXPECT_EQ(again, 409);
  EXPECT_EQ(again_body["accepted"], 0);
}

TEST_F(SessionTest, EarlyRepairIsFlagged) {
  const std::string id = Create(100);
  const json next = WaitForQuestions(id);
  Call("POST", "/sessions/" + id + "/labels", GoldAnswers(next["questions"]));
  WaitForQuestions(id);
  auto [status, body] = Call("POST", "/sessions/" + id + "/repair");
  ASSERT_EQ(status, 200) << body.dump();
  EXPECT_EQ(body["early_repair"], true);
  EXPECT_EQ(body["labels_used"], 20);
}

TEST_F(SessionTest, RepairNeedsBothClasses) {
  const std::string id = Create(60);
  auto [status, body] = Call("POST", "/sessions/" + id + "/repair");
  EXPECT_EQ(status, 409);
  auto [s2, st] = Call("GET", "/sessions/" + id + "/status");
  EXPECT_EQ(st["status"], "AWAITING_LABELS");
}

TEST_F(SessionTest, SurvivesRestart) {
  const std::string id = Create(80);
  json next = WaitForQuestions(id);
  Call("POST", "/sessions/" + id + "/labels", GoldAnswers(next["questions"]));
  const json before = WaitForQuestions(id);
  auto [s1, status_before] = Call("GET", "/sessions/" + id + "/status");

  StopServer();
  StartServer();

  auto [s2, status_after] = Call("GET", "/sessions/" + id + "/status");
  ASSERT_EQ(s2, 200);
  EXPECT_EQ(status_after, status_before);
  EXPECT_EQ(WaitForQuestions(id), before);
  LabelToEnd(id);
  EXPECT_EQ(SessionModel(id), BatchModel(80, 42));
}

TEST_F(SessionTest, RepairedStateSurvivesRestart) {
  const std::string id = Create(40);
  LabelToEnd(id);
  auto [s1, summary] = Call("POST", "/sessions/" + id + "/repair");
  ASSERT_EQ(s1, 200);
  auto [s2, clusters] = Call("GET", "/sessions/" + id + "/clusters");
  StopServer();
  StartServer();
  auto [s3, restored] = Call("GET", "/sessions/" + id + "/clusters");
  ASSERT_EQ(s3, 200);
  EXPECT_EQ(restored, clusters);
}

TEST_F(SessionTest, ConcurrentSessionsAreIsolated) {
  const std::string a = Create(40, 1);
  const std::string b = Create(40, 2);
  EXPECT_NE(a, b);
  std::thread ta([&] { LabelToEnd(a); });
  std::thread tb([&] { LabelToEnd(b); });
  ta.join();
  tb.join();
  EXPECT_EQ(SessionModel(a), BatchModel(40, 1));
  EXPECT_EQ(SessionModel(b), BatchModel(40, 2));
}

}  // namespace
}  // namespace graphcr
