#include "graphcr/session.h"

#include <random>
#include <sstream>

#include "graphcr/io.h"
#include "graphcr/rng.h"

namespace graphcr {

using nlohmann::json;

const char* SessionStatusName(SessionStatus status) {
  switch (status) {
    case SessionStatus::kAwaitingLabels: return "AWAITING_LABELS";
    case SessionStatus::kTraining: return "TRAINING";
    case SessionStatus::kRepairing: return "REPAIRING";
    case SessionStatus::kDone: return "DONE";
  }
  return "UNKNOWN";
}

namespace {

SessionStatus ParseStatus(const std::string& text) {
  if (text == "TRAINING") return SessionStatus::kTraining;
  if (text == "REPAIRING") return SessionStatus::kRepairing;
  if (text == "DONE") return SessionStatus::kDone;
  return SessionStatus::kAwaitingLabels;
}

template <typename T>
T Field(const json& obj, const char* key, T fallback) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ApiError(400, std::string("field '") + key + "' has the wrong type");
  }
}

std::string RequiredString(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string() || it->get<std::string>().empty()) {
    throw ApiError(400, std::string("missing string field '") + key + "'");
  }
  return it->get<std::string>();
}

}  // namespace

SessionSpec ParseSessionSpec(const json& body) {
  if (!body.is_object()) throw ApiError(400, "body must be an object");
  SessionSpec spec;
  const json& dataset = body.contains("dataset") ? body["dataset"] : body;
  if (!dataset.is_object()) throw ApiError(400, "'dataset' must be an object");
  spec.records = std::filesystem::absolute(RequiredString(dataset, "records"));
  spec.edges = std::filesystem::absolute(RequiredString(dataset, "edges"));
  const std::string gold = Field<std::string>(dataset, "gold", "");
  if (!gold.empty()) spec.gold = std::filesystem::absolute(gold);

  const json& config = body.contains("config") ? body["config"] : json::object();
  if (!config.is_object()) throw ApiError(400, "'config' must be an object");
  spec.selection.budget = Field<int>(config, "budget", 0);
  spec.selection.iter_budget = Field<int>(config, "iter_budget", 20);
  spec.selection.k = Field<int>(config, "k", 100);
  spec.selection.seed = Field<uint64_t>(config, "seed", 42);
  try {
    spec.selection.strategy = ParseStrategy(
        Field<std::string>(config, "strategy", "bootstrap-ext"));
    spec.selection.Validate();
  } catch (const Error& e) {
    throw ApiError(400, e.what());
  }
  spec.threshold = Field<double>(config, "threshold", 0.0);
  spec.match_threshold = Field<double>(config, "match_threshold", 0.5);
  return spec;
}

json SessionSpecJson(const SessionSpec& spec) {
  json dataset = {{"records", spec.records.string()},
                  {"edges", spec.edges.string()}};
  if (!spec.gold.empty()) dataset["gold"] = spec.gold.string();
  json config = {{"budget", spec.selection.budget},
                 {"iter_budget", spec.selection.iter_budget},
                 {"k", spec.selection.k},
                 {"seed", spec.selection.seed},
                 {"strategy", StrategyName(spec.selection.strategy)},
                 {"threshold", spec.threshold},
                 {"match_threshold", spec.match_threshold}};
  return {{"dataset", dataset}, {"config", config}};
}

Session::Session(std::string id, SessionSpec spec,
                 std::filesystem::path snapshot_path)
    : Session(std::move(id), std::move(spec), std::move(snapshot_path),
              false) {}

Session::Session(std::string id, SessionSpec spec,
                 std::filesystem::path snapshot_path, bool defer_first_batch)
    : id_(std::move(id)),
      spec_(std::move(spec)),
      snapshot_path_(std::move(snapshot_path)) {
  ws_ = std::make_unique<Workspace>();
  ws_->dataset = LoadDataset(spec_.records, spec_.edges, spec_.gold);
  ws_->prepared = PrepareGraph(ws_->dataset.graph, {spec_.threshold, 0.0, 0});
  ws_->learner = std::make_unique<LabelSession>(
      ws_->prepared.clusters, ws_->prepared.features, spec_.selection);
  for (size_t i = 0; i < ws_->dataset.records.size(); ++i) {
    record_index_.emplace(ws_->dataset.records[i].record_id, i);
  }
  if (defer_first_batch) return;
  std::lock_guard<std::mutex> lock(mu_);
  ws_->learner->Advance();
  PersistLocked();
}

Session::~Session() {
  if (worker_.joinable()) worker_.join();
}

std::unique_ptr<Session> Session::Restore(
    const std::filesystem::path& snapshot_path) {
  json snap;
  try {
    snap = json::parse(ReadFile(snapshot_path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, "snapshot '" +
                                            snapshot_path.string() +
                                            "': " + e.what());
  }
  if (snap.value("schema_version", 0) != kSchemaVersion) {
    throw Error(ErrorCode::kParseError,
                "snapshot '" + snapshot_path.string() +
                    "' has an unsupported schema_version");
  }
  SessionSpec spec = ParseSessionSpec(snap.at("spec"));
  std::unique_ptr<Session> session(
      new Session(snap.at("session_id").get<std::string>(), std::move(spec),
                  snapshot_path, true));

  std::map<int, Label> log;
  std::vector<std::pair<int, Label>> ordered;
  for (const json& a : snap.at("answers")) {
    const int id = a.at("question_id").get<int>();
    const Label label = ParseLabel(a.at("label").get<std::string>());
    log.emplace(id, label);
    ordered.emplace_back(id, label);
  }

  std::lock_guard<std::mutex> lock(session->mu_);
  LabelSession& learner = *session->ws_->learner;
  size_t replayed = 0;
  while (learner.Advance()) {
    const std::vector<Question> batch = learner.pending();
    for (const Question& q : batch) {
      auto it = log.find(q.vector_id);
      if (it == log.end()) continue;
      learner.Answer(q.vector_id, it->second);
      ++replayed;
    }
    if (!learner.pending().empty()) break;
  }
  if (replayed != log.size()) {
    throw Error(ErrorCode::kParseError,
                "snapshot '" + snapshot_path.string() +
                    "' answers do not replay against its dataset");
  }
  session->answers_ = std::move(ordered);
  if (ParseStatus(snap.value("status", "")) == SessionStatus::kDone) {
    session->RepairLocked();
  }
  session->PersistLocked();
  return session;
}

json Session::RecordJson(const std::string& record_id) const {
  const Record& r = ws_->dataset.records[record_index_.at(record_id)];
  nlohmann::ordered_json attributes = nlohmann::ordered_json::object();
  for (const auto& [key, value] : r.attributes) attributes[key] = value;
  json out = {{"record_id", r.record_id}, {"source_id", r.source_id}};
  out["attributes"] = json::parse(attributes.dump());
  return out;
}

json Session::QuestionJson(const Question& q) const {
  return {{"question_id", q.vector_id},
          {"record_a", RecordJson(q.record_a)},
          {"record_b", RecordJson(q.record_b)},
          {"similarity", q.similarity}};
}

json Session::Next() {
  std::lock_guard<std::mutex> lock(mu_);
  json questions = json::array();
  if (status_ == SessionStatus::kAwaitingLabels) {
    for (const Question& q : ws_->learner->pending()) {
      questions.push_back(QuestionJson(q));
    }
  }
  return {{"schema_version", kSchemaVersion},
          {"status", SessionStatusName(status_)},
          {"questions", std::move(questions)}};
}

json Session::SubmitLabels(const json& body) {
  if (!body.is_object() || !body.contains("answers") ||
      !body["answers"].is_array()) {
    throw ApiError(400, "body must be {\"answers\": [...]}");
  }
  std::vector<std::pair<int, Label>> parsed;
  for (const json& a : body["answers"]) {
    if (!a.is_object() || !a.contains("question_id") ||
        !a["question_id"].is_number_integer() || !a.contains("label") ||
        !a["label"].is_string()) {
      throw ApiError(400, "each answer needs integer question_id and label");
    }
    try {
      parsed.emplace_back(a["question_id"].get<int>(),
                          ParseLabel(a["label"].get<std::string>()));
    } catch (const Error& e) {
      throw ApiError(400, e.what());
    }
  }

  std::lock_guard<std::mutex> lock(mu_);
  if (status_ != SessionStatus::kAwaitingLabels) {
    throw ApiError(409, std::string("session is ") +
                            SessionStatusName(status_) +
                            "; labels are not accepted");
  }
  LabelSession& learner = *ws_->learner;
  int accepted = 0;
  json rejected = json::array();
  for (const auto& [id, label] : parsed) {
    bool is_pending = false;
    for (const Question& q : learner.pending()) {
      if (q.vector_id == id) is_pending = true;
    }
    if (!is_pending) {
      rejected.push_back(id);
      continue;
    }
    learner.Answer(id, label);
    answers_.emplace_back(id, label);
    ++accepted;
  }
  if (learner.pending().empty() && !learner.Finished()) {
    status_ = SessionStatus::kTraining;
    LaunchSelection();
  }
  PersistLocked();
  json out = {{"schema_version", kSchemaVersion},
              {"accepted", accepted},
              {"rejected", rejected},
              {"remaining_budget", learner.config().budget -
                                       static_cast<int>(answers_.size())}};
  if (!rejected.empty()) {
    throw ApiError(409, "some answers are not for pending questions", out);
  }
  return out;
}

void Session::LaunchSelection() {
  if (worker_.joinable()) worker_.join();
  worker_ = std::thread([this] {
    std::string error;
    try {
      ws_->learner->Advance();
    } catch (const std::exception& e) {
      error = e.what();
    }
    std::lock_guard<std::mutex> lock(mu_);
    last_error_ = error;
    status_ = SessionStatus::kAwaitingLabels;
    PersistLocked();
    idle_.notify_all();
  });
}

void Session::WaitIdle() {
  std::unique_lock<std::mutex> lock(mu_);
  idle_.wait(lock, [this] { return status_ != SessionStatus::kTraining; });
}

void Session::RepairLocked() {
  const SessionStatus before = status_;
  status_ = SessionStatus::kRepairing;
  try {
    const EnsembleModel model = ws_->learner->TrainModel();
    repair_ = RepairAll(ws_->prepared.clusters, ws_->prepared.features, model,
                        spec_.match_threshold);
  } catch (const Error& e) {
    status_ = before;
    throw ApiError(409, e.what());
  }
  repaired_early_ = !ws_->learner->Finished();
  status_ = SessionStatus::kDone;
}

json Session::Repair() {
  std::lock_guard<std::mutex> lock(mu_);
  if (status_ == SessionStatus::kTraining) {
    throw ApiError(409, "batch selection in progress");
  }
  if (status_ != SessionStatus::kDone) {
    RepairLocked();
    PersistLocked();
  }
  size_t changed = 0;
  for (const RepairedClustering& r : repair_->per_cluster) {
    if (r.clusters.size() > 1) ++changed;
  }
  json out = {{"schema_version", kSchemaVersion},
              {"status", SessionStatusName(status_)},
              {"initial_clusters", ws_->prepared.clusters.size()},
              {"repaired_clusters", repair_->clusters.size()},
              {"split_clusters", changed},
              {"labels_used", answers_.size()},
              {"budget_exhausted", !repaired_early_},
              {"early_repair", repaired_early_}};
  if (ws_->dataset.gold) {
    const QualityReport q = PairwisePrf(repair_->clusters, *ws_->dataset.gold);
    out["quality"] = {{"precision", q.precision},
                      {"recall", q.recall},
                      {"f1", q.f1}};
  }
  return out;
}

json Session::Clusters() {
  std::lock_guard<std::mutex> lock(mu_);
  if (!repair_) throw ApiError(409, "repair has not run");
  json clusters = json::array();
  for (size_t c = 0; c < repair_->clusters.size(); ++c) {
    const auto& members = repair_->clusters[c];
    clusters.push_back(
        {{"cluster_id", c},
         {"origin_cluster_id",
          repair_->provenance.at(members.front()).origin_cluster_id},
         {"size", members.size()},
         {"records", members}});
  }
  json non_matches = json::array();
  for (size_t i = 0; i < repair_->per_cluster.size(); ++i) {
    const int origin = repair_->per_cluster[i].origin_cluster_id;
    const Cluster* cluster = nullptr;
    for (const Cluster& c : ws_->prepared.clusters) {
      if (c.cluster_id == origin) cluster = &c;
    }
    for (size_t e : repair_->partitions[i].non_matches()) {
      const Edge& edge = cluster->graph.edge(e);
      non_matches.push_back({{"origin_cluster_id", origin},
                             {"record_a", cluster->graph.id(edge.u)},
                             {"record_b", cluster->graph.id(edge.v)},
                             {"similarity", edge.similarity}});
    }
  }
  return {{"schema_version", kSchemaVersion},
          {"clusters", std::move(clusters)},
          {"non_match_edges", std::move(non_matches)}};
}

json Session::StatusLocked() const {
  json out = {{"schema_version", kSchemaVersion},
              {"session_id", id_},
              {"status", SessionStatusName(status_)},
              {"budget", spec_.selection.budget},
              {"iter_budget", spec_.selection.iter_budget},
              {"strategy", StrategyName(spec_.selection.strategy)},
              {"labeled", answers_.size()},
              {"remaining_budget", spec_.selection.budget -
                                       static_cast<int>(answers_.size())},
              {"repaired", repair_.has_value()},
              {"early_repair", repaired_early_}};
  if (status_ != SessionStatus::kTraining) {
    out["iteration"] = ws_->learner->iteration();
    out["pending"] = ws_->learner->pending().size();
    out["labeling_complete"] = ws_->learner->Finished();
  }
  if (!last_error_.empty()) out["error"] = last_error_;
  return out;
}

json Session::Status() {
  std::lock_guard<std::mutex> lock(mu_);
  return StatusLocked();
}

EnsembleModel Session::TrainModel() {
  WaitIdle();
  std::lock_guard<std::mutex> lock(mu_);
  return ws_->learner->TrainModel();
}

size_t Session::training_size() {
  std::lock_guard<std::mutex> lock(mu_);
  return answers_.size();
}

void Session::PersistLocked() {
  if (snapshot_path_.empty()) return;
  json answers = json::array();
  for (const auto& [id, label] : answers_) {
    answers.push_back({{"question_id", id}, {"label", LabelName(label)}});
  }
  json snap = {{"schema_version", kSchemaVersion},
               {"session_id", id_},
               {"spec", SessionSpecJson(spec_)},
               {"status", SessionStatusName(status_)},
               {"answers", std::move(answers)}};
  WriteFileAtomic(snapshot_path_, snap.dump(1) + "\n");
}

SessionManager::SessionManager(std::filesystem::path state_dir)
    : state_dir_(std::move(state_dir)) {
  std::filesystem::create_directories(state_dir_);
}

size_t SessionManager::RestoreAll() {
  size_t restored = 0;
  for (const auto& entry : std::filesystem::directory_iterator(state_dir_)) {
    if (entry.path().extension() != ".json") continue;
    std::shared_ptr<Session> session = Session::Restore(entry.path());
    std::lock_guard<std::mutex> lock(mu_);
    sessions_[session->id()] = std::move(session);
    ++restored;
  }
  return restored;
}

std::string SessionManager::NewId() {
  static thread_local std::random_device device;
  const uint64_t entropy =
      (static_cast<uint64_t>(device()) << 32) ^ device();
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(
                    DeriveSeed(entropy, ++counter_)));
  return buf;
}

std::string SessionManager::Create(const json& body) {
  SessionSpec spec = ParseSessionSpec(body);
  std::string id;
  {
    std::lock_guard<std::mutex> lock(mu_);
    do {
      id = NewId();
    } while (sessions_.contains(id));
  }
  std::shared_ptr<Session> session;
  try {
    session = std::make_shared<Session>(id, std::move(spec),
                                        state_dir_ / (id + ".json"));
  } catch (const Error& e) {
    throw ApiError(400, e.what());
  }
  std::lock_guard<std::mutex> lock(mu_);
  sessions_[id] = std::move(session);
  return id;
}

std::shared_ptr<Session> SessionManager::Get(const std::string& id) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) {
    throw ApiError(404, "unknown session '" + id + "'");
  }
  return it->second;
}

}  // namespace graphcr
