#ifndef GRAPHCR_SESSION_H_
#define GRAPHCR_SESSION_H_

#include <condition_variable>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "graphcr/active_learning.h"
#include "graphcr/pipeline.h"
#include "json.hpp"

namespace graphcr {

inline constexpr int kSchemaVersion = 1;

// Request-level failure carrying the HTTP status to answer with.
class ApiError : public std::runtime_error {
 public:
  ApiError(int status, const std::string& message,
           nlohmann::json detail = nullptr)
      : std::runtime_error(message),
        status_(status),
        detail_(std::move(detail)) {}
  int status() const { return status_; }
  // Extra response fields, or null.
  const nlohmann::json& detail() const { return detail_; }

 private:
  int status_;
  nlohmann::json detail_;
};

enum class SessionStatus { kAwaitingLabels, kTraining, kRepairing, kDone };

const char* SessionStatusName(SessionStatus status);

struct SessionSpec {
  std::filesystem::path records;
  std::filesystem::path edges;
  std::filesystem::path gold;  // optional; enables quality in summaries
  SelectionConfig selection;
  double threshold = 0.0;
  double match_threshold = 0.5;
};

// Throws ApiError(400) for missing or ill-typed fields.
SessionSpec ParseSessionSpec(const nlohmann::json& body);
nlohmann::json SessionSpecJson(const SessionSpec& spec);

// One interactive labeling session. Mutations are serialized by an
// internal mutex; batch selection after a completed batch runs on a worker
// thread while the status reads TRAINING. Every transition rewrites the
// snapshot file, which stores the spec and the ordered answers; restoring
// replays them through a fresh LabelSession.
class Session {
 public:
  Session(std::string id, SessionSpec spec,
          std::filesystem::path snapshot_path);
  ~Session();

  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  static std::unique_ptr<Session> Restore(
      const std::filesystem::path& snapshot_path);

  const std::string& id() const { return id_; }

  nlohmann::json Next();
  // Accepts answers for pending questions. Returns {accepted, rejected,
  // remaining_budget}; throws ApiError(409) when any answer was rejected
  // (valid answers in the same request are still applied) and
  // ApiError(400) on a malformed body.
  nlohmann::json SubmitLabels(const nlohmann::json& body);
  // Trains on the current T and repairs every cluster. Allowed before the
  // budget is spent; the response says so.
  nlohmann::json Repair();
  nlohmann::json Clusters();
  nlohmann::json Status();

  // Blocks until no batch selection is running.
  void WaitIdle();

  // Ensemble on the current training set.
  EnsembleModel TrainModel();
  size_t training_size();

 private:
  struct Workspace {
    Dataset dataset;
    PreparedGraph prepared;
    std::unique_ptr<LabelSession> learner;
  };

  Session(std::string id, SessionSpec spec,
          std::filesystem::path snapshot_path, bool defer_first_batch);

  nlohmann::json QuestionJson(const Question& q) const;
  nlohmann::json RecordJson(const std::string& record_id) const;
  void LaunchSelection();
  void PersistLocked();
  nlohmann::json StatusLocked() const;
  void RepairLocked();

  const std::string id_;
  const SessionSpec spec_;
  const std::filesystem::path snapshot_path_;
  std::unique_ptr<Workspace> ws_;
  std::map<std::string, size_t> record_index_;

  std::mutex mu_;
  std::condition_variable idle_;
  std::thread worker_;
  SessionStatus status_ = SessionStatus::kAwaitingLabels;
  std::vector<std::pair<int, Label>> answers_;
  std::optional<RepairResult> repair_;
  bool repaired_early_ = false;
  std::string last_error_;
};

// Owns all sessions; snapshots live in `state_dir`.
class SessionManager {
 public:
  explicit SessionManager(std::filesystem::path state_dir);

  // Reloads every snapshot in the state directory.
  size_t RestoreAll();

  std::string Create(const nlohmann::json& body);
  // Throws ApiError(404).
  std::shared_ptr<Session> Get(const std::string& id);

  const std::filesystem::path& state_dir() const { return state_dir_; }

 private:
  std::string NewId();

  std::filesystem::path state_dir_;
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  uint64_t counter_ = 0;
};

}  // namespace graphcr

#endif  // GRAPHCR_SESSION_H_
