#include "graphcr/oracle.h"

namespace graphcr {

namespace {

std::pair<std::string, std::string> Key(const std::string& a,
                                        const std::string& b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

}  // namespace

Label GoldOracle::Query(const std::string& record_a,
                        const std::string& record_b) {
  auto a = gold_.find(record_a);
  auto b = gold_.find(record_b);
  if (a == gold_.end() || b == gold_.end()) {
    throw Error(ErrorCode::kMissingGold,
                "no gold entity for '" +
                    (a == gold_.end() ? record_a : record_b) + "'");
  }
  return a->second == b->second ? Label::kMatch : Label::kNonMatch;
}

void ReplayOracle::Add(const std::string& record_a,
                       const std::string& record_b, Label label) {
  auto [it, inserted] = answers_.emplace(Key(record_a, record_b), label);
  if (!inserted && it->second != label) {
    throw Error(ErrorCode::kInvalidArgument, "conflicting replay labels for '" +
                                                 record_a + "'-'" + record_b +
                                                 "'");
  }
}

Label ReplayOracle::Query(const std::string& record_a,
                          const std::string& record_b) {
  auto it = answers_.find(Key(record_a, record_b));
  if (it == answers_.end()) {
    throw Error(ErrorCode::kOracleUnavailable,
                "replay has no answer for '" + record_a + "'-'" + record_b +
                    "'");
  }
  return it->second;
}

}  // namespace graphcr
