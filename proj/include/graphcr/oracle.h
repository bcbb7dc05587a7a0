#ifndef GRAPHCR_ORACLE_H_
#define GRAPHCR_ORACLE_H_

#include <map>
#include <string>
#include <unordered_map>
#include <utility>

#include "graphcr/ensemble.h"

namespace graphcr {

// record_id -> entity_id.
using GoldStandard = std::unordered_map<std::string, std::string>;

// Labeling authority for a presented record pair. Answers must be stable
// within a session.
class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual Label Query(const std::string& record_a,
                      const std::string& record_b) = 0;
};

// MATCH iff both records belong to the same gold entity.
class GoldOracle : public Oracle {
 public:
  explicit GoldOracle(const GoldStandard& gold) : gold_(gold) {}
  Label Query(const std::string& record_a,
              const std::string& record_b) override;

 private:
  const GoldStandard& gold_;
};

// Answers from a prerecorded table of (record_a, record_b, label); pairs are
// unordered. Unknown pairs raise Error{kOracleUnavailable}.
class ReplayOracle : public Oracle {
 public:
  void Add(const std::string& record_a, const std::string& record_b,
           Label label);
  Label Query(const std::string& record_a,
              const std::string& record_b) override;
  size_t size() const { return answers_.size(); }

 private:
  std::map<std::pair<std::string, std::string>, Label> answers_;
};

}  // namespace graphcr

#endif  // GRAPHCR_ORACLE_H_
