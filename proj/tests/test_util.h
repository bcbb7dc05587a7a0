#ifndef GRAPHCR_TESTS_TEST_UTIL_H_
#define GRAPHCR_TESTS_TEST_UTIL_H_

#include <map>
#include <set>
#include <string>
#include <vector>

#include "graphcr/graph.h"

namespace graphcr::testing {

// Graph over the records named in `pairs`; source of "x-..." is "x", other
// ids default to their own source.
inline SimilarityGraph MakeGraph(const std::vector<WeightedPair>& pairs,
                                 std::vector<std::string> extra_ids = {}) {
  std::set<std::string> ids(extra_ids.begin(), extra_ids.end());
  for (const auto& p : pairs) {
    ids.insert(p.a);
    ids.insert(p.b);
  }
  std::vector<Record> records;
  for (const auto& id : ids) {
    const auto dash = id.find('-');
    records.push_back(
        {id, dash == std::string::npos ? id : id.substr(0, dash), {}});
  }
  return BuildGraph(records, pairs);
}

inline Cluster SingleCluster(const SimilarityGraph& g) {
  return Cluster{0, g};
}

}  // namespace graphcr::testing

#endif  // GRAPHCR_TESTS_TEST_UTIL_H_
