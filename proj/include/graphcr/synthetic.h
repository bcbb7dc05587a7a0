#ifndef GRAPHCR_SYNTHETIC_H_
#define GRAPHCR_SYNTHETIC_H_

#include <cstdint>
#include <string_view>

#include "graphcr/pipeline.h"

namespace graphcr {

// Multi-source music-like records with known entities. Every entity has one
// record in a random source; with probability duplicate_ratio it gets
// copies in 1..sources-1 further distinct sources. Each attribute of each
// record is corrupted with probability corruption_rate. A share of entities
// reuse most of another entity's title, which produces wrong links. Edges
// connect all record pairs whose title trigram similarity reaches
// min_similarity.
struct SyntheticConfig {
  int entities = 200;
  int sources = 5;
  double duplicate_ratio = 0.5;
  double corruption_rate = 0.2;
  double variant_ratio = 0.3;
  double min_similarity = 0.5;
  uint64_t seed = 1;
};

Dataset GenerateSynthetic(const SyntheticConfig& config);

// Jaccard similarity of the padded, lower-cased character trigram sets.
double TrigramSimilarity(std::string_view a, std::string_view b);

}  // namespace graphcr

#endif  // GRAPHCR_SYNTHETIC_H_
