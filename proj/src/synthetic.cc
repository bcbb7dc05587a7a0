#include "graphcr/synthetic.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "graphcr/rng.h"

namespace graphcr {

namespace {

constexpr const char* kWords[] = {
    "love",   "night",  "dream",  "heart",  "fire",   "river",  "blue",
    "golden", "shadow", "summer", "winter", "city",   "road",   "light",
    "dance",  "song",   "rain",   "storm",  "ocean",  "silver", "moon",
    "star",   "wild",   "broken", "secret", "little", "electric", "paper",
    "glass",  "echo",   "garden", "desert", "velvet", "thunder", "morning",
    "midnight", "angel", "ghost", "empire", "machine", "harbor", "crystal",
    "forest", "island", "mirror", "north",  "sugar",  "rocket", "honey",
    "lonely", "neon",   "stone",  "highway", "orchid", "copper", "tiger",
    "valley", "window", "cherry", "falcon"};
constexpr size_t kNumWords = sizeof(kWords) / sizeof(kWords[0]);

constexpr const char* kArtists[] = {
    "The Vines",   "Mara Holt",    "Echo Park",   "Lena Frost",
    "Blue Harbor", "Kai Moreno",   "Night Owls",  "Sofia Lind",
    "Iron Saints", "June Parker",  "Red Lanterns", "Otto Brandt"};
constexpr size_t kNumArtists = sizeof(kArtists) / sizeof(kArtists[0]);

std::string Title(Rng& rng) {
  const size_t words = 2 + rng.UniformIndex(3);
  std::string out;
  for (size_t i = 0; i < words; ++i) {
    if (i) out += ' ';
    out += kWords[rng.UniformIndex(kNumWords)];
  }
  return out;
}

// Swaps one word of `base` for a random word, or appends one.
std::string Variant(const std::string& base, Rng& rng) {
  std::vector<std::string> words;
  size_t start = 0;
  while (start <= base.size()) {
    size_t end = base.find(' ', start);
    if (end == std::string::npos) end = base.size();
    words.push_back(base.substr(start, end - start));
    start = end + 1;
  }
  if (rng.Bernoulli(0.5)) {
    words[rng.UniformIndex(words.size())] = kWords[rng.UniformIndex(kNumWords)];
  } else {
    words.push_back(kWords[rng.UniformIndex(kNumWords)]);
  }
  std::string out;
  for (size_t i = 0; i < words.size(); ++i) {
    if (i) out += ' ';
    out += words[i];
  }
  return out;
}

std::string Corrupt(std::string value, Rng& rng) {
  const size_t edits = 1 + rng.UniformIndex(3);
  for (size_t i = 0; i < edits && !value.empty(); ++i) {
    const size_t at = rng.UniformIndex(value.size());
    const char letter = static_cast<char>('a' + rng.UniformIndex(26));
    switch (rng.UniformIndex(4)) {
      case 0: value.erase(at, 1); break;
      case 1: value.insert(value.begin() + at, letter); break;
      case 2: value[at] = letter; break;
      default:
        if (at + 1 < value.size()) std::swap(value[at], value[at + 1]);
        break;
    }
  }
  return value;
}

std::vector<uint32_t> Trigrams(std::string_view text) {
  std::string padded = "  ";
  for (char c : text) {
    padded += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  padded += "  ";
  std::vector<uint32_t> grams;
  for (size_t i = 0; i + 3 <= padded.size(); ++i) {
    grams.push_back((static_cast<uint32_t>(static_cast<unsigned char>(padded[i])) << 16) |
                    (static_cast<uint32_t>(static_cast<unsigned char>(padded[i + 1])) << 8) |
                    static_cast<uint32_t>(static_cast<unsigned char>(padded[i + 2])));
  }
  std::sort(grams.begin(), grams.end());
  grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
  return grams;
}

double Jaccard(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  if (a.empty() && b.empty()) return 1.0;
  size_t common = 0;
  size_t i = 0;
  size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  return static_cast<double>(common) /
         static_cast<double>(a.size() + b.size() - common);
}

}  // namespace

double TrigramSimilarity(std::string_view a, std::string_view b) {
  return Jaccard(Trigrams(a), Trigrams(b));
}

Dataset GenerateSynthetic(const SyntheticConfig& config) {
  if (config.entities < 1 || config.sources < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "synthetic dataset needs entities and sources");
  }
  Rng rng(config.seed);
  Dataset data;
  data.name = "synthetic";
  data.gold.emplace();

  struct Entity {
    std::string title;
    std::string artist;
    std::string year;
  };
  std::vector<Entity> entities;
  for (int e = 0; e < config.entities; ++e) {
    Entity entity;
    if (!entities.empty() && rng.Bernoulli(config.variant_ratio)) {
      const Entity& base = entities[rng.UniformIndex(entities.size())];
      entity.title = Variant(base.title, rng);
      entity.artist = base.artist;
    } else {
      entity.title = Title(rng);
      entity.artist = kArtists[rng.UniformIndex(kNumArtists)];
    }
    entity.year = std::to_string(1960 + rng.UniformIndex(60));
    entities.push_back(entity);
  }

  std::vector<int> per_source(config.sources, 0);
  std::vector<std::string> titles;
  char id[32];
  for (int e = 0; e < config.entities; ++e) {
    std::vector<int> sources(config.sources);
    for (int s = 0; s < config.sources; ++s) sources[s] = s;
    for (int s = config.sources - 1; s > 0; --s) {
      std::swap(sources[s], sources[rng.UniformIndex(s + 1)]);
    }
    size_t copies = 1;
    if (config.sources > 1 && rng.Bernoulli(config.duplicate_ratio)) {
      copies += 1 + rng.UniformIndex(config.sources - 1);
    }
    char entity_id[32];
    std::snprintf(entity_id, sizeof(entity_id), "e%04d", e);
    for (size_t c = 0; c < copies; ++c) {
      const int source = sources[c];
      std::snprintf(id, sizeof(id), "s%d-%05d", source, per_source[source]++);
      Record record;
      record.record_id = id;
      record.source_id = "s" + std::to_string(source);
      auto field = [&](const std::string& value) {
        return rng.Bernoulli(config.corruption_rate) ? Corrupt(value, rng)
                                                     : value;
      };
      record.attributes = {{"title", field(entities[e].title)},
                           {"artist", field(entities[e].artist)},
                           {"year", field(entities[e].year)}};
      titles.push_back(record.attributes[0].second);
      (*data.gold)[record.record_id] = entity_id;
      data.records.push_back(std::move(record));
    }
  }

  std::vector<std::vector<uint32_t>> grams;
  grams.reserve(titles.size());
  for (const std::string& t : titles) grams.push_back(Trigrams(t));
  std::vector<WeightedPair> pairs;
  for (size_t i = 0; i < data.records.size(); ++i) {
    for (size_t j = i + 1; j < data.records.size(); ++j) {
      const double sim = Jaccard(grams[i], grams[j]);
      if (sim >= config.min_similarity) {
        pairs.push_back({data.records[i].record_id, data.records[j].record_id,
                         std::round(sim * 1e6) / 1e6});
      }
    }
  }
  data.graph = BuildGraph(data.records, pairs);
  return data;
}

}  // namespace graphcr
