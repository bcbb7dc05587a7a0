#include "graphcr/io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

namespace graphcr {

bool CsvReader::Next(std::vector<std::string>& row) {
  row.clear();
  std::string field;
  bool in_quotes = false;
  bool any = false;
  bool field_quoted = false;
  int c;
  while ((c = in_.get()) != EOF) {
    if (!any) {
      ++line_;
      row_line_ = line_;
      any = true;
    }
    const char ch = static_cast<char>(c);
    if (in_quotes) {
      if (ch == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field += '"';
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++line_;
        field += ch;
      }
      continue;
    }
    if (ch == '"') {
      if (!field.empty() || field_quoted) {
        throw Error(ErrorCode::kParseError, "stray quote in field", line_);
      }
      in_quotes = true;
      field_quoted = true;
    } else if (ch == ',') {
      row.push_back(std::move(field));
      field.clear();
      field_quoted = false;
    } else if (ch == '\n') {
      if (row.empty() && field.empty() && !field_quoted) {
        // Blank line.
        any = false;
        continue;
      }
      row.push_back(std::move(field));
      return true;
    } else if (ch == '\r' && in_.peek() == '\n') {
      continue;
    } else {
      if (field_quoted) {
        throw Error(ErrorCode::kParseError, "text after closing quote",
                    line_);
      }
      field += ch;
    }
  }
  if (in_quotes) {
    throw Error(ErrorCode::kParseError, "unterminated quoted field",
                row_line_);
  }
  if (!any) return false;
  row.push_back(std::move(field));
  return true;
}

std::string CsvField(std::string_view value) {
  if (value.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(value);
  }
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void WriteCsvRow(std::ostream& out, std::span<const std::string> fields) {
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << CsvField(fields[i]);
  }
  out << '\n';
}

std::string FormatDouble(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

std::optional<double> ParseDouble(std::string_view text) {
  double value = 0.0;
  auto [end, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty()) {
    return std::nullopt;
  }
  return value;
}

namespace {

std::ifstream OpenInput(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  }
  return in;
}

void ExpectHeader(CsvReader& reader, std::vector<std::string>& row,
                  std::span<const std::string_view> prefix,
                  const char* what) {
  if (!reader.Next(row)) {
    throw Error(ErrorCode::kParseError,
                std::string(what) + ": missing header", 1);
  }
  bool ok = row.size() >= prefix.size();
  for (size_t i = 0; ok && i < prefix.size(); ++i) ok = row[i] == prefix[i];
  if (!ok) {
    std::string expected;
    for (auto p : prefix) expected += std::string(p) + ",";
    expected.pop_back();
    throw Error(ErrorCode::kParseError,
                std::string(what) + ": header must start with " + expected,
                reader.line());
  }
}

}  // namespace

std::vector<Record> ReadRecords(std::istream& in) {
  CsvReader reader(in);
  std::vector<std::string> header;
  static constexpr std::string_view kPrefix[] = {"record_id", "source_id"};
  ExpectHeader(reader, header, kPrefix, "records");
  std::vector<Record> records;
  std::unordered_set<std::string> seen;
  std::vector<std::string> row;
  while (reader.Next(row)) {
    if (row.size() != header.size()) {
      throw Error(ErrorCode::kParseError,
                  "records: expected " + std::to_string(header.size()) +
                      " columns, got " + std::to_string(row.size()),
                  reader.line());
    }
    if (row[0].empty() || row[1].empty()) {
      throw Error(ErrorCode::kParseError,
                  "records: empty record_id or source_id", reader.line());
    }
    if (!seen.insert(row[0]).second) {
      throw Error(ErrorCode::kDuplicateRecordId,
                  "duplicate record_id '" + row[0] + "'", reader.line());
    }
    Record r;
    r.record_id = row[0];
    r.source_id = row[1];
    for (size_t i = 2; i < row.size(); ++i) {
      r.attributes.emplace_back(header[i], row[i]);
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<Record> LoadRecords(const std::filesystem::path& path) {
  std::ifstream in = OpenInput(path);
  return ReadRecords(in);
}

void WriteRecords(std::ostream& out, std::span<const Record> records) {
  std::vector<std::string> header = {"record_id", "source_id"};
  if (!records.empty()) {
    for (const auto& [key, value] : records.front().attributes) {
      header.push_back(key);
    }
  }
  WriteCsvRow(out, header);
  for (const Record& r : records) {
    std::vector<std::string> row = {r.record_id, r.source_id};
    for (const auto& [key, value] : r.attributes) row.push_back(value);
    WriteCsvRow(out, row);
  }
}

SimilarityGraph ReadEdges(std::istream& in, std::span<const Record> records) {
  CsvReader reader(in);
  std::vector<std::string> row;
  static constexpr std::string_view kHeader[] = {
      "source_record_id", "target_record_id", "similarity"};
  ExpectHeader(reader, row, kHeader, "edges");
  std::unordered_set<std::string_view> ids;
  for (const Record& r : records) ids.insert(r.record_id);
  std::set<std::pair<std::string, std::string>> seen;
  std::vector<WeightedPair> pairs;
  while (reader.Next(row)) {
    const int line = reader.line();
    if (row.size() != 3) {
      throw Error(ErrorCode::kParseError,
                  "edges: expected 3 columns, got " +
                      std::to_string(row.size()),
                  line);
    }
    for (int i = 0; i < 2; ++i) {
      if (!ids.contains(row[i])) {
        throw Error(ErrorCode::kUnknownRecord,
                    "unknown record '" + row[i] + "'", line);
      }
    }
    if (row[0] == row[1]) {
      throw Error(ErrorCode::kSelfLoop, "self-loop on '" + row[0] + "'",
                  line);
    }
    const auto sim = ParseDouble(row[2]);
    if (!sim) {
      throw Error(ErrorCode::kParseError,
                  "edges: bad similarity '" + row[2] + "'", line);
    }
    if (!(*sim >= 0.0 && *sim <= 1.0)) {
      throw Error(ErrorCode::kInvalidSimilarity,
                  "similarity " + row[2] + " outside [0,1]", line);
    }
    auto key = std::minmax(row[0], row[1]);
    if (!seen.emplace(key.first, key.second).second) {
      throw Error(ErrorCode::kDuplicateEdge,
                  "duplicate edge '" + row[0] + "'-'" + row[1] + "'", line);
    }
    pairs.push_back({row[0], row[1], *sim});
  }
  return BuildGraph(records, pairs);
}

SimilarityGraph LoadEdges(const std::filesystem::path& path,
                          std::span<const Record> records) {
  std::ifstream in = OpenInput(path);
  return ReadEdges(in, records);
}

void WriteEdges(std::ostream& out, const SimilarityGraph& graph) {
  out << "source_record_id,target_record_id,similarity\n";
  for (const Edge& e : graph.edges()) {
    out << CsvField(graph.id(e.u)) << ',' << CsvField(graph.id(e.v)) << ','
        << FormatDouble(e.similarity) << '\n';
  }
}

GoldStandard ReadGold(std::istream& in) {
  CsvReader reader(in);
  std::vector<std::string> row;
  static constexpr std::string_view kHeader[] = {"record_id", "entity_id"};
  ExpectHeader(reader, row, kHeader, "gold");
  GoldStandard gold;
  while (reader.Next(row)) {
    if (row.size() != 2 || row[0].empty() || row[1].empty()) {
      throw Error(ErrorCode::kParseError,
                  "gold: expected record_id,entity_id", reader.line());
    }
    if (!gold.emplace(row[0], row[1]).second) {
      throw Error(ErrorCode::kParseError,
                  "gold: duplicate record_id '" + row[0] + "'",
                  reader.line());
    }
  }
  return gold;
}

GoldStandard LoadGold(const std::filesystem::path& path) {
  std::ifstream in = OpenInput(path);
  return ReadGold(in);
}

void WriteGold(std::ostream& out, const GoldStandard& gold) {
  std::map<std::string, std::string> sorted(gold.begin(), gold.end());
  out << "record_id,entity_id\n";
  for (const auto& [record, entity] : sorted) {
    out << CsvField(record) << ',' << CsvField(entity) << '\n';
  }
}

void WriteClusters(std::ostream& out, const Partition& clusters) {
  out << "record_id,cluster_id\n";
  for (size_t c = 0; c < clusters.size(); ++c) {
    std::vector<std::string> members = clusters[c];
    std::sort(members.begin(), members.end());
    for (const std::string& record : members) {
      out << CsvField(record) << ',' << c << '\n';
    }
  }
}

void WriteClusters(const std::filesystem::path& path,
                   const Partition& clusters) {
  std::ostringstream out;
  WriteClusters(out, clusters);
  WriteFileAtomic(path, out.str());
}

Partition ReadClusters(std::istream& in) {
  CsvReader reader(in);
  std::vector<std::string> row;
  static constexpr std::string_view kHeader[] = {"record_id", "cluster_id"};
  ExpectHeader(reader, row, kHeader, "clusters");
  std::map<long long, std::vector<std::string>> by_id;
  std::unordered_set<std::string> seen;
  while (reader.Next(row)) {
    long long id = -1;
    if (row.size() != 2 ||
        std::from_chars(row[1].data(), row[1].data() + row[1].size(), id)
                .ptr != row[1].data() + row[1].size() ||
        id < 0 || row[1].empty()) {
      throw Error(ErrorCode::kParseError,
                  "clusters: expected record_id,cluster_id", reader.line());
    }
    if (!seen.insert(row[0]).second) {
      throw Error(ErrorCode::kParseError,
                  "clusters: duplicate record_id '" + row[0] + "'",
                  reader.line());
    }
    by_id[id].push_back(row[0]);
  }
  Partition out;
  for (auto& [id, members] : by_id) out.push_back(std::move(members));
  return out;
}

Partition LoadClusters(const std::filesystem::path& path) {
  std::ifstream in = OpenInput(path);
  return ReadClusters(in);
}

ReplayOracle LoadReplay(const std::filesystem::path& path) {
  std::ifstream in = OpenInput(path);
  CsvReader reader(in);
  std::vector<std::string> row;
  static constexpr std::string_view kHeader[] = {"record_a", "record_b",
                                                 "label"};
  ExpectHeader(reader, row, kHeader, "replay");
  ReplayOracle oracle;
  while (reader.Next(row)) {
    if (row.size() != 3) {
      throw Error(ErrorCode::kParseError,
                  "replay: expected record_a,record_b,label", reader.line());
    }
    try {
      oracle.Add(row[0], row[1], ParseLabel(row[2]));
    } catch (const Error& e) {
      throw Error(ErrorCode::kParseError, e.what(), reader.line());
    }
  }
  return oracle;
}

nlohmann::ordered_json ReportJson(const ExperimentCell& cell) {
  nlohmann::ordered_json j;
  j["dataset"] = cell.dataset;
  j["budget"] = cell.budget;
  j["strategy"] = StrategyName(cell.strategy);
  j["noise_ratio"] = cell.noise_ratio;
  j["threshold"] = cell.threshold;
  j["precision"] = cell.precision;
  j["recall"] = cell.recall;
  j["f1"] = cell.f1;
  j["baseline_f1"] = cell.baseline_f1;
  j["repetitions"] = cell.repetitions;
  nlohmann::ordered_json runs = nlohmann::ordered_json::array();
  for (size_t r = 0; r < cell.runs.size(); ++r) {
    const QualityReport& q = cell.runs[r];
    nlohmann::ordered_json run;
    run["seed"] = r < cell.seeds.size() ? cell.seeds[r] : 0;
    run["precision"] = q.precision;
    run["recall"] = q.recall;
    run["f1"] = q.f1;
    run["true_positives"] = q.true_positives;
    run["false_positives"] = q.false_positives;
    run["false_negatives"] = q.false_negatives;
    run["baseline_f1"] =
        r < cell.baseline_runs.size() ? cell.baseline_runs[r] : 0.0;
    runs.push_back(std::move(run));
  }
  j["runs"] = std::move(runs);
  return j;
}

void WriteReport(std::ostream& out, std::span<const ExperimentCell> cells) {
  for (const ExperimentCell& cell : cells) out << ReportJson(cell).dump() << '\n';
}

void WriteReport(const std::filesystem::path& path,
                 std::span<const ExperimentCell> cells) {
  std::ostringstream out;
  WriteReport(out, cells);
  WriteFileAtomic(path, out.str());
}

nlohmann::ordered_json AuditJson(const AuditEntry& entry) {
  const Question& q = entry.question;
  nlohmann::ordered_json j;
  j["iteration"] = q.iteration;
  j["vector_id"] = q.vector_id;
  j["record_a"] = q.record_a;
  j["record_b"] = q.record_b;
  j["seeding"] = q.seeding;
  if (q.seeding) {
    j["unc"] = nullptr;
    j["weight"] = nullptr;
    j["cos"] = nullptr;
    j["score"] = nullptr;
  } else {
    j["unc"] = q.measures.unc;
    j["weight"] = q.measures.weight;
    j["cos"] = q.measures.cos;
    j["score"] = q.measures.score;
  }
  j["label"] = LabelName(entry.label);
  j["elapsed_ms"] = entry.elapsed_ms;
  return j;
}

void WriteAudit(std::ostream& out, std::span<const AuditEntry> entries) {
  for (const AuditEntry& e : entries) out << AuditJson(e).dump() << '\n';
}

Dataset LoadDataset(const std::filesystem::path& records,
                    const std::filesystem::path& edges,
                    const std::filesystem::path& gold) {
  Dataset data;
  data.name = records.parent_path().filename().string();
  if (data.name.empty()) data.name = records.stem().string();
  data.records = LoadRecords(records);
  data.graph = LoadEdges(edges, data.records);
  if (!gold.empty()) data.gold = LoadGold(gold);
  return data;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in = OpenInput(path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void WriteFileAtomic(const std::filesystem::path& path,
                     std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorCode::kIoError,
                  "cannot write '" + tmp.string() + "'");
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) {
      throw Error(ErrorCode::kIoError,
                  "write failed for '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw Error(ErrorCode::kIoError, "cannot rename into '" + path.string() +
                                         "': " + ec.message());
  }
}

}  // namespace graphcr
