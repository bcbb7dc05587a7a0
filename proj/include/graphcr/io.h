#ifndef GRAPHCR_IO_H_
#define GRAPHCR_IO_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "graphcr/active_learning.h"
#include "graphcr/evaluation.h"
#include "graphcr/experiment.h"
#include "graphcr/graph.h"
#include "graphcr/oracle.h"
#include "json.hpp"

namespace graphcr {

// Comma-separated rows with minimal double-quote quoting; quoted fields may
// hold commas, doubled quotes and line breaks.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  // Reads the next row; false at end of input. Throws Error{kParseError} on
  // an unterminated quote.
  bool Next(std::vector<std::string>& row);

  // 1-based line on which the last row started.
  int line() const { return row_line_; }

 private:
  std::istream& in_;
  int line_ = 0;
  int row_line_ = 0;
};

std::string CsvField(std::string_view value);
void WriteCsvRow(std::ostream& out, std::span<const std::string> fields);

// Shortest decimal text that parses back to the same double.
std::string FormatDouble(double value);
// Full-string decimal parse; nullopt on any trailing garbage.
std::optional<double> ParseDouble(std::string_view text);

// records.csv: record_id,source_id,attr_1,...,attr_n
std::vector<Record> ReadRecords(std::istream& in);
std::vector<Record> LoadRecords(const std::filesystem::path& path);
void WriteRecords(std::ostream& out, std::span<const Record> records);

// edges.csv: source_record_id,target_record_id,similarity
SimilarityGraph ReadEdges(std::istream& in, std::span<const Record> records);
SimilarityGraph LoadEdges(const std::filesystem::path& path,
                          std::span<const Record> records);
void WriteEdges(std::ostream& out, const SimilarityGraph& graph);

// gold.csv: record_id,entity_id
GoldStandard ReadGold(std::istream& in);
GoldStandard LoadGold(const std::filesystem::path& path);
void WriteGold(std::ostream& out, const GoldStandard& gold);

// clusters.csv: record_id,cluster_id; cluster ids follow partition order,
// rows sorted by (cluster_id, record_id).
void WriteClusters(std::ostream& out, const Partition& clusters);
void WriteClusters(const std::filesystem::path& path,
                   const Partition& clusters);
Partition ReadClusters(std::istream& in);
Partition LoadClusters(const std::filesystem::path& path);

// Replay answers: record_a,record_b,label
ReplayOracle LoadReplay(const std::filesystem::path& path);

nlohmann::ordered_json ReportJson(const ExperimentCell& cell);
// One JSON object per line.
void WriteReport(std::ostream& out, std::span<const ExperimentCell> cells);
void WriteReport(const std::filesystem::path& path,
                 std::span<const ExperimentCell> cells);

nlohmann::ordered_json AuditJson(const AuditEntry& entry);
void WriteAudit(std::ostream& out, std::span<const AuditEntry> entries);

// Dataset bundle with optional gold (empty path skips it).
Dataset LoadDataset(const std::filesystem::path& records,
                    const std::filesystem::path& edges,
                    const std::filesystem::path& gold = {});

std::string ReadFile(const std::filesystem::path& path);
// Writes through a temporary file and renames it into place.
void WriteFileAtomic(const std::filesystem::path& path,
                     std::string_view contents);

}  // namespace graphcr

#endif  // GRAPHCR_IO_H_
