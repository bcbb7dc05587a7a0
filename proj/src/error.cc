#include "graphcr/error.h"

namespace graphcr {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownRecord: return "UnknownRecord";
    case ErrorCode::kInvalidSimilarity: return "InvalidSimilarity";
    case ErrorCode::kDuplicateEdge: return "DuplicateEdge";
    case ErrorCode::kSelfLoop: return "SelfLoop";
    case ErrorCode::kMissingEdge: return "MissingEdge";
    case ErrorCode::kInvalidRecord: return "InvalidRecord";
    case ErrorCode::kDuplicateRecordId: return "DuplicateRecordId";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kInsufficientTraining: return "InsufficientTraining";
    case ErrorCode::kMissingFeature: return "MissingFeature";
    case ErrorCode::kMissingGold: return "MissingGold";
    case ErrorCode::kOracleUnavailable: return "OracleUnavailable";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

namespace {

std::string Decorate(ErrorCode code, const std::string& message, int line) {
  std::string out = ErrorCodeName(code);
  if (line > 0) out += " (line " + std::to_string(line) + ")";
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, int line)
    : std::runtime_error(Decorate(code, message, line)),
      code_(code),
      line_(line) {}

}  // namespace graphcr
