#ifndef GRAPHCR_ERROR_H_
#define GRAPHCR_ERROR_H_

#include <stdexcept>
#include <string>

namespace graphcr {

enum class ErrorCode {
  kUnknownRecord,
  kInvalidSimilarity,
  kDuplicateEdge,
  kSelfLoop,
  kMissingEdge,
  kInvalidRecord,
  kDuplicateRecordId,
  kParseError,
  kInsufficientTraining,
  kMissingFeature,
  kMissingGold,
  kOracleUnavailable,
  kInvalidArgument,
  kIoError,
};

const char* ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception. `line` is the
// 1-based input line for loader errors and 0 otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, int line = 0);

  ErrorCode code() const { return code_; }
  int line() const { return line_; }

 private:
  ErrorCode code_;
  int line_;
};

}  // namespace graphcr

#endif  // GRAPHCR_ERROR_H_
