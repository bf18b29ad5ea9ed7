#pragma once

#include <stdexcept>
#include <string>

namespace overshift {

enum class ErrorKind {
  kInvalidArgument,
  kNoSolution,
  kIllConditioned,
  kInsufficientShots,
  kNumericFailure,
  kBrokenInvariant,
  kSizeLimit,
  kTruncation,
  kDegenerateRule,
  kInvalidModel,
  kInvalidRule,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// CLI exit status for an error kind: 2 infeasible, 3 ill-conditioned,
// 4 insufficient shots, 1 otherwise.
int exit_code(ErrorKind kind);

}  // namespace overshift
