#pragma once

#include <stdexcept>
#include <string>

namespace gos {

enum class ErrorCode {
  InvalidArgument,
  FullCycle,
  InconsistentLevel,
  Inapplicable,
  BudgetExhausted,
  NotSplit,
  InvalidPoint,
  StabilityViolated,
};

const char* error_code_name(ErrorCode code) noexcept;

// Every failure of a library precondition surfaces as a DomainError.
class DomainError : public std::runtime_error {
 public:
  DomainError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw DomainError(code, what);
}

inline void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace gos
