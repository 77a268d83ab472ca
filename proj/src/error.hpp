#pragma once

#include <stdexcept>
#include <string>

namespace ggmpl {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  PositiveDefinitenessViolated,
  SampleSizeTooSmall,
  DegenerateChain,
  NonConvergence,
  DegenerateLabels,
  EmptyChain,
  ConstantColumn,
  InfeasibleEdgeCount,
  Io,
  Parse,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, const std::string& what) {
  if (!condition) fail(ErrorCode::InvalidArgument, what);
}

}  // namespace ggmpl
