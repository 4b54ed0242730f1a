#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pqlab {

enum class ErrorKind {
  ExponentOrder,
  OutOfRange,
  Precondition,
  QuadratureFailure,
  DivisionDegenerate,
  InsufficientSamples,
  DegenerateFit,
  NonConvergence,
  BracketFailure,
  NonMonotone,
  ConfigError,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool ok, ErrorKind kind, const std::string& what) {
  if (!ok) fail(kind, what);
}

}  // namespace pqlab
