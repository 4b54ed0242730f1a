#include "pqlab/error.hpp"

namespace pqlab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ExponentOrder: return "ExponentOrder";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::Precondition: return "Precondition";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::DivisionDegenerate: return "DivisionDegenerate";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::DegenerateFit: return "DegenerateFit";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::BracketFailure: return "BracketFailure";
    case ErrorKind::NonMonotone: return "NonMonotone";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace pqlab
