#include "forensica/error.hpp"

namespace forensica {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidLabel: return "invalid-label";
    case ErrorKind::InvalidConfig: return "invalid-config";
    case ErrorKind::IllegalState: return "illegal-state";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::GenerationFailed: return "generation-failed";
    case ErrorKind::MissingRule: return "missing-rule";
    case ErrorKind::Recursion: return "recursion";
    case ErrorKind::MissingBinding: return "missing-binding";
    case ErrorKind::Integrity: return "integrity";
    case ErrorKind::OutOfReach: return "out-of-reach";
    case ErrorKind::Version: return "version";
    case ErrorKind::CorruptWorld: return "corrupt-world";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::NotFound: return "not-found";
  }
  return "unknown";
}

}  // namespace forensica
