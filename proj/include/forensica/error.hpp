#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace forensica {

enum class ErrorKind {
  InvalidLabel,
  InvalidConfig,
  IllegalState,
  NonConvergence,
  GenerationFailed,
  MissingRule,
  Recursion,
  MissingBinding,
  Integrity,
  OutOfReach,
  Version,
  CorruptWorld,
  Parse,
  NotFound,
};

std::string_view error_kind_name(ErrorKind kind);

// Every failure the engine reports carries one of the kinds above so callers
// (CLI exit codes, HTTP status mapping) can dispatch without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised by parse_world when a bundle breaks an invariant; `path` points at the
// offending field in JSON-pointer form.
class CorruptWorldError : public Error {
 public:
  CorruptWorldError(std::string path, const std::string& what)
      : Error(ErrorKind::CorruptWorld, path + ": " + what), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace forensica
