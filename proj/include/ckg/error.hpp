#pragma once

#include <stdexcept>
#include <string>

namespace ckg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input (graph files, multiset literals, move specs).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its domain. `code()` is a short stable
/// identifier (e.g. "not-hereditary", "has-sink") used by the CLI and tests.
class PreconditionError : public Error {
 public:
  PreconditionError(std::string code, const std::string& what)
      : Error(code + ": " + what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// A self-check failed: a certificate did not verify. Always a bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace ckg
