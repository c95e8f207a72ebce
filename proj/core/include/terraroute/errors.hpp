#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace terraroute {

// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input (grid files, scenario documents, route files).
class ParseError : public Error {
 public:
  using Error::Error;
};

// A value violates a documented precondition or invariant. `field()` names the
// offending input where one exists (e.g. "weights.k_h").
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message, std::string field = {})
      : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// The end cell cannot be reached from the start cell.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// A solved route failed its own flow-constraint or decomposition check.
class VerificationError : public Error {
 public:
  using Error::Error;
};

// Bad command-line or API usage (unknown format name, missing flag).
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace terraroute
