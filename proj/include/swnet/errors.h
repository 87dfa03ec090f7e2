#pragma once

#include <stdexcept>
#include <string>

namespace swnet {

// Bad user-supplied parameters (CLI exit code 2).
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// A broken internal invariant, i.e. a bug (CLI exit code 3).
class InvariantViolation : public std::logic_error {
 public:
  explicit InvariantViolation(const std::string& what) : std::logic_error(what) {}
};

}  // namespace swnet
