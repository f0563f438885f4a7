#pragma once

#include <stdexcept>
#include <string>

namespace bdiv {

/// Raised when arguments violate an operation's preconditions (shape
/// mismatch, unsupported dimension, periodic axis where a primitive is
/// needed, ...).
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised on malformed or truncated field files and other I/O failures.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InvalidArgument(what);
}

}  // namespace bdiv
