#pragma once

#include <stdexcept>
#include <string>

namespace chipfire {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input (tree files, configuration lists).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its documented domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A combinatorial guard (subtree cap, state cap, enumeration guard) tripped.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// A constructive procedure produced output that fails its own
/// postcondition. Carries a human-readable certificate.
class TheoremViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace chipfire
