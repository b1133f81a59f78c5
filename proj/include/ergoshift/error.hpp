#pragma once

#include <stdexcept>
#include <string>

namespace ergoshift {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input (words, elements, system specs, configs).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A computation would exceed a configured size cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// A precondition or structural invariant does not hold.
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace ergoshift
