#pragma once

#include <stdexcept>
#include <string>

namespace primebounds {

// All library failures derive from Error so callers (the CLI in particular)
// can map them to exit codes without knowing every subtype.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Request exceeds the configured scan cap.
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

// Inconsistent inputs supplied by the caller (e.g. incomplete base primes).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// An integer intermediate would leave the representable range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

// A scan was asked for under a monotonicity requirement that does not hold.
class MonotonicityError : public Error {
 public:
  using Error::Error;
};

// Unknown name or id supplied by the caller.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

}  // namespace primebounds
