#pragma once

#include <stdexcept>
#include <string>

namespace adclin {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input violates a documented invariant or precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A sample lies outside the representable full-scale range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Neither the Cholesky factorization nor the pivoted fallback could solve the system.
class SingularSystemError : public Error {
 public:
  using Error::Error;
};

/// Every candidate of a linearizer design failed.
class DesignFailure : public Error {
 public:
  using Error::Error;
};

/// A metric is undefined for the given input (e.g. zero reference power).
class MetricError : public Error {
 public:
  using Error::Error;
};

/// Configuration document is malformed; `key()` names the offending dotted path.
class ConfigError : public ValidationError {
 public:
  ConfigError(std::string key, const std::string& what)
      : ValidationError(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace adclin
