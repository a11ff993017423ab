#pragma once

#include <stdexcept>
#include <string>

namespace congamma {

/// Base class for every error raised by the library. `parameter()` names the
/// offending input when one can be identified.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, std::string parameter = {})
      : std::runtime_error(what), parameter_(std::move(parameter)) {}

  const std::string& parameter() const noexcept { return parameter_; }

 private:
  std::string parameter_;
};

/// Input outside the mathematical domain of an operation.
class DomainError : public Error {
  using Error::Error;
};

/// Query beyond the range covered by a precomputed table.
class RangeError : public Error {
  using Error::Error;
};

/// Request exceeds a configured size or time ceiling.
class ResourceError : public Error {
  using Error::Error;
};

/// Malformed configuration or command-line input.
class ValidationError : public Error {
  using Error::Error;
};

/// Cache file failed to parse or verify.
class CorruptionError : public Error {
 public:
  CorruptionError(const std::string& what, long line = 0)
      : Error(what, "cache"), line_(line) {}
  long line() const noexcept { return line_; }

 private:
  long line_;
};

/// Cancellation or truncation needs more working precision (or terms) than the
/// policy allows. `suggested()` is a sufficient value for `parameter()`
/// ("digits" or "max_terms") under the precision rule.
class PrecisionExhausted : public Error {
 public:
  PrecisionExhausted(const std::string& what, long suggested,
                     std::string parameter = "digits")
      : Error(what, std::move(parameter)), suggested_(suggested) {}
  long suggested() const noexcept { return suggested_; }

 private:
  long suggested_;
};

/// Matching matrix is singular (exactly at a bound state or a degenerate
/// wavenumber).
class SingularError : public Error {
  using Error::Error;
};

}  // namespace congamma
