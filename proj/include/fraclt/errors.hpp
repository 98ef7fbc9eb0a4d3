#pragma once

#include <stdexcept>
#include <string>

namespace fraclt {

// Invalid argument domain (negative time, H outside (0,1), ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// H = 3/4 and other values the regime classification does not cover.
class UnsupportedRegimeError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Bad configuration: unknown functional, inadmissible f, malformed file, ...
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure failed its own convergence or consistency check.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, std::string diagnostics = {})
      : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}
  const std::string& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::string diagnostics_;
};

// An exact algebraic identity was violated; almost always an indexing bug.
class AlgebraViolation : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Requested work exceeds a configured resource cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fraclt
