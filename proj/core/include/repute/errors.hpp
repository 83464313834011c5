#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace repute {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation
/// (inverse of a non-positive number, negative transaction value, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A caller broke an operation's precondition (dimension mismatch, missing
/// empirical weights while the blend factor is positive, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// A linguistic term or identifier could not be resolved.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// A buyer policy violates its parameter ordering (0 < θ < Θ < 1, γ > 1, ...).
class PolicyError : public Error {
 public:
  using Error::Error;
};

/// A scenario configuration failed to parse or validate. Carries every
/// problem found, each prefixed with its source location.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> issues);

  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  std::vector<std::string> issues_;
};

}  // namespace repute
