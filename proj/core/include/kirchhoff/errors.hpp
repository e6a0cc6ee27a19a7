#pragma once

#include <stdexcept>
#include <string>

namespace kirchhoff {

/// Invalid or inconsistent configuration (bad key, mismatched lengths, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Precondition on the shape of input data violated by the caller.
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace kirchhoff
