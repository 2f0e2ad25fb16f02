#pragma once

#include <stdexcept>
#include <string>

namespace qflag {

/// Bad user input: unsupported type, malformed weight, q outside (0,1).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A mathematical precondition failed (non-dominant weight, unreduced word).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Size guard tripped (module dimension cap, truncation too small).
class OverflowError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Internal inconsistency; indicates a convention bug rather than bad input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace qflag
