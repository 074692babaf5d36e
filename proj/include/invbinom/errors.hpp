#pragma once

#include <stdexcept>
#include <string>

namespace invbinom {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Unknown constant or identity name.
class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Inconsistent static data, e.g. an identity referring to an unregistered constant.
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Not enough working digits for the requested relation search.
class PrecisionError : public std::runtime_error {
 public:
  PrecisionError(const std::string& what, int required_digits)
      : std::runtime_error(what), required_digits_(required_digits) {}
  int required_digits() const { return required_digits_; }

 private:
  int required_digits_;
};

}  // namespace invbinom
