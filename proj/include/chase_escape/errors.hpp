#pragma once

#include <stdexcept>
#include <string>

namespace chase {

// Invalid user-supplied parameter (bad intensity, radius, probability, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the domain of a closed-form quantity.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Estimator requested in a setting it does not support (e.g. theta on a torus).
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// step() called on a process with no enabled transition.
class AbsorbedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

}  // namespace chase
