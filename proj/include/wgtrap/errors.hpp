#pragma once

#include <stdexcept>
#include <string>

namespace wgtrap {

// Argument outside the mathematical domain of an operation (z past the end
// of a trajectory, a point outside the window, n_core <= n_clad, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A layout or grid violates one of its structural invariants.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user configuration: unknown preset, malformed file, step-size guard.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LookupError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Non-finite field values during propagation. Carries the z at which the
// solver gave up.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double z_um)
      : std::runtime_error(what), z_um_(z_um) {}
  double z_um() const noexcept { return z_um_; }

 private:
  double z_um_;
};

class FitQualityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wgtrap
