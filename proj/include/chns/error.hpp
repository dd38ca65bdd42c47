#pragma once

#include <stdexcept>
#include <string>

namespace chns {

// Base for all library failures; the C API maps each subclass to a status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Field or grid shapes that do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// An argument outside the operation's domain (non-solenoidal input, negative
// radius, degenerate window, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Invalid run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Numerical failure during time integration (NaN or norm above the cap).
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, double t) : Error(what), time_(t) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace chns
