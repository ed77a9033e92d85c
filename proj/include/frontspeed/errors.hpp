#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace frontspeed {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated precondition on a user-supplied argument.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class MeshTooCoarse : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

// k(0) <= 0: the linear speed is undefined.
class AssumptionViolated : public Error {
 public:
  using Error::Error;
};

class BracketNotFound : public Error {
 public:
  using Error::Error;
};

class SpeedBelowLinear : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class TailNotResolved : public Error {
 public:
  using Error::Error;
};

class Instability : public Error {
 public:
  using Error::Error;
};

class FrontHitBoundary : public Error {
 public:
  using Error::Error;
};

class FitRejected : public Error {
 public:
  using Error::Error;
};

class BracketInvalid : public Error {
 public:
  using Error::Error;
};

// Config parse failure with a 1-based source position.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace frontspeed
