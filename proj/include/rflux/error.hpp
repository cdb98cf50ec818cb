#pragma once

#include <stdexcept>
#include <string>

namespace rflux {

/// Base of every error raised by the library. The CLI maps the concrete
/// subclass to its exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad or inconsistent configuration (exit code 1).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Model could not be read or failed validation (exit code 2).
class ModelError : public Error {
 public:
  using Error::Error;
};

class ParseError : public ModelError {
 public:
  using ModelError::ModelError;
};

class SchemaError : public ModelError {
 public:
  using ModelError::ModelError;
};

class ValidationError : public ModelError {
 public:
  using ModelError::ModelError;
};

/// GPR rule syntax error; `position` is the byte offset of the offending token.
class GprSyntaxError : public ModelError {
 public:
  GprSyntaxError(const std::string& what, std::size_t position)
      : ModelError(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Solver could not certify a status, or a simulation step failed (exit code 3).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace rflux
