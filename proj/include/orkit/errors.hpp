#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace orkit {

// Base for every error raised by the library. Callers that only care about
// "something in orkit failed" catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BoundOrderError : public Error {
 public:
  using Error::Error;
};

// An expression references a column the model never issued.
class StaleReferenceError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class UnsupportedOperator : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class UndefinedModel : public Error {
 public:
  using Error::Error;
};

class TraceVersionError : public Error {
 public:
  using Error::Error;
};

class OracleError : public Error {
 public:
  OracleError(std::size_t component, const std::string& what)
      : Error("component " + std::to_string(component) + ": " + what),
        component_(component) {}

  std::size_t component() const { return component_; }

 private:
  std::size_t component_;
};

}  // namespace orkit
