#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ontoguard {

/// Base for every error this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input (Turtle, query, CSV, plan files).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column,
             std::string token = {})
      : Error(format(what, line, column, token)),
        message_(what),
        line_(line),
        column_(column),
        token_(std::move(token)) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& token() const noexcept { return token_; }
  /// Message without the position prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  static std::string format(const std::string& what, std::size_t line,
                            std::size_t column, const std::string& token) {
    std::string msg = std::to_string(line) + ":" + std::to_string(column) + ": " + what;
    if (!token.empty()) msg += " (at '" + token + "')";
    return msg;
  }

  std::string message_;
  std::size_t line_;
  std::size_t column_;
  std::string token_;
};

/// Structural violation of a data model (bad term position, cycle, overlap).
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Annotation content that violates the dataset contract.
class AnnotationError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument to an image transform or metric.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

}  // namespace ontoguard
