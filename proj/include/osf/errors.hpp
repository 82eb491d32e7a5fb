#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace osf {

/// Base of every error the library raises on bad input.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(message + " at line " + std::to_string(line) + ", column " +
              std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Input that parses but violates a structural requirement (invalid triple,
/// non-strict map where a strict one is needed, broken precondition).
class SemanticError : public Error {
 public:
  using Error::Error;
};

/// An exhaustive search would exceed its configured budget.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace osf
