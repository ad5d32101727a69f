#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kripkesec {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Syntax errors carry a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Raised when an input falls outside what the checker can represent
// finitely: non-silent divergence, exhausted step budget, deep atoms.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// A configured enumeration bound was exceeded.
class BoundError : public Error {
 public:
  using Error::Error;
};

}  // namespace kripkesec
